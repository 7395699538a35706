#pragma once

// Command-line front end. run_cli takes its arguments and output streams
// explicitly so the test suites can drive every subcommand in-process.
//
// Exit codes: 0 ok, 1 I/O, 2 validation, 3 generation, 4 disconnected.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gwplace/gwplace.hpp"

namespace gwplace::cli {

enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kValidation = 2,
  kGeneration = 3,
  kDisconnected = 4,
};

namespace detail {

inline std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

struct ForceFlags {
  double k = 1.0;
  double force_radius = 0.0;
  CLI::Option* force_radius_opt = nullptr;

  void add(CLI::App* app) {
    app->add_option("--k", k, "Coulomb coupling constant (scales forces, never the ranking)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    force_radius_opt =
        app->add_option("--force-radius", force_radius,
                        "Only pairs within this distance (m) contribute force [default: coverage radius]")
            ->check(CLI::PositiveNumber);
  }

  ForceParams params() const {
    ForceParams p;
    p.k = k;
    if (force_radius_opt->count() > 0) p.force_radius = force_radius;
    return p;
  }
};

struct TrafficFlags {
  TrafficSpec spec;

  void add(CLI::App* app) {
    app->add_option("--rate", spec.offered_rate_mbps, "CBR rate offered by each source (Mbit/s)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--capacity", spec.link_capacity_mbps, "Capacity of every link (Mbit/s)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--packet-size", spec.packet_size_bytes, "Packet size in bytes (reported only)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
};

inline void print_sweep_table(const SweepReport& report, std::ostream& out) {
  out << "node    force            degree  avg_tput_mbps  force_rank  tput_rank\n";
  for (const auto& row : report.rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-7u %-16.9g %-7zu %-14s %-11.9g %s\n", row.node, row.force,
                  row.degree,
                  row.avg_throughput_mbps ? fmt("%.9g", *row.avg_throughput_mbps).c_str()
                                          : "undefined",
                  row.force_rank,
                  row.throughput_rank ? fmt("%.9g", *row.throughput_rank).c_str() : "undefined");
    out << buf;
  }
}

inline std::string correlation_line(const CorrelationReport& c) {
  const auto v = [](const std::optional<double>& x) {
    return x ? fmt("%.6f", *x) : std::string("undefined");
  };
  return "correlation: n=" + std::to_string(c.n) + " pearson=" + v(c.pearson_r) +
         " spearman=" + v(c.spearman_rho);
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-gateway placement for wireless mesh networks by Coulomb-force scoring",
               "gwplace"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<int()> action;

  // gen-grid
  GridSpec grid;
  std::string grid_out;
  auto* gen_grid = app.add_subcommand("gen-grid", "Write a rows x cols lattice topology");
  gen_grid->add_option("--rows", grid.rows, "Grid rows")->check(CLI::PositiveNumber)->capture_default_str();
  gen_grid->add_option("--cols", grid.cols, "Grid columns")->check(CLI::PositiveNumber)->capture_default_str();
  gen_grid->add_option("--spacing", grid.spacing, "Distance between neighbors (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_grid->add_option("--area", grid.area_side, "Side of the square deployment area (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_grid->add_option("--radius", grid.coverage_radius, "Coverage radius (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_grid->add_option("--out", grid_out, "Topology JSON to write")->required();
  gen_grid->callback([&] {
    action = [&] {
      const Topology t = generate_grid(grid);
      save(t, grid_out);
      out << "wrote " << t.size() << " nodes, " << t.edge_count() << " edges to " << grid_out << "\n";
      return kOk;
    };
  });

  // gen-random
  RandomSpec random;
  std::string random_out;
  auto* gen_random = app.add_subcommand("gen-random", "Write a connected uniform random topology");
  gen_random->add_option("--n", random.n, "Number of nodes")->check(CLI::PositiveNumber)->capture_default_str();
  gen_random->add_option("--area", random.area_side, "Side of the square deployment area (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_random->add_option("--radius", random.coverage_radius, "Coverage radius (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_random->add_option("--seed", random.seed, "64-bit RNG seed")->capture_default_str();
  gen_random->add_option("--max-attempts", random.max_attempts, "Redraws before giving up on connectivity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_random->add_option("--out", random_out, "Topology JSON to write")->required();
  gen_random->callback([&] {
    action = [&] {
      const Topology t = generate_random(random);
      save(t, random_out);
      out << "wrote " << t.size() << " nodes, " << t.edge_count() << " edges to " << random_out
          << " (seed " << random.seed << ")\n";
      return kOk;
    };
  });

  // score
  std::string score_topology;
  std::string score_metric = "force";
  detail::ForceFlags score_force;
  auto* score = app.add_subcommand("score", "Rank nodes by cumulative force (or a baseline metric)");
  score->add_option("--topology", score_topology, "Topology JSON")->required();
  score_force.add(score);
  score->add_option("--metric", score_metric, "force | degree | closeness")
      ->check(CLI::IsMember({"force", "degree", "closeness"}))
      ->capture_default_str();
  score->callback([&] {
    action = [&] {
      const Topology t = load(score_topology);
      const ScoreReport report =
          score_metric == "force"    ? rank_by_force(t, score_force.params())
          : score_metric == "degree" ? baseline_score(t, BaselineMetric::degree)
                                     : baseline_score(t, BaselineMetric::closeness);
      out << "rank  node    " << report.metric << "\n";
      for (std::size_t r = 0; r < report.ranking.size(); ++r) {
        char buf[96];
        const NodeId node = report.ranking[r];
        std::snprintf(buf, sizeof buf, "%-5zu %-7u %.9g\n", r + 1, node, report.scores[node]);
        out << buf;
      }
      out << "gateway: " << report.ranking.front() << "\n";
      return kOk;
    };
  });

  // route
  std::string route_topology;
  NodeId route_gateway = 0;
  auto* route = app.add_subcommand("route", "Print the shortest-hop routing table toward a gateway");
  route->add_option("--topology", route_topology, "Topology JSON")->required();
  route->add_option("--gateway", route_gateway, "Gateway node id")->required();
  route->callback([&] {
    action = [&] {
      const Topology t = load(route_topology);
      const RoutingTree tree = build_routing_tree(t, route_gateway);
      out << "node    next_hop  hops\n";
      for (NodeId i = 0; i < tree.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-7u %-9u %u\n", i, tree.next_hop[i], tree.hops[i]);
        out << buf;
      }
      return kOk;
    };
  });

  // simulate
  std::string sim_topology;
  NodeId sim_gateway = 0;
  detail::TrafficFlags sim_traffic;
  auto* simulate = app.add_subcommand("simulate", "Flow-level throughput with one gateway");
  simulate->add_option("--topology", sim_topology, "Topology JSON")->required();
  simulate->add_option("--gateway", sim_gateway, "Gateway node id")->required();
  sim_traffic.add(simulate);
  simulate->callback([&] {
    action = [&] {
      const Topology t = load(sim_topology);
      const SimReport report = simulate_gateway(t, sim_gateway, sim_traffic.spec);
      out << "source  offered_mbps  delivered_mbps\n";
      for (const auto& f : report.flows) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-7u %-13.9g %.9g\n", f.source, f.offered_mbps,
                      f.delivered_mbps);
        out << buf;
      }
      out << "gateway " << report.gateway << " average_throughput_mbps="
          << (report.average_throughput_mbps ? detail::fmt("%.9g", *report.average_throughput_mbps)
                                             : std::string("undefined"))
          << "\n";
      return kOk;
    };
  });

  // sweep
  std::string sweep_topology;
  std::string sweep_out;
  detail::ForceFlags sweep_force;
  detail::TrafficFlags sweep_traffic;
  std::size_t sweep_threads = default_threads();
  auto* sweep_cmd = app.add_subcommand("sweep", "Try every node as gateway; correlate force with throughput");
  sweep_cmd->add_option("--topology", sweep_topology, "Topology JSON")->required();
  sweep_force.add(sweep_cmd);
  sweep_traffic.add(sweep_cmd);
  sweep_cmd->add_option("--threads", sweep_threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Sweep CSV to write")->required();
  sweep_cmd->callback([&] {
    action = [&] {
      const Topology t = load(sweep_topology);
      const SweepReport report = sweep(t, sweep_force.params(), sweep_traffic.spec, sweep_threads);
      const CorrelationReport corr = correlate_or_undefined(report);
      emit_csv(report, corr, sweep_out);
      if (auto warning = correlation_warning(corr)) err << "warning: " << *warning << "\n";
      detail::print_sweep_table(report, out);
      out << detail::correlation_line(corr) << "\n";
      return kOk;
    };
  });

  // batch
  BatchSpec batch;
  std::string batch_dir;
  detail::ForceFlags batch_force;
  detail::TrafficFlags batch_traffic;
  std::size_t batch_threads = default_threads();
  auto* batch_cmd = app.add_subcommand("batch", "Sweep an ensemble of seeded random topologies");
  batch_cmd->add_option("--n-topologies", batch.n_topologies, "Number of topologies")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch_cmd->add_option("--base-seed", batch.base_seed, "Seed of the first topology; later ones add 1")
      ->capture_default_str();
  batch_cmd->add_option("--n", batch.n_nodes, "Nodes per topology")->check(CLI::PositiveNumber)->capture_default_str();
  batch_cmd->add_option("--area", batch.area_side, "Side of the square deployment area (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch_cmd->add_option("--radius", batch.coverage_radius, "Coverage radius (m)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch_cmd->add_option("--max-attempts", batch.max_attempts, "Redraws before a seed is given up")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch_force.add(batch_cmd);
  batch_traffic.add(batch_cmd);
  batch_cmd->add_option("--threads", batch_threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch_cmd->add_option("--out-dir", batch_dir, "Directory for per-seed CSVs and batch_summary.csv")
      ->required();
  batch_cmd->callback([&] {
    action = [&] {
      std::error_code ec;
      std::filesystem::create_directories(batch_dir, ec);
      if (ec) throw IoError("cannot create " + batch_dir + ": " + ec.message());
      const auto entries = batch_random(batch, batch_force.params(), batch_traffic.spec, batch_threads);
      std::size_t ok = 0;
      out << "seed        status  spearman    pearson\n";
      for (const auto& e : entries) {
        char buf[128];
        if (e.ok()) {
          ++ok;
          const auto path = std::filesystem::path(batch_dir) / ("sweep_seed" + std::to_string(e.seed) + ".csv");
          emit_csv(*e.report, *e.correlation, path);
          const auto& c = *e.correlation;
          std::snprintf(buf, sizeof buf, "%-11llu ok      %-11s %s\n",
                        static_cast<unsigned long long>(e.seed),
                        c.spearman_rho ? detail::fmt("%.6f", *c.spearman_rho).c_str() : "undefined",
                        c.pearson_r ? detail::fmt("%.6f", *c.pearson_r).c_str() : "undefined");
          if (auto warning = correlation_warning(c)) {
            err << "warning: seed " << e.seed << ": " << *warning << "\n";
          }
        } else {
          std::snprintf(buf, sizeof buf, "%-11llu failed\n", static_cast<unsigned long long>(e.seed));
          err << "seed " << e.seed << ": " << e.error << "\n";
        }
        out << buf;
      }
      write_text(format_batch_summary(entries), std::filesystem::path(batch_dir) / "batch_summary.csv");
      out << ok << "/" << entries.size() << " topologies swept\n";
      return ok == 0 ? kGeneration : kOk;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kValidation;
  }

  try {
    return action();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << "\n";
    return kGeneration;
  } catch (const DisconnectedError& e) {
    err << "error: " << e.what() << "\n";
    return kDisconnected;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  }
}

}  // namespace gwplace::cli
