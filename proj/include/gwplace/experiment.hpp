#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "gwplace/error.hpp"
#include "gwplace/force.hpp"
#include "gwplace/simulator.hpp"
#include "gwplace/topology.hpp"

namespace gwplace {

namespace detail {

// Runs fn(0..count-1) on up to `threads` workers. Callers write results by
// index, so output order never depends on scheduling. The first exception
// thrown by any task is rethrown after all workers join.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

inline std::size_t default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Rank 1 goes to the largest value; tied values share the mean of the ranks
// they span.
inline std::vector<double> average_ranks_descending(std::span<const double> values) {
  const std::vector<NodeId> order = rank_descending(std::vector<double>(values.begin(), values.end()));
  std::vector<double> ranks(values.size());
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
    const double mean_rank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t i = start; i < end; ++i) ranks[order[i]] = mean_rank;
    start = end;
  }
  return ranks;
}

struct SweepRow {
  NodeId node = 0;
  double force = 0.0;
  std::size_t degree = 0;
  std::optional<double> avg_throughput_mbps;  // nullopt for a single-node topology
  double force_rank = 0.0;
  std::optional<double> throughput_rank;
};

struct SweepMetadata {
  std::string generator;
  std::optional<std::uint64_t> seed;
  double k = 1.0;
  double force_radius = 0.0;
  TrafficSpec traffic;
  std::string topology_hash;
  std::size_t nodes = 0;
};

struct SweepReport {
  SweepMetadata metadata;
  std::vector<SweepRow> rows;  // one per node, ascending NodeId
};

// Every node takes a turn as the gateway; its force score is paired with the
// average throughput the simulator reports for that placement.
inline SweepReport sweep(const Topology& t, const ForceParams& p = {}, const TrafficSpec& spec = {},
                         std::size_t threads = 1) {
  if (t.empty()) throw ValidationError("cannot sweep an empty topology");
  p.validate();
  spec.validate();
  if (!is_connected(t)) throw DisconnectedError("sweep needs a connected topology");

  const ForceReport forces = rank_by_force(t, p);
  std::vector<std::optional<double>> averages(t.size());
  detail::parallel_for(t.size(), threads, [&](std::size_t gw) {
    averages[gw] = simulate_gateway(t, static_cast<NodeId>(gw), spec).average_throughput_mbps;
  });

  SweepReport report;
  report.metadata = {t.provenance().generator.empty() ? "unknown" : t.provenance().generator,
                     t.provenance().seed,
                     p.k,
                     p.radius_for(t),
                     spec,
                     topology_hash(t),
                     t.size()};
  const std::vector<double> force_ranks = average_ranks_descending(forces.scores);
  std::optional<std::vector<double>> throughput_ranks;
  if (t.size() > 1) {
    std::vector<double> values(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) values[i] = *averages[i];
    throughput_ranks = average_ranks_descending(values);
  }
  for (NodeId i = 0; i < t.size(); ++i) {
    SweepRow row;
    row.node = i;
    row.force = forces.scores[i];
    row.degree = degree(t, i);
    row.avg_throughput_mbps = averages[i];
    row.force_rank = force_ranks[i];
    if (throughput_ranks) row.throughput_rank = (*throughput_ranks)[i];
    report.rows.push_back(row);
  }
  return report;
}

struct CorrelationReport {
  std::optional<double> pearson_r;     // nullopt when either variable is constant
  std::optional<double> spearman_rho;
  std::size_t n = 0;

  bool undefined() const { return !pearson_r || !spearman_rho; }
};

// Pearson's r, or nullopt when either series has no spread.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: series lengths differ");
  if (x.size() < 2) throw ValidationError("pearson: need at least 2 samples");
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  if (*xmin == *xmax || *ymin == *ymax) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks_descending(x);
  const auto ry = average_ranks_descending(y);
  return pearson(rx, ry);
}

inline CorrelationReport correlate_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2) throw ValidationError("correlation needs at least 2 samples");
  return {pearson(x, y), spearman(x, y), x.size()};
}

// Force against average throughput over the rows of a sweep.
inline CorrelationReport correlate(const SweepReport& report) {
  if (report.rows.size() < 2) throw ValidationError("correlation needs at least 2 sweep rows");
  std::vector<double> force, throughput;
  for (const auto& row : report.rows) {
    if (!row.avg_throughput_mbps) throw ValidationError("sweep row without throughput");
    force.push_back(row.force);
    throughput.push_back(*row.avg_throughput_mbps);
  }
  return correlate_pairs(force, throughput);
}

// A correlation is only informative when gateway choice changes throughput.
inline std::optional<std::string> correlation_warning(const CorrelationReport& c) {
  if (c.n < 2) return "fewer than 2 nodes; correlation is undefined";
  if (c.undefined()) {
    return "throughput (or force) is identical for every gateway, so correlation is undefined; "
           "the network is unsaturated, raise the offered rate relative to link capacity";
  }
  return std::nullopt;
}

inline std::string format_csv(const SweepReport& report, const CorrelationReport& c) {
  using detail::format_number;
  const auto& m = report.metadata;
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("undefined");
  };
  std::string out;
  out += "# generator=" + m.generator + "\n";
  out += "# seed=" + (m.seed ? std::to_string(*m.seed) : std::string("none")) + "\n";
  out += "# k=" + format_number(m.k) + "\n";
  out += "# force_radius=" + format_number(m.force_radius) + "\n";
  out += "# offered_rate_mbps=" + format_number(m.traffic.offered_rate_mbps) + "\n";
  out += "# link_capacity_mbps=" + format_number(m.traffic.link_capacity_mbps) + "\n";
  out += "# packet_size=" + std::to_string(m.traffic.packet_size_bytes) + "\n";
  out += "# topology_hash=" + m.topology_hash + "\n";
  out += "# nodes=" + std::to_string(m.nodes) + "\n";
  out += "# pearson=" + opt(c.pearson_r) + "\n";
  out += "# spearman=" + opt(c.spearman_rho) + "\n";
  out += "node_id,force,degree,avg_throughput_mbps,force_rank,throughput_rank\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.node) + "," + format_number(row.force) + "," +
           std::to_string(row.degree) + "," + opt(row.avg_throughput_mbps) + "," +
           format_number(row.force_rank) + "," + opt(row.throughput_rank) + "\n";
  }
  return out;
}

inline void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

inline void emit_csv(const SweepReport& report, const CorrelationReport& c,
                     const std::filesystem::path& path) {
  write_text(format_csv(report, c), path);
}

// Correlation for a report of any size: fewer than two rows yields the
// undefined marker instead of an error.
inline CorrelationReport correlate_or_undefined(const SweepReport& report) {
  if (report.rows.size() < 2) return {std::nullopt, std::nullopt, report.rows.size()};
  return correlate(report);
}

// ---------------------------------------------------------------------------
// Seeded ensembles of random topologies

struct BatchSpec {
  std::size_t n_topologies = 10;
  std::uint64_t base_seed = 1000;
  std::size_t n_nodes = 25;
  double area_side = kDefaultAreaSide;
  double coverage_radius = kDefaultRandomRadius;
  std::size_t max_attempts = kDefaultMaxAttempts;
};

struct BatchEntry {
  std::uint64_t seed = 0;
  std::optional<SweepReport> report;
  std::optional<CorrelationReport> correlation;
  std::string error;  // set when generation or sweeping failed for this seed

  bool ok() const { return report.has_value(); }
};

// Seeds base_seed, base_seed+1, ... each generate, sweep and correlate one
// topology. A failing seed is recorded and the batch continues.
inline std::vector<BatchEntry> batch_random(const BatchSpec& batch, const ForceParams& p = {},
                                            const TrafficSpec& spec = {}, std::size_t threads = 1) {
  if (batch.n_topologies < 1) throw ValidationError("batch needs at least one topology");
  p.validate();
  spec.validate();
  std::vector<BatchEntry> entries(batch.n_topologies);
  detail::parallel_for(batch.n_topologies, threads, [&](std::size_t idx) {
    auto& entry = entries[idx];
    entry.seed = batch.base_seed + idx;
    try {
      const Topology t = generate_random({batch.n_nodes, entry.seed, batch.area_side,
                                          batch.coverage_radius, batch.max_attempts});
      entry.report = sweep(t, p, spec, 1);
      entry.correlation = correlate_or_undefined(*entry.report);
    } catch (const Error& e) {
      entry.report.reset();
      entry.correlation.reset();
      entry.error = e.what();
    }
  });
  return entries;
}

inline std::string format_batch_summary(std::span<const BatchEntry> entries) {
  using detail::format_number;
  std::string out = "seed,status,nodes,pearson,spearman,error\n";
  for (const auto& e : entries) {
    out += std::to_string(e.seed) + ",";
    if (e.ok()) {
      const auto& c = *e.correlation;
      out += "ok," + std::to_string(e.report->rows.size()) + "," +
             (c.pearson_r ? format_number(*c.pearson_r) : "undefined") + "," +
             (c.spearman_rho ? format_number(*c.spearman_rho) : "undefined") + ",\n";
    } else {
      std::string msg = e.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += "failed,0,undefined,undefined," + msg + "\n";
    }
  }
  return out;
}

}  // namespace gwplace
