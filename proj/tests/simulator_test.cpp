#include <gtest/gtest.h>

#include "gwplace/simulator.hpp"
#include "oracles.hpp"

namespace gwplace {
namespace {

// Hub 0 with four leaves 100 m away; leaves are 141 m apart, outside the radius.
const Topology kStar(1000, 120, {{500, 500}, {600, 500}, {400, 500}, {500, 600}, {500, 400}});
const Topology kPath3(1000, 100, {{0, 0}, {100, 0}, {200, 0}});

TEST(OfferedLoads, PathAndStar) {
  const TrafficSpec spec{.offered_rate_mbps = 1.0};
  const LinkLoad path = offered_loads(kPath3, build_routing_tree(kPath3, 2), spec);
  EXPECT_EQ(path.at({0, 1}), 1.0);
  EXPECT_EQ(path.at({1, 2}), 2.0);
  EXPECT_EQ(path.size(), 2u);

  const LinkLoad star = offered_loads(kStar, build_routing_tree(kStar, 0), spec);
  ASSERT_EQ(star.size(), 4u);
  for (const auto& [edge, load] : star) EXPECT_EQ(load, 1.0);
}

TEST(OfferedLoads, GridGatewayEdgesCarryEveryFlow) {
  const Topology grid = generate_grid({});
  const LinkLoad loads = offered_loads(grid, build_routing_tree(grid, 12), {});
  double into_gateway = 0.0;
  for (const auto& [edge, load] : loads) {
    if (edge.first == 12 || edge.second == 12) into_gateway += load;
  }
  EXPECT_EQ(into_gateway, 24.0);
}

TEST(FlowThroughput, Examples) {
  const TrafficSpec spec{.offered_rate_mbps = 1.0, .link_capacity_mbps = 5.0};
  EXPECT_EQ(flow_throughput(0, {0, 1, 2}, {{{0, 1}, 1.0}, {{1, 2}, 1.0}}, spec), 1.0);
  EXPECT_DOUBLE_EQ(flow_throughput(0, {0, 1}, {{{0, 1}, 12.0}}, spec), 5.0 / 12.0);
  const TrafficSpec tight{.offered_rate_mbps = 1.0, .link_capacity_mbps = 0.5};
  EXPECT_EQ(flow_throughput(0, {0, 1}, {{{0, 1}, 1.0}}, tight), 0.5);
}

TEST(FlowThroughput, RejectsNonEdge) {
  EXPECT_THROW(flow_throughput(0, {0, 2}, {{{0, 1}, 1.0}}, {}), InternalError);
  EXPECT_THROW(flow_throughput(3, {0, 1}, {{{0, 1}, 1.0}}, {}), InternalError);
}

TEST(SimulateGateway, StarAtHub) {
  const SimReport r = simulate_gateway(kStar, 0, {.offered_rate_mbps = 1, .link_capacity_mbps = 5});
  ASSERT_EQ(r.flows.size(), 4u);
  for (const auto& f : r.flows) EXPECT_EQ(f.delivered_mbps, 1.0);
  EXPECT_EQ(r.average_throughput_mbps, 1.0);
}

TEST(SimulateGateway, StarAtLeaf) {
  const SimReport r = simulate_gateway(kStar, 1, {.offered_rate_mbps = 1, .link_capacity_mbps = 2});
  ASSERT_EQ(r.flows.size(), 4u);
  for (const auto& f : r.flows) EXPECT_EQ(f.delivered_mbps, 0.5);
  EXPECT_EQ(r.average_throughput_mbps, 0.5);
}

TEST(SimulateGateway, SingleNodeHasNoFlows) {
  const SimReport r = simulate_gateway(generate_grid({.rows = 1, .cols = 1}), 0);
  EXPECT_TRUE(r.flows.empty());
  EXPECT_FALSE(r.average_throughput_mbps.has_value());
}

TEST(SimulateGateway, ErrorsPropagate) {
  EXPECT_THROW(simulate_gateway(Topology(1000, 10, {{0, 0}, {500, 0}}), 0), DisconnectedError);
  EXPECT_THROW(simulate_gateway(kStar, 0, {.offered_rate_mbps = 0}), ValidationError);
  EXPECT_THROW(simulate_gateway(kStar, 0, {.link_capacity_mbps = -1}), ValidationError);
}

TEST(SimulateGateway, GridCenterBeatsCorner) {
  const Topology grid = generate_grid({});
  EXPECT_GT(*simulate_gateway(grid, 12).average_throughput_mbps,
            *simulate_gateway(grid, 0).average_throughput_mbps);
}

TEST(SimulateGateway, GridMatchesBruteForce) {
  const Topology grid = generate_grid({});
  const std::vector<Position> pts(grid.positions().begin(), grid.positions().end());
  const auto expected = oracle::brute_force_average_throughput(pts, grid.coverage_radius(), 1.0, 5.0);
  for (NodeId gw = 0; gw < grid.size(); ++gw) {
    EXPECT_NEAR(*simulate_gateway(grid, gw).average_throughput_mbps, expected[gw], 1e-12);
  }
  // Lowest-id next hops send 10 of the 24 flows through 7-12, so the centre
  // does not lead its northern neighbour under this routing rule.
  EXPECT_NEAR(expected[12], 17.0 / 24.0, 1e-12);
  EXPECT_NEAR(expected[7], 0.75, 1e-12);
  for (NodeId other : {2u, 1u, 0u}) EXPECT_GT(expected[12], expected[other]);
}

TEST(SimulateGateway, RandomMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Topology t = generate_random({.n = 25, .seed = 40 + seed});
    const std::vector<Position> pts(t.positions().begin(), t.positions().end());
    const auto expected = oracle::brute_force_average_throughput(pts, t.coverage_radius(), 1.0, 5.0);
    for (NodeId gw = 0; gw < t.size(); ++gw) {
      ASSERT_NEAR(*simulate_gateway(t, gw).average_throughput_mbps, expected[gw], 1e-12);
    }
  }
}

TEST(SimulateGateway, ConservationAndCapacity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Topology t = generate_random({.n = 25, .seed = seed});
    for (const TrafficSpec& spec : {TrafficSpec{}, TrafficSpec{.offered_rate_mbps = 3.0,
                                                               .link_capacity_mbps = 2.0}}) {
      for (NodeId gw = 0; gw < t.size(); ++gw) {
        const RoutingTree tree = build_routing_tree(t, gw);
        const SimReport r = simulate_gateway(t, gw, spec);
        std::map<Edge, double> carried;
        for (const auto& f : r.flows) {
          ASSERT_GE(f.delivered_mbps, 0.0);
          ASSERT_LE(f.delivered_mbps, f.offered_mbps);
          const Path path = path_to_gateway(tree, f.source);
          for (std::size_t h = 0; h + 1 < path.size(); ++h) {
            carried[make_edge(path[h], path[h + 1])] += f.delivered_mbps;
          }
        }
        for (const auto& [edge, total] : carried) {
          ASSERT_LE(total, spec.link_capacity_mbps + 1e-9);
        }
      }
    }
  }
}

TEST(SimulateGateway, UnsaturatedDeliversOfferedRate) {
  const Topology t = generate_random({.n = 25, .seed = 4});
  const TrafficSpec spec{.offered_rate_mbps = 1.0, .link_capacity_mbps = 1000.0};
  for (NodeId gw = 0; gw < t.size(); ++gw) {
    const SimReport r = simulate_gateway(t, gw, spec);
    for (const auto& f : r.flows) ASSERT_EQ(f.delivered_mbps, 1.0);
    ASSERT_EQ(r.average_throughput_mbps, 1.0);
  }
}

TEST(SimulateGateway, Deterministic) {
  const Topology t = generate_random({.n = 25, .seed = 12});
  const SimReport a = simulate_gateway(t, 3);
  const SimReport b = simulate_gateway(t, 3);
  ASSERT_EQ(a.flows.size(), b.flows.size());
  for (std::size_t i = 0; i < a.flows.size(); ++i) {
    EXPECT_EQ(a.flows[i].delivered_mbps, b.flows[i].delivered_mbps);
  }
  EXPECT_EQ(a.average_throughput_mbps, b.average_throughput_mbps);
}

}  // namespace
}  // namespace gwplace
