#include <gtest/gtest.h>

#include "gwplace/routing.hpp"
#include "oracles.hpp"

namespace gwplace {
namespace {

const Topology kPath3(1000, 100, {{0, 0}, {100, 0}, {200, 0}});

TEST(BuildRoutingTree, GridCenter) {
  const RoutingTree tree = build_routing_tree(generate_grid({}), 12);
  EXPECT_EQ(tree.hops[0], 4u);
  EXPECT_EQ(tree.hops[12], 0u);
  EXPECT_EQ(tree.next_hop[12], 12u);
  EXPECT_EQ(tree.hops[24], 4u);
  EXPECT_EQ(tree.hops[7], 1u);
}

TEST(BuildRoutingTree, PathTopology) {
  const RoutingTree tree = build_routing_tree(kPath3, 2);
  EXPECT_EQ(tree.next_hop, (std::vector<NodeId>{1, 2, 2}));
  EXPECT_EQ(tree.hops, (std::vector<std::uint32_t>{2, 1, 0}));
}

TEST(BuildRoutingTree, Errors) {
  EXPECT_THROW(build_routing_tree(generate_grid({}), 25), ValidationError);
  try {
    build_routing_tree(Topology(1000, 100, {{0, 0}, {500, 0}, {50, 0}}), 0);
    FAIL() << "expected DisconnectedError";
  } catch (const DisconnectedError& e) {
    EXPECT_NE(std::string(e.what()).find("node 1"), std::string::npos);
  }
}

TEST(PathToGateway, Examples) {
  const RoutingTree grid = build_routing_tree(generate_grid({}), 12);
  EXPECT_EQ(path_to_gateway(grid, 12), (Path{12}));
  EXPECT_EQ(path_to_gateway(grid, 0), (Path{0, 1, 2, 7, 12}));
  EXPECT_EQ(path_to_gateway(build_routing_tree(kPath3, 2), 0), (Path{0, 1, 2}));
  EXPECT_THROW(path_to_gateway(grid, 30), ValidationError);
}

TEST(BuildRoutingTree, MatchesFloydWarshallAndFormsTree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Topology t = generate_random({.n = 25, .seed = 200 + seed});
    const std::vector<Position> pts(t.positions().begin(), t.positions().end());
    const auto dist = oracle::floyd_warshall(pts, t.coverage_radius());
    for (NodeId gw = 0; gw < t.size(); ++gw) {
      const RoutingTree tree = build_routing_tree(t, gw);
      std::size_t tree_edges = 0;
      for (NodeId src = 0; src < t.size(); ++src) {
        ASSERT_EQ(tree.hops[src], dist[src][gw]);
        if (src == gw) continue;
        ++tree_edges;
        ASSERT_TRUE(t.has_edge(src, tree.next_hop[src]));
        ASSERT_EQ(tree.hops[tree.next_hop[src]] + 1, tree.hops[src]);
        const Path path = path_to_gateway(tree, src);
        ASSERT_EQ(path.size(), tree.hops[src] + 1);
        ASSERT_EQ(path.back(), gw);
        std::vector<NodeId> sorted = path;
        std::sort(sorted.begin(), sorted.end());
        ASSERT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
      }
      ASSERT_EQ(tree_edges, t.size() - 1);
    }
  }
}

TEST(BuildRoutingTree, RelabelingPreservesHopCounts) {
  const Topology t = generate_random({.n = 25, .seed = 8});
  const auto perm = oracle::permutation(t.size(), 5);
  std::vector<Position> relabeled(t.size());
  for (NodeId i = 0; i < t.size(); ++i) relabeled[perm[i]] = t.position(i);
  const Topology u(t.area_side(), t.coverage_radius(), relabeled);
  for (NodeId gw = 0; gw < t.size(); ++gw) {
    const auto a = build_routing_tree(t, gw);
    const auto b = build_routing_tree(u, perm[gw]);
    for (NodeId i = 0; i < t.size(); ++i) ASSERT_EQ(a.hops[i], b.hops[perm[i]]);
  }
}

}  // namespace
}  // namespace gwplace
