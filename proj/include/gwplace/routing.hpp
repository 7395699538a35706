#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwplace/error.hpp"
#include "gwplace/topology.hpp"

namespace gwplace {

// Static shortest-hop routes toward one gateway. This is what a link-state
// protocol such as OLSR converges to on a topology that never changes.
struct RoutingTree {
  NodeId gateway = 0;
  std::vector<NodeId> next_hop;       // next_hop[gateway] == gateway
  std::vector<std::uint32_t> hops;    // hops[gateway] == 0

  std::size_t size() const { return next_hop.size(); }
};

using Path = std::vector<NodeId>;

// BFS from the gateway. Among neighbors one hop closer to the gateway,
// next_hop picks the lowest id, independent of queue order.
inline RoutingTree build_routing_tree(const Topology& t, NodeId gateway) {
  t.check(gateway);
  RoutingTree tree;
  tree.gateway = gateway;
  tree.hops = hop_distances(t, gateway);
  tree.next_hop.assign(t.size(), gateway);
  for (NodeId i = 0; i < t.size(); ++i) {
    if (tree.hops[i] == kUnreachable) {
      throw DisconnectedError("node " + std::to_string(i) + " cannot reach gateway " +
                              std::to_string(gateway));
    }
    if (i == gateway) continue;
    for (NodeId j : t.neighbors(i)) {  // ascending
      if (tree.hops[j] + 1 == tree.hops[i]) {
        tree.next_hop[i] = j;
        break;
      }
    }
  }
  return tree;
}

inline Path path_to_gateway(const RoutingTree& tree, NodeId src) {
  if (src >= tree.size()) {
    throw ValidationError("unknown source node " + std::to_string(src));
  }
  Path path;
  path.reserve(tree.hops[src] + 1);
  path.push_back(src);
  NodeId at = src;
  while (at != tree.gateway) {
    at = tree.next_hop[at];
    path.push_back(at);
    if (path.size() > tree.size()) throw InternalError("routing tree contains a cycle");
  }
  return path;
}

}  // namespace gwplace
