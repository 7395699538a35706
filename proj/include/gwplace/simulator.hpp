#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwplace/error.hpp"
#include "gwplace/routing.hpp"
#include "gwplace/topology.hpp"

namespace gwplace {

// Constant-bit-rate traffic offered by every non-gateway node toward the
// gateway, plus the capacity every link shares.
struct TrafficSpec {
  double offered_rate_mbps = 1.0;
  double link_capacity_mbps = 5.0;
  std::size_t packet_size_bytes = 1024;  // carried into reports, no effect on rates

  void validate() const {
    if (!std::isfinite(offered_rate_mbps) || offered_rate_mbps <= 0.0) {
      throw ValidationError("offered rate must be > 0");
    }
    if (!std::isfinite(link_capacity_mbps) || link_capacity_mbps <= 0.0) {
      throw ValidationError("link capacity must be > 0");
    }
    if (packet_size_bytes == 0) throw ValidationError("packet size must be > 0");
  }
};

// Undirected edge key, smaller id first.
using Edge = std::pair<NodeId, NodeId>;

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Offered Mbit/s crossing each edge that carries any traffic.
using LinkLoad = std::map<Edge, double>;

struct FlowResult {
  NodeId source = 0;
  double offered_mbps = 0.0;
  double delivered_mbps = 0.0;
};

struct SimReport {
  NodeId gateway = 0;
  TrafficSpec traffic;
  std::vector<FlowResult> flows;  // ascending source id, gateway excluded
  // Mean delivered rate over all flows; nullopt when there are no flows.
  std::optional<double> average_throughput_mbps;
};

inline LinkLoad offered_loads(const Topology& t, const RoutingTree& tree, const TrafficSpec& spec) {
  if (tree.size() != t.size()) throw InternalError("routing tree does not match topology");
  LinkLoad loads;
  for (NodeId src = 0; src < t.size(); ++src) {
    if (src == tree.gateway) continue;
    const Path path = path_to_gateway(tree, src);
    for (std::size_t h = 0; h + 1 < path.size(); ++h) {
      if (!t.has_edge(path[h], path[h + 1])) {
        throw InternalError("routing tree uses non-edge " + std::to_string(path[h]) + "-" +
                            std::to_string(path[h + 1]));
      }
      loads[make_edge(path[h], path[h + 1])] += spec.offered_rate_mbps;
    }
  }
  return loads;
}

// Bottleneck proportional share: the flow keeps the worst C/load fraction
// over its path, capped at its offered rate.
inline double flow_throughput(NodeId src, const Path& path, const LinkLoad& loads,
                              const TrafficSpec& spec) {
  if (path.empty() || path.front() != src) {
    throw InternalError("path for flow " + std::to_string(src) + " does not start at its source");
  }
  double share = 1.0;
  for (std::size_t h = 0; h + 1 < path.size(); ++h) {
    const auto it = loads.find(make_edge(path[h], path[h + 1]));
    if (it == loads.end() || !(it->second > 0.0)) {
      throw InternalError("flow " + std::to_string(src) + " crosses " + std::to_string(path[h]) +
                          "-" + std::to_string(path[h + 1]) + ", which carries no offered load");
    }
    share = std::min(share, std::min(1.0, spec.link_capacity_mbps / it->second));
  }
  return spec.offered_rate_mbps * share;
}

inline SimReport simulate_gateway(const Topology& t, NodeId gateway, const TrafficSpec& spec = {}) {
  spec.validate();
  const RoutingTree tree = build_routing_tree(t, gateway);
  const LinkLoad loads = offered_loads(t, tree, spec);
  SimReport report;
  report.gateway = gateway;
  report.traffic = spec;
  double total = 0.0;
  for (NodeId src = 0; src < t.size(); ++src) {
    if (src == gateway) continue;
    const double delivered = flow_throughput(src, path_to_gateway(tree, src), loads, spec);
    report.flows.push_back({src, spec.offered_rate_mbps, delivered});
    total += delivered;
  }
  if (!report.flows.empty()) {
    report.average_throughput_mbps = total / static_cast<double>(report.flows.size());
  }
  return report;
}

}  // namespace gwplace
