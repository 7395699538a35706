#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwplace/error.hpp"
#include "gwplace/topology.hpp"

namespace gwplace {

// A node's electrostatic charge: its unit-disk degree.
struct Charge {
  std::uint32_t q = 0;

  friend bool operator==(const Charge&, const Charge&) = default;
};

inline Charge charge_of(const Topology& t, NodeId i) {
  return Charge{static_cast<std::uint32_t>(degree(t, i))};
}

struct ForceParams {
  double k = 1.0;
  // Pairs farther apart than this contribute nothing. Unset means the
  // topology's coverage radius.
  std::optional<double> force_radius;

  double radius_for(const Topology& t) const {
    return force_radius.value_or(t.coverage_radius());
  }

  void validate() const {
    if (!std::isfinite(k) || k <= 0.0) throw ValidationError("force constant k must be > 0");
    if (force_radius && (!std::isfinite(*force_radius) || *force_radius <= 0.0)) {
      throw ValidationError("force radius must be > 0");
    }
  }
};

// Coulomb's law with degrees as charges: k * |q1 q2| / r^2.
//
// Evaluated as q1q2 * (k / r^2): the charge product is an exact integer, so
// scaling either charge changes the result by one correctly rounded multiply
// (at most 1 ulp), and doubling r divides it by exactly 4.
inline double pairwise_force(Charge q1, Charge q2, double r, double k = 1.0) {
  if (!(r > 0.0)) {
    throw DomainError("pairwise force needs a positive distance, got " + std::to_string(r));
  }
  if (!(k > 0.0)) throw DomainError("coupling constant k must be > 0");
  const double product = static_cast<double>(q1.q) * static_cast<double>(q2.q);
  return product * (k / (r * r));
}

namespace detail {

// Sum of k=1 pair forces on node i from nodes within `radius`. Terms are
// added smallest first, so nodes with the same multiset of terms (grid
// symmetry, relabeling) get bit-identical totals.
inline double unit_force(const Topology& t, NodeId i, double radius) {
  const Charge qi = charge_of(t, i);
  std::vector<double> terms;
  for (NodeId j = 0; j < t.size(); ++j) {
    if (j == i) continue;
    const double r = t.distance(i, j);
    if (r <= radius) terms.push_back(pairwise_force(qi, charge_of(t, j), r, 1.0));
  }
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double term : terms) total += term;
  return total;
}

}  // namespace detail

// Cumulative force on node i from every other node within the force radius.
inline double node_force(const Topology& t, NodeId i, const ForceParams& p = {}) {
  t.check(i);
  p.validate();
  return p.k * detail::unit_force(t, i, p.radius_for(t));
}

// Per-node scores plus the order they induce. Used for the force metric and
// for the baseline centralities alike.
struct ScoreReport {
  std::string metric;
  std::vector<double> scores;   // indexed by NodeId
  std::vector<NodeId> ranking;  // descending score, ties by ascending NodeId
};

using ForceReport = ScoreReport;

inline std::vector<NodeId> rank_descending(const std::vector<double>& scores) {
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
  return order;
}

inline ForceReport rank_by_force(const Topology& t, const ForceParams& p = {}) {
  if (t.empty()) throw ValidationError("cannot rank an empty topology");
  p.validate();
  // Rank on the k-free totals; k only rescales the reported values, so the
  // order cannot depend on it even where rounding would merge or split ties.
  std::vector<double> unit(t.size());
  for (NodeId i = 0; i < t.size(); ++i) unit[i] = detail::unit_force(t, i, p.radius_for(t));
  ForceReport report{"force", std::vector<double>(t.size()), rank_descending(unit)};
  for (NodeId i = 0; i < t.size(); ++i) report.scores[i] = p.k * unit[i];
  return report;
}

inline NodeId select_gateway(const Topology& t, const ForceParams& p = {}) {
  return rank_by_force(t, p).ranking.front();
}

enum class BaselineMetric { degree, closeness };

inline std::string_view to_string(BaselineMetric m) {
  return m == BaselineMetric::degree ? "degree" : "closeness";
}

// Reference centralities to compare the force ranking against.
// closeness(i) = (N-1) / sum of hop distances from i.
inline ScoreReport baseline_score(const Topology& t, BaselineMetric metric) {
  if (t.empty()) throw ValidationError("cannot score an empty topology");
  ScoreReport report{std::string(to_string(metric)), std::vector<double>(t.size()), {}};
  if (metric == BaselineMetric::degree) {
    for (NodeId i = 0; i < t.size(); ++i) report.scores[i] = static_cast<double>(degree(t, i));
  } else {
    if (!is_connected(t)) throw DisconnectedError("closeness needs a connected topology");
    for (NodeId i = 0; i < t.size(); ++i) {
      const auto hops = hop_distances(t, i);
      const double total = std::accumulate(hops.begin(), hops.end(), 0.0);
      report.scores[i] = total > 0.0 ? static_cast<double>(t.size() - 1) / total : 0.0;
    }
  }
  report.ranking = rank_descending(report.scores);
  return report;
}

}  // namespace gwplace
