#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwplace/error.hpp"

namespace gwplace {

using NodeId = std::uint32_t;

inline constexpr double kDefaultAreaSide = 1000.0;
inline constexpr double kDefaultGridSpacing = 250.0;
inline constexpr double kDefaultGridRadius = 1.05 * kDefaultGridSpacing;  // 262.5 m
inline constexpr double kDefaultRandomRadius = 275.0;
inline constexpr std::size_t kDefaultMaxAttempts = 1000;

// Identity of the random stream behind generate_random. Changing how
// positions are drawn must bump the version so old CSVs stay traceable.
inline constexpr std::string_view kRandomGeneratorId = "mt19937_64/u53/v1";
inline constexpr std::string_view kGridGeneratorId = "grid/v1";

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

inline double euclidean_distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Where a topology came from. Not part of the geometry: two topologies with
// the same nodes but different provenance hash identically.
struct Provenance {
  std::string generator;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Planar unit-disk mesh. Node i lives at positions()[i]; edges are derived
// from the coverage radius once at construction and never edited.
class Topology {
 public:
  Topology(double area_side, double coverage_radius, std::vector<Position> nodes,
           Provenance provenance = {})
      : area_side_(area_side),
        coverage_radius_(coverage_radius),
        positions_(std::move(nodes)),
        provenance_(std::move(provenance)) {
    validate();
    build_adjacency();
  }

  double area_side() const { return area_side_; }
  double coverage_radius() const { return coverage_radius_; }
  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  const Provenance& provenance() const { return provenance_; }
  std::span<const Position> positions() const { return positions_; }

  const Position& position(NodeId i) const {
    check(i);
    return positions_[i];
  }

  // Ascending NodeIds of every node within the coverage radius.
  std::span<const NodeId> neighbors(NodeId i) const {
    check(i);
    return adjacency_[i];
  }

  bool has_edge(NodeId i, NodeId j) const {
    check(i);
    check(j);
    const auto& row = adjacency_[i];
    return std::binary_search(row.begin(), row.end(), j);
  }

  double distance(NodeId i, NodeId j) const {
    return euclidean_distance(position(i), position(j));
  }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& row : adjacency_) twice += row.size();
    return twice / 2;
  }

  void check(NodeId i) const {
    if (i >= positions_.size()) {
      throw ValidationError("unknown node id " + std::to_string(i) + " (topology has " +
                            std::to_string(positions_.size()) + " nodes)");
    }
  }

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.area_side_ == b.area_side_ && a.coverage_radius_ == b.coverage_radius_ &&
           a.positions_ == b.positions_ && a.provenance_ == b.provenance_;
  }

 private:
  void validate() const {
    if (!std::isfinite(area_side_) || area_side_ <= 0.0) {
      throw ValidationError("area_side must be finite and > 0");
    }
    if (!std::isfinite(coverage_radius_) || coverage_radius_ <= 0.0) {
      throw ValidationError("coverage_radius must be finite and > 0");
    }
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      const auto& p = positions_[i];
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0 ||
          p.x > area_side_ || p.y > area_side_) {
        throw OutOfBoundsError("node " + std::to_string(i) + " lies outside [0, " +
                               std::to_string(area_side_) + "]^2");
      }
    }
    std::vector<std::pair<Position, std::size_t>> sorted;
    sorted.reserve(positions_.size());
    for (std::size_t i = 0; i < positions_.size(); ++i) sorted.emplace_back(positions_[i], i);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].first == sorted[i - 1].first) {
        throw CoincidentNodeError("nodes " + std::to_string(sorted[i - 1].second) + " and " +
                                  std::to_string(sorted[i].second) +
                                  " share the same position");
      }
    }
  }

  void build_adjacency() {
    const auto n = positions_.size();
    adjacency_.assign(n, {});
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (euclidean_distance(positions_[i], positions_[j]) <= coverage_radius_) {
          adjacency_[i].push_back(j);
          adjacency_[j].push_back(i);
        }
      }
    }
    // j is appended in ascending order for both endpoints, so rows are sorted.
  }

  double area_side_;
  double coverage_radius_;
  std::vector<Position> positions_;
  Provenance provenance_;
  std::vector<std::vector<NodeId>> adjacency_;
};

inline std::size_t degree(const Topology& t, NodeId i) { return t.neighbors(i).size(); }

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Hop count from src to every node; kUnreachable where no path exists.
inline std::vector<std::uint32_t> hop_distances(const Topology& t, NodeId src) {
  t.check(src);
  std::vector<std::uint32_t> hops(t.size(), kUnreachable);
  std::queue<NodeId> frontier;
  hops[src] = 0;
  frontier.push(src);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : t.neighbors(u)) {
      if (hops[v] == kUnreachable) {
        hops[v] = hops[u] + 1;
        frontier.push(v);
      }
    }
  }
  return hops;
}

inline bool is_connected(const Topology& t) {
  if (t.empty()) throw ValidationError("connectivity is undefined for an empty topology");
  const auto hops = hop_distances(t, 0);
  return std::none_of(hops.begin(), hops.end(), [](auto h) { return h == kUnreachable; });
}

// ---------------------------------------------------------------------------
// Generation

struct GridSpec {
  std::size_t rows = 5;
  std::size_t cols = 5;
  double spacing = kDefaultGridSpacing;
  double area_side = kDefaultAreaSide;
  double coverage_radius = kDefaultGridRadius;
};

struct RandomSpec {
  std::size_t n = 25;
  std::uint64_t seed = 0;
  double area_side = kDefaultAreaSide;
  double coverage_radius = kDefaultRandomRadius;
  std::size_t max_attempts = kDefaultMaxAttempts;
};

// Row-major lattice anchored at the origin: node r*cols+c sits at
// (c*spacing, r*spacing).
inline Topology generate_grid(const GridSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw ValidationError("grid needs rows, cols >= 1");
  if (!std::isfinite(spec.spacing) || spec.spacing <= 0.0) {
    throw ValidationError("grid spacing must be > 0");
  }
  const double width = static_cast<double>(spec.cols - 1) * spec.spacing;
  const double height = static_cast<double>(spec.rows - 1) * spec.spacing;
  if (width > spec.area_side || height > spec.area_side) {
    throw ValidationError("grid footprint " + std::to_string(width) + " x " +
                          std::to_string(height) + " m exceeds area side " +
                          std::to_string(spec.area_side) + " m");
  }
  std::vector<Position> nodes;
  nodes.reserve(spec.rows * spec.cols);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      nodes.push_back({static_cast<double>(c) * spec.spacing, static_cast<double>(r) * spec.spacing});
    }
  }
  return Topology(spec.area_side, spec.coverage_radius, std::move(nodes),
                  Provenance{std::string(kGridGeneratorId), std::nullopt});
}

namespace detail {

// Uniform double in [0, 1) from the top 53 bits. Spelled out rather than using
// std::uniform_real_distribution, whose output differs between standard
// libraries.
inline double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Uniform positions over [0, area_side]^2, redrawn as a whole until the
// unit-disk graph is connected. One engine seeded with `seed` feeds every
// attempt, so attempt k always sees the same draws for a given seed.
inline Topology generate_random(const RandomSpec& spec) {
  if (spec.n < 1) throw ValidationError("random topology needs n >= 1");
  if (!std::isfinite(spec.area_side) || spec.area_side <= 0.0) {
    throw ValidationError("area_side must be > 0");
  }
  if (!std::isfinite(spec.coverage_radius) || spec.coverage_radius <= 0.0) {
    throw ValidationError("coverage_radius must be > 0");
  }
  std::mt19937_64 engine(spec.seed);
  const Provenance provenance{std::string(kRandomGeneratorId), spec.seed};
  for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
    std::vector<Position> nodes(spec.n);
    for (auto& p : nodes) {
      p.x = detail::unit_uniform(engine) * spec.area_side;
      p.y = detail::unit_uniform(engine) * spec.area_side;
    }
    // Exact coincidence has probability ~2^-106 per pair; treat it as a failed draw.
    std::optional<Topology> candidate;
    try {
      candidate.emplace(spec.area_side, spec.coverage_radius, std::move(nodes), provenance);
    } catch (const CoincidentNodeError&) {
      continue;
    }
    if (is_connected(*candidate)) return *std::move(candidate);
  }
  throw GenerationError("no connected topology after " + std::to_string(spec.max_attempts) +
                        " attempts (seed " + std::to_string(spec.seed) + ", radius " +
                        std::to_string(spec.coverage_radius) + " m, n " +
                        std::to_string(spec.n) + ")");
}

// ---------------------------------------------------------------------------
// Persistence
//
// {"area_side": number, "coverage_radius": number,
//  "nodes": [{"id": int, "x": number, "y": number}, ...]}
// plus an optional "provenance": {"generator": string, "seed": uint} object.
// Doubles are written in shortest round-trip form, so load(save(t)) == t.

inline nlohmann::json to_json(const Topology& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId i = 0; i < t.size(); ++i) {
    const auto& p = t.positions()[i];
    nodes.push_back({{"id", i}, {"x", p.x}, {"y", p.y}});
  }
  nlohmann::json doc = {
      {"area_side", t.area_side()}, {"coverage_radius", t.coverage_radius()}, {"nodes", nodes}};
  if (!t.provenance().generator.empty()) {
    nlohmann::json prov = {{"generator", t.provenance().generator}};
    if (t.provenance().seed) prov["seed"] = *t.provenance().seed;
    doc["provenance"] = prov;
  }
  return doc;
}

namespace detail {

inline double require_number(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where + ": missing required field \"" + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(where + ": field \"" + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace detail

inline Topology from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("topology document must be a JSON object");
  const double area = detail::require_number(doc, "area_side", "topology");
  const double radius = detail::require_number(doc, "coverage_radius", "topology");
  if (!doc.contains("nodes") || !doc.at("nodes").is_array()) {
    throw SchemaError("topology: missing required array \"nodes\"");
  }
  const auto& nodes = doc.at("nodes");
  std::vector<Position> positions;
  positions.reserve(nodes.size());
  std::vector<bool> seen(nodes.size(), false);
  for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
    const auto& node = nodes[idx];
    const std::string where = "nodes[" + std::to_string(idx) + "]";
    if (!node.is_object() || !node.contains("id") || !node.at("id").is_number_integer()) {
      throw SchemaError(where + ": \"id\" must be an integer");
    }
    const auto id = node.at("id").get<std::int64_t>();
    if (id >= 0 && static_cast<std::size_t>(id) < seen.size()) {
      if (seen[id]) throw DuplicateIdError(where + ": duplicate node id " + std::to_string(id));
      seen[id] = true;
    }
    if (id != static_cast<std::int64_t>(idx)) {
      throw SchemaError(where + ": ids must be dense and ascending from 0, got " +
                        std::to_string(id));
    }
    positions.push_back({detail::require_number(node, "x", where),
                         detail::require_number(node, "y", where)});
  }
  Provenance provenance;
  if (doc.contains("provenance")) {
    const auto& prov = doc.at("provenance");
    if (!prov.is_object() || !prov.contains("generator") || !prov.at("generator").is_string()) {
      throw SchemaError("topology: \"provenance\" needs a string \"generator\"");
    }
    provenance.generator = prov.at("generator").get<std::string>();
    if (prov.contains("seed")) {
      if (!prov.at("seed").is_number_unsigned()) {
        throw SchemaError("topology: provenance seed must be an unsigned integer");
      }
      provenance.seed = prov.at("seed").get<std::uint64_t>();
    }
  }
  return Topology(area, radius, std::move(positions), std::move(provenance));
}

inline std::string serialize(const Topology& t) { return to_json(t).dump(2) + "\n"; }

inline Topology parse_topology(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed topology JSON: ") + e.what());
  }
  return from_json(doc);
}

inline void save(const Topology& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << serialize(t);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

inline Topology load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_topology(buf.str());
  } catch (const ValidationError& e) {
    // Rethrow with path context but keep the category.
    if (dynamic_cast<const DuplicateIdError*>(&e)) throw DuplicateIdError(path + ": " + e.what());
    if (dynamic_cast<const CoincidentNodeError*>(&e)) throw CoincidentNodeError(path + ": " + e.what());
    if (dynamic_cast<const OutOfBoundsError*>(&e)) throw OutOfBoundsError(path + ": " + e.what());
    if (dynamic_cast<const SchemaError*>(&e)) throw SchemaError(path + ": " + e.what());
    throw ValidationError(path + ": " + e.what());
  }
}

// FNV-1a over the compact serialization of the geometry only (area, radius,
// node positions). Printed as "fnv1a64:<16 hex digits>".
inline std::string topology_hash(const Topology& t) {
  nlohmann::json geometry = to_json(t);
  geometry.erase("provenance");
  const std::string text = geometry.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gwplace
