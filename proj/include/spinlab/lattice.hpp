#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spinlab {

/// Unordered site pair stored as (low, high).
struct Edge {
  int a = 0;
  int b = 0;
  auto operator<=>(const Edge&) const = default;
};

enum class LatticeFamily { ring, hypercubic, complete, star, custom };

std::string to_string(LatticeFamily family);

/// Finite undirected graph of spin sites. Immutable once constructed.
///
/// Edges are normalized to (low, high) and globally sorted, so sums over
/// nearest-neighbour pairs run in a fixed order. The bipartition is found by
/// breadth-first two-coloring and is absent when an odd cycle exists.
class LatticeGraph {
 public:
  /// Validates the edge list (range, self-loops, duplicates) and throws
  /// ValidationError naming the offending edge.
  static LatticeGraph from_edges(int n_sites, std::vector<Edge> edges, LatticeFamily family = LatticeFamily::custom);

  int n_sites() const { return n_sites_; }
  const std::vector<Edge>& edges() const { return edges_; }
  LatticeFamily family() const { return family_; }
  /// Coordination number: the common degree for regular graphs, the maximum degree otherwise.
  int z() const { return z_; }
  bool regular() const { return regular_; }
  int degree(int site) const { return static_cast<int>(neighbors_.at(static_cast<std::size_t>(site)).size()); }
  const std::vector<int>& neighbors(int site) const { return neighbors_.at(static_cast<std::size_t>(site)); }
  /// Two-coloring (0/1 per site) when the graph is bipartite.
  const std::optional<std::vector<int>>& bipartition() const { return bipartition_; }
  bool bipartite() const { return bipartition_.has_value(); }

 private:
  LatticeGraph() = default;

  int n_sites_ = 0;
  std::vector<Edge> edges_;
  LatticeFamily family_ = LatticeFamily::custom;
  int z_ = 0;
  bool regular_ = false;
  std::vector<std::vector<int>> neighbors_;
  std::optional<std::vector<int>> bipartition_;
};

LatticeGraph make_ring(int n);
/// Row-major site numbering, last dimension fastest. Periodic sides must be >= 3.
LatticeGraph make_hypercubic(const std::vector<int>& dims, bool periodic);
LatticeGraph make_complete(int n);
/// Center is site 0; leaves 1..z.
LatticeGraph make_star(int z);

/// Pairs at graph distance exactly 2, sorted.
std::vector<Edge> nnn_pairs(const LatticeGraph& graph);

/// Shortest-path distances from `source` (-1 when unreachable).
std::vector<int> bfs_distances(const LatticeGraph& graph, int source);

/// {"n_sites": int, "edges": [[i, j], ...]} or {"family": "ring", "sites": n} /
/// {"family": "hypercubic", "dims": [...], "periodic": bool}.
LatticeGraph lattice_from_json(const nlohmann::json& doc);
nlohmann::json lattice_to_json(const LatticeGraph& graph);

}  // namespace spinlab
