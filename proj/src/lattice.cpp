#include "spinlab/lattice.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "spinlab/errors.hpp"

namespace spinlab {

std::string to_string(LatticeFamily family) {
  switch (family) {
    case LatticeFamily::ring: return "ring";
    case LatticeFamily::hypercubic: return "hypercubic";
    case LatticeFamily::complete: return "complete";
    case LatticeFamily::star: return "star";
    case LatticeFamily::custom: return "custom";
  }
  return "custom";
}

namespace {

std::string edge_text(const Edge& e) { return "[" + std::to_string(e.a) + "," + std::to_string(e.b) + "]"; }

std::optional<std::vector<int>> two_color(int n, const std::vector<std::vector<int>>& adjacency) {
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  for (int start = 0; start < n; ++start) {
    if (color[start] >= 0) continue;
    color[start] = 0;
    std::deque<int> queue{start};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adjacency[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

}  // namespace

LatticeGraph LatticeGraph::from_edges(int n_sites, std::vector<Edge> edges, LatticeFamily family) {
  if (n_sites < 1) throw ValidationError("lattice: n_sites must be >= 1");
  std::set<Edge> seen;
  for (Edge& e : edges) {
    if (e.a < 0 || e.b < 0 || e.a >= n_sites || e.b >= n_sites) {
      throw ValidationError("lattice: edge " + edge_text(e) + " references a site outside 0.." +
                            std::to_string(n_sites - 1));
    }
    if (e.a == e.b) throw ValidationError("lattice: edge " + edge_text(e) + " is a self-loop");
    if (e.a > e.b) std::swap(e.a, e.b);
    if (!seen.insert(e).second) throw ValidationError("lattice: edge " + edge_text(e) + " is a duplicate");
  }
  std::sort(edges.begin(), edges.end());

  LatticeGraph g;
  g.n_sites_ = n_sites;
  g.family_ = family;
  g.neighbors_.assign(static_cast<std::size_t>(n_sites), {});
  for (const Edge& e : edges) {
    g.neighbors_[e.a].push_back(e.b);
    g.neighbors_[e.b].push_back(e.a);
  }
  for (auto& list : g.neighbors_) std::sort(list.begin(), list.end());
  g.edges_ = std::move(edges);

  int min_degree = n_sites;
  int max_degree = 0;
  for (const auto& list : g.neighbors_) {
    min_degree = std::min(min_degree, static_cast<int>(list.size()));
    max_degree = std::max(max_degree, static_cast<int>(list.size()));
  }
  g.z_ = max_degree;
  g.regular_ = (min_degree == max_degree) && max_degree >= 1;
  g.bipartition_ = two_color(n_sites, g.neighbors_);
  return g;
}

LatticeGraph make_ring(int n) {
  if (n < 3) throw SizeError("make_ring: need n >= 3, got " + std::to_string(n));
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return LatticeGraph::from_edges(n, std::move(edges), LatticeFamily::ring);
}

LatticeGraph make_hypercubic(const std::vector<int>& dims, bool periodic) {
  if (dims.empty()) throw SizeError("make_hypercubic: need at least one dimension");
  int n = 1;
  for (int side : dims) {
    if (periodic && side < 3) throw SizeError("make_hypercubic: periodic side must be >= 3, got " + std::to_string(side));
    if (side < 1) throw SizeError("make_hypercubic: side must be >= 1");
    n *= side;
  }
  const auto d = dims.size();
  std::vector<int> stride(d, 1);
  for (std::size_t k = d - 1; k-- > 0;) stride[k] = stride[k + 1] * dims[k + 1];

  std::vector<Edge> edges;
  for (int site = 0; site < n; ++site) {
    for (std::size_t k = 0; k < d; ++k) {
      const int coord = (site / stride[k]) % dims[k];
      int next = coord + 1;
      if (next == dims[k]) {
        if (!periodic) continue;
        next = 0;
      }
      edges.push_back({site, site + (next - coord) * stride[k]});
    }
  }
  return LatticeGraph::from_edges(n, std::move(edges), LatticeFamily::hypercubic);
}

LatticeGraph make_complete(int n) {
  if (n < 2) throw SizeError("make_complete: need n >= 2, got " + std::to_string(n));
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return LatticeGraph::from_edges(n, std::move(edges), LatticeFamily::complete);
}

LatticeGraph make_star(int z) {
  if (z < 1) throw SizeError("make_star: need z >= 1, got " + std::to_string(z));
  std::vector<Edge> edges;
  for (int leaf = 1; leaf <= z; ++leaf) edges.push_back({0, leaf});
  return LatticeGraph::from_edges(z + 1, std::move(edges), LatticeFamily::star);
}

std::vector<int> bfs_distances(const LatticeGraph& graph, int source) {
  std::vector<int> dist(static_cast<std::size_t>(graph.n_sites()), -1);
  dist[source] = 0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : graph.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<Edge> nnn_pairs(const LatticeGraph& graph) {
  std::vector<Edge> pairs;
  const int n = graph.n_sites();
  for (int i = 0; i < n; ++i) {
    // neighbours of neighbours, excluding i itself and direct neighbours
    std::set<int> second;
    for (int j : graph.neighbors(i)) {
      for (int k : graph.neighbors(j)) {
        if (k > i) second.insert(k);
      }
    }
    for (int k : second) {
      if (!std::binary_search(graph.neighbors(i).begin(), graph.neighbors(i).end(), k)) pairs.push_back({i, k});
    }
  }
  return pairs;
}

LatticeGraph lattice_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("lattice: document must be an object");
  try {
    if (doc.contains("edges")) {
      const int n = doc.at("n_sites").get<int>();
      std::vector<Edge> edges;
      for (const auto& item : doc.at("edges")) {
        if (!item.is_array() || item.size() != 2) throw ValidationError("lattice: edge " + item.dump() + " is not a pair");
        edges.push_back({item[0].get<int>(), item[1].get<int>()});
      }
      return LatticeGraph::from_edges(n, std::move(edges), LatticeFamily::custom);
    }
    const std::string family = doc.at("family").get<std::string>();
    if (family == "ring") return make_ring(doc.at("sites").get<int>());
    if (family == "complete") return make_complete(doc.at("sites").get<int>());
    if (family == "star") return make_star(doc.at("z").get<int>());
    if (family == "hypercubic") {
      return make_hypercubic(doc.at("dims").get<std::vector<int>>(), doc.value("periodic", true));
    }
    throw ValidationError("lattice: unknown family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("lattice: ") + e.what());
  }
}

nlohmann::json lattice_to_json(const LatticeGraph& graph) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.a, e.b});
  return {{"n_sites", graph.n_sites()}, {"edges", edges}, {"family", to_string(graph.family())}, {"z", graph.z()},
          {"regular", graph.regular()}, {"bipartite", graph.bipartite()}};
}

}  // namespace spinlab
