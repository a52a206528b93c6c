#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "corrnet/correlation.hpp"
#include "corrnet/error.hpp"
#include "corrnet/threshold_network.hpp"

namespace corrnet {

/// Union-find with path compression and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) x = std::exchange(parent_[x], root);
    return root;
  }

  /// Returns false when `a` and `b` were already joined.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Spanning tree; each edge weight is the distance d_ij^MST.
struct Tree {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;

  Graph as_graph() const { return Graph(nodes, edges); }
};

struct HubReport {
  std::string hub;
  std::size_t hub_position = 0;
  std::size_t degree = 0;
  std::map<std::string, std::size_t> hops;
};

/// Kruskal over all pairs. Equal distances are taken in lexicographic order
/// of the (smaller id, larger id) pair.
inline Tree build_mst(const DistMatrix& dm) {
  const auto n = dm.size();
  if (n < 2) fail(ErrorCode::TooFewNodes, "a spanning tree needs at least 2 nodes");

  const auto& ids = dm.index_ids;
  auto id_pair = [&](std::size_t i, std::size_t j) {
    return ids[i] < ids[j] ? std::tie(ids[i], ids[j]) : std::tie(ids[j], ids[i]);
  };

  std::vector<Edge> candidates;
  candidates.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!std::isfinite(d)) fail(ErrorCode::InvalidArgument, "non-finite distance " + ids[i] + "-" + ids[j]);
      candidates.push_back({i, j, d});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return id_pair(a.u, a.v) < id_pair(b.u, b.v);
  });

  Tree tree{ids, {}};
  DisjointSets sets(n);
  for (const auto& e : candidates) {
    if (sets.unite(e.u, e.v)) {
      tree.edges.push_back(e);
      if (tree.edges.size() == n - 1) break;
    }
  }
  return tree;
}

/// Mean MST edge distance, L = sum d / (N - 1).
inline double average_tree_length(const Tree& t) {
  if (t.edges.empty()) fail(ErrorCode::TooFewNodes, "tree has no edges");
  double sum = 0.0;
  for (const auto& e : t.edges) sum += e.weight;
  return sum / static_cast<double>(t.edges.size());
}

/// Hub = `override_id` when given, otherwise the highest-degree node with
/// ties going to the smallest id. Hops are tree path lengths from the hub.
inline HubReport hub_node(const Tree& t, const std::optional<std::string>& override_id = std::nullopt) {
  const Graph g = t.as_graph();
  std::size_t hub = 0;
  if (override_id) {
    auto it = std::find(t.nodes.begin(), t.nodes.end(), *override_id);
    if (it == t.nodes.end()) fail(ErrorCode::UnknownOverrideId, *override_id + " is not a tree node");
    hub = static_cast<std::size_t>(it - t.nodes.begin());
  } else {
    for (std::size_t v = 1; v < g.n_nodes(); ++v) {
      if (g.degree(v) > g.degree(hub) || (g.degree(v) == g.degree(hub) && t.nodes[v] < t.nodes[hub])) hub = v;
    }
  }

  HubReport report{t.nodes[hub], hub, g.degree(hub), {}};
  const auto dist = bfs_hops(g, hub);
  for (std::size_t v = 0; v < g.n_nodes(); ++v) {
    if (dist[v] == kUnreachable) fail(ErrorCode::DisconnectedGraph, "tree is not connected at " + t.nodes[v]);
    report.hops.emplace(t.nodes[v], dist[v]);
  }
  return report;
}

inline double tree_modularity(const Tree& t, const ZonePartition& zones) {
  const Graph g = t.as_graph();
  return modularity(g, zone_partition(g, zones));
}

}  // namespace corrnet
