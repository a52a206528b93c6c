#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corrnet/correlation.hpp"
#include "corrnet/error.hpp"
#include "corrnet/market_data.hpp"

namespace corrnet {

/// Undirected edge between node positions `u < v`.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected weighted graph. Node positions follow `nodes`; edges are
/// kept sorted by (u, v).
class Graph {
 public:
  Graph() = default;

  Graph(std::vector<std::string> nodes, std::vector<Edge> edges)
      : nodes_(std::move(nodes)), adjacency_(nodes_.size()) {
    for (auto& e : edges) {
      if (e.u >= nodes_.size() || e.v >= nodes_.size()) fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
      if (e.u == e.v) fail(ErrorCode::InvalidArgument, "self-loop on " + nodes_[e.u]);
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t k = 1; k < edges.size(); ++k) {
      if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v) {
        fail(ErrorCode::InvalidArgument, "duplicate edge " + nodes_[edges[k].u] + "-" + nodes_[edges[k].v]);
      }
    }
    edges_ = std::move(edges);
    for (const auto& e : edges_) {
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
  }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t node) const { return adjacency_[node]; }

  std::size_t n_nodes() const { return nodes_.size(); }
  std::size_t n_edges() const { return edges_.size(); }
  std::size_t degree(std::size_t node) const { return adjacency_[node].size(); }

  bool has_edge(std::size_t u, std::size_t v) const {
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Community assignment, one label per node. Labels are renumbered densely
/// in order of first appearance, so the community holding node 0 is label 0.
class Partition {
 public:
  Partition() = default;

  explicit Partition(const std::vector<std::size_t>& raw_labels) {
    std::map<std::size_t, std::size_t> remap;
    labels_.reserve(raw_labels.size());
    for (auto raw : raw_labels) {
      auto [it, inserted] = remap.emplace(raw, remap.size());
      labels_.push_back(it->second);
    }
    n_communities_ = remap.size();
  }

  const std::vector<std::size_t>& labels() const { return labels_; }
  std::size_t operator[](std::size_t node) const { return labels_[node]; }
  std::size_t size() const { return labels_.size(); }
  std::size_t n_communities() const { return n_communities_; }

  std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> out(n_communities_);
    for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
    return out;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::size_t> labels_;
  std::size_t n_communities_ = 0;
};

struct CommunityResult {
  Partition partition;
  double modularity = 0.0;
};

struct GraphMetrics {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::size_t n_components = 0;
  std::size_t largest_cluster_size = 0;
  std::optional<double> char_path_length;
  // Set when the graph is disconnected and the path length covers only the
  // largest component.
  bool path_length_on_largest_component = false;
  double global_efficiency = 0.0;
  std::optional<double> intensity_largest_cluster;
  std::optional<double> modularity_zones;
  std::optional<double> modularity_detected;
  std::optional<Partition> communities;
  std::vector<std::size_t> largest_cluster;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

inline double threshold_from_k(const CorrMoments& moments, double k) { return moments.mean + k * moments.std; }

/// Edge (i, j) for every C_ij >= theta, weighted by C_ij. Isolated nodes stay.
/// A theta above 1 gives an edgeless graph.
inline Graph build_threshold_network(const CorrMatrix& cm, double theta) {
  if (std::isnan(theta)) fail(ErrorCode::InvalidArgument, "theta is NaN");
  std::vector<Edge> edges;
  const auto n = cm.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = cm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (c >= theta) edges.push_back({i, j, c});
    }
  }
  return Graph(cm.index_ids, std::move(edges));
}

inline Partition connected_components(const Graph& g) {
  std::vector<std::size_t> label(g.n_nodes(), kUnreachable);
  std::size_t next = 0;
  for (std::size_t s = 0; s < g.n_nodes(); ++s) {
    if (label[s] != kUnreachable) continue;
    std::vector<std::size_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto v : g.neighbors(u)) {
        if (label[v] == kUnreachable) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return Partition(label);
}

/// Hop counts from `source`; kUnreachable where no path exists. When `allowed`
/// is given the search never leaves the marked nodes.
inline std::vector<std::size_t> bfs_hops(const Graph& g, std::size_t source,
                                         const std::vector<bool>* allowed = nullptr) {
  std::vector<std::size_t> dist(g.n_nodes(), kUnreachable);
  std::queue<std::size_t> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    auto u = frontier.front();
    frontier.pop();
    for (auto v : g.neighbors(u)) {
      if (dist[v] != kUnreachable || (allowed && !(*allowed)[v])) continue;
      dist[v] = dist[u] + 1;
      frontier.push(v);
    }
  }
  return dist;
}

/// Mean hop distance over unordered pairs. With `restrict_to`, only those
/// nodes and the edges among them are considered.
inline double char_path_length(const Graph& g, std::optional<std::span<const std::size_t>> restrict_to = std::nullopt) {
  std::vector<std::size_t> nodes;
  std::vector<bool> allowed(g.n_nodes(), restrict_to == std::nullopt);
  if (restrict_to) {
    for (auto v : *restrict_to) {
      if (v >= g.n_nodes()) fail(ErrorCode::InvalidArgument, "node position out of range");
      if (!allowed[v]) nodes.push_back(v);
      allowed[v] = true;
    }
  } else {
    for (std::size_t v = 0; v < g.n_nodes(); ++v) nodes.push_back(v);
  }
  if (nodes.size() < 2) fail(ErrorCode::TooFewNodes, "path length needs at least 2 nodes");

  std::uint64_t total = 0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    auto dist = bfs_hops(g, nodes[a], &allowed);
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (dist[nodes[b]] == kUnreachable) {
        fail(ErrorCode::DisconnectedGraph, g.nodes()[nodes[a]] + " cannot reach " + g.nodes()[nodes[b]]);
      }
      total += dist[nodes[b]];
    }
  }
  const double pairs = static_cast<double>(nodes.size()) * static_cast<double>(nodes.size() - 1) / 2.0;
  return static_cast<double>(total) / pairs;
}

/// Mean of 1 / l_ij over unordered pairs; disconnected pairs contribute 0.
inline double global_efficiency(const Graph& g) {
  const auto n = g.n_nodes();
  if (n < 2) fail(ErrorCode::TooFewNodes, "efficiency needs at least 2 nodes");
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    auto dist = bfs_hops(g, a);
    for (std::size_t b = a + 1; b < n; ++b) {
      if (dist[b] != kUnreachable) sum += 1.0 / static_cast<double>(dist[b]);
    }
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

/// Geometric mean of the weights of the edges induced by `nodes`.
inline double subgraph_intensity(const Graph& g, std::span<const std::size_t> nodes) {
  std::vector<bool> inside(g.n_nodes(), false);
  for (auto v : nodes) {
    if (v >= g.n_nodes()) fail(ErrorCode::InvalidArgument, "node position out of range");
    inside[v] = true;
  }
  double log_sum = 0.0;
  std::size_t count = 0;
  std::optional<double> common;
  bool all_equal = true;
  for (const auto& e : g.edges()) {
    if (!inside[e.u] || !inside[e.v]) continue;
    if (!(e.weight > 0.0)) fail(ErrorCode::NonPositiveWeight, g.nodes()[e.u] + "-" + g.nodes()[e.v]);
    if (common && *common != e.weight) all_equal = false;
    common = common.value_or(e.weight);
    log_sum += std::log(e.weight);
    ++count;
  }
  if (count == 0) fail(ErrorCode::NoEdges, "subset induces no edges");
  if (all_equal) return *common;
  return std::exp(log_sum / static_cast<double>(count));
}

/// Q = (1/2m) sum_ij (A_ij - k_i k_j / 2m) delta(c_i, c_j), evaluated per
/// community as sum_c [ L_c / m - (D_c / 2m)^2 ].
inline double modularity(const Graph& g, const Partition& p) {
  if (p.size() != g.n_nodes()) fail(ErrorCode::InvalidArgument, "partition size does not match graph");
  const auto m = g.n_edges();
  if (m == 0) fail(ErrorCode::NoEdges, "modularity is undefined without edges");
  std::vector<double> internal(p.n_communities(), 0.0);
  std::vector<double> degree_sum(p.n_communities(), 0.0);
  for (const auto& e : g.edges()) {
    if (p[e.u] == p[e.v]) internal[p[e.u]] += 1.0;
  }
  for (std::size_t v = 0; v < g.n_nodes(); ++v) degree_sum[p[v]] += static_cast<double>(g.degree(v));
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < p.n_communities(); ++c) {
    const double frac = degree_sum[c] / (2.0 * md);
    q += internal[c] / md - frac * frac;
  }
  return q;
}

/// Greedy agglomerative modularity maximisation. Starts from singletons and
/// merges the pair with the largest positive gain until none is left; equal
/// gains go to the smallest (label, label) pair, a merged community keeping
/// the smaller label. Gains are compared exactly through their integer
/// numerators 2m*E_ab - D_a*D_b.
inline CommunityResult detect_communities(const Graph& g) {
  const auto n = g.n_nodes();
  const auto m = static_cast<std::int64_t>(g.n_edges());
  if (m == 0) fail(ErrorCode::NoEdges, "community detection needs at least one edge");

  std::vector<std::vector<std::int64_t>> between(n, std::vector<std::int64_t>(n, 0));
  for (const auto& e : g.edges()) {
    between[e.u][e.v] += 1;
    between[e.v][e.u] += 1;
  }
  std::vector<std::int64_t> degree_sum(n);
  std::vector<std::size_t> owner(n);
  std::vector<bool> active(n, true);
  for (std::size_t v = 0; v < n; ++v) {
    degree_sum[v] = static_cast<std::int64_t>(g.degree(v));
    owner[v] = v;
  }

  while (true) {
    std::int64_t best = 0;
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!active[b]) continue;
        const std::int64_t gain = 2 * m * between[a][b] - degree_sum[a] * degree_sum[b];
        if (gain > best) {
          best = gain;
          pick = {a, b};
        }
      }
    }
    if (!pick) break;
    const auto [a, b] = *pick;
    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || c == a || c == b) continue;
      between[a][c] += between[b][c];
      between[c][a] = between[a][c];
    }
    degree_sum[a] += degree_sum[b];
    active[b] = false;
    for (auto& o : owner) {
      if (o == b) o = a;
    }
  }

  Partition p(owner);
  return {p, modularity(g, p)};
}

/// Maps zone labels onto graph positions.
inline Partition zone_partition(const Graph& g, const ZonePartition& zones) {
  require_zones(zones, g.nodes());
  std::map<std::string, std::size_t> label_of;
  std::vector<std::size_t> labels;
  for (const auto& id : g.nodes()) {
    auto [it, inserted] = label_of.emplace(zones.at(id), label_of.size());
    labels.push_back(it->second);
  }
  return Partition(labels);
}

inline GraphMetrics graph_metrics(const Graph& g, const ZonePartition& zones) {
  GraphMetrics out;
  out.n_nodes = g.n_nodes();
  out.n_edges = g.n_edges();
  const Partition zone_labels = zone_partition(g, zones);

  const auto components = connected_components(g).members();
  out.n_components = components.size();
  std::size_t largest = 0;
  for (std::size_t c = 1; c < components.size(); ++c) {
    if (components[c].size() > components[largest].size()) largest = c;
  }
  if (!components.empty()) {
    out.largest_cluster = components[largest];
    out.largest_cluster_size = out.largest_cluster.size();
  }
  if (out.largest_cluster_size >= 2) {
    out.char_path_length = char_path_length(g, std::span<const std::size_t>(out.largest_cluster));
    out.path_length_on_largest_component = components.size() > 1;
  }
  if (g.n_nodes() >= 2) out.global_efficiency = global_efficiency(g);

  if (g.n_edges() > 0) {
    try {
      out.intensity_largest_cluster = subgraph_intensity(g, out.largest_cluster);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonPositiveWeight) throw;
    }
    out.modularity_zones = modularity(g, zone_labels);
    auto detected = detect_communities(g);
    out.modularity_detected = detected.modularity;
    out.communities = std::move(detected.partition);
  }
  return out;
}

}  // namespace corrnet
