#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "ricci/error.hpp"

namespace ricci {

using node_id = std::uint32_t;

/// Immutable undirected simple graph with positive edge lengths.
/// Node ids are dense integers 0..node_count-1; unweighted graphs carry
/// length exactly 1.0 on every edge. Safe to share across threads once
/// constructed.
class Graph {
 public:
  struct Edge {
    node_id u = 0;
    node_id v = 0;  // canonical u < v after construction
    double length = 1.0;
  };
  struct Neighbor {
    node_id id;
    double length;
  };

  Graph() = default;

  Graph(std::size_t node_count, std::vector<Edge> edges)
      : node_count_(node_count), edges_(std::move(edges)) {
    for (auto& e : edges_) {
      if (e.u >= node_count_ || e.v >= node_count_)
        throw domain_error("edge endpoint out of node range: " + std::to_string(e.u) + "-" +
                           std::to_string(e.v));
      if (e.u == e.v) throw domain_error("self-loop at node " + std::to_string(e.u));
      if (!std::isfinite(e.length) || e.length <= 0.0)
        throw domain_error("edge length must be positive and finite");
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.length != 1.0) unit_lengths_ = false;
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v)
        throw domain_error("duplicate edge " + std::to_string(edges_[i].u) + "-" +
                           std::to_string(edges_[i].v));
    }
    build_adjacency();
  }

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_[index]; }

  std::span<const Neighbor> neighbors(node_id u) const {
    return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
  }
  std::size_t degree(node_id u) const { return offsets_[u + 1] - offsets_[u]; }

  std::optional<double> edge_length(node_id u, node_id v) const {
    if (u >= node_count_ || v >= node_count_) return std::nullopt;
    const auto nbrs = neighbors(u);
    const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                                     [](const Neighbor& n, node_id x) { return n.id < x; });
    if (it == nbrs.end() || it->id != v) return std::nullopt;
    return it->length;
  }
  bool has_edge(node_id u, node_id v) const { return edge_length(u, v).has_value(); }

  /// True when every edge has length exactly 1.0 (hop metric).
  bool unit_lengths() const { return unit_lengths_; }

 private:
  void build_adjacency() {
    offsets_.assign(node_count_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 1; i <= node_count_; ++i) offsets_[i] += offsets_[i - 1];
    neighbors_.resize(edges_.size() * 2);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      neighbors_[cursor[e.u]++] = {e.v, e.length};
      neighbors_[cursor[e.v]++] = {e.u, e.length};
    }
    for (node_id u = 0; u < node_count_; ++u) {
      std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]),
                neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]),
                [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    }
  }

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> neighbors_;
  bool unit_lengths_ = true;
};

/// Ordered set of graphs with per-graph class labels and display names.
struct GraphCollection {
  std::vector<Graph> graphs;
  std::vector<int> labels;
  std::vector<std::string> names;

  std::size_t size() const { return graphs.size(); }

  void validate() const {
    if (graphs.size() != labels.size() || graphs.size() != names.size())
      throw domain_error("collection graphs/labels/names sizes differ");
  }

  std::size_t distinct_label_count() const {
    std::vector<int> seen(labels);
    std::sort(seen.begin(), seen.end());
    return static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
  }
};

/// Pairwise shortest-path distances between two node lists. Entries are
/// exact distances in the full graph; pairs not reachable within the
/// caller's radius cap hold the cap value.
struct DistanceTable {
  std::vector<node_id> sources;
  std::vector<node_id> targets;
  std::vector<double> dist;  // row-major |sources| x |targets|

  double at(std::size_t i, std::size_t j) const { return dist[i * targets.size() + j]; }
  double& at(std::size_t i, std::size_t j) { return dist[i * targets.size() + j]; }
};

inline DistanceTable transposed(const DistanceTable& t) {
  DistanceTable out{t.targets, t.sources, std::vector<double>(t.dist.size())};
  for (std::size_t i = 0; i < t.sources.size(); ++i)
    for (std::size_t j = 0; j < t.targets.size(); ++j) out.at(j, i) = t.at(i, j);
  return out;
}

namespace detail {

/// Reusable per-thread search workspace. Arrays are stamped instead of
/// cleared so a search on a k-node ball costs O(k), not O(n).
struct SearchScratch {
  std::vector<double> dist;
  std::vector<std::uint32_t> mark;
  std::vector<std::uint32_t> target_mark;
  std::vector<std::uint32_t> target_done;
  std::vector<std::uint32_t> target_col;
  std::vector<node_id> fifo;
  std::uint32_t epoch = 0;

  void prepare(std::size_t n) {
    if (dist.size() < n) {
      dist.resize(n);
      mark.resize(n, 0);
      target_mark.resize(n, 0);
      target_done.resize(n, 0);
      target_col.resize(n, 0);
    }
    if (++epoch == 0) {
      std::fill(mark.begin(), mark.end(), 0u);
      std::fill(target_mark.begin(), target_mark.end(), 0u);
      std::fill(target_done.begin(), target_done.end(), 0u);
      epoch = 1;
    }
  }

  /// Marks targets for this epoch; duplicate entries share the column of
  /// their first occurrence. Returns the number of distinct targets.
  std::size_t mark_targets(std::span<const node_id> targets) {
    std::size_t distinct = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (target_mark[targets[j]] == epoch) continue;
      target_mark[targets[j]] = epoch;
      target_col[targets[j]] = static_cast<std::uint32_t>(j);
      ++distinct;
    }
    return distinct;
  }
};

inline SearchScratch& search_scratch() {
  thread_local SearchScratch scratch;
  return scratch;
}

/// Truncated BFS for the hop metric. Fills one row of the table.
inline void bfs_row(const Graph& g, node_id source, std::span<const node_id> targets,
                    double radius_cap, double* row, SearchScratch& s) {
  s.prepare(g.node_count());
  const std::uint32_t epoch = s.epoch;
  std::size_t remaining = s.mark_targets(targets);
  auto settle = [&](node_id x, double d) {
    if (s.target_mark[x] == epoch && s.target_done[x] != epoch) {
      s.target_done[x] = epoch;
      row[s.target_col[x]] = d;
      --remaining;
    }
  };
  s.fifo.clear();
  s.fifo.push_back(source);
  s.dist[source] = 0.0;
  s.mark[source] = epoch;
  settle(source, 0.0);
  for (std::size_t head = 0; head < s.fifo.size() && remaining > 0; ++head) {
    const node_id x = s.fifo[head];
    const double dx = s.dist[x];
    if (dx + 1.0 > radius_cap) break;  // frontier past the cap
    for (const auto& nb : g.neighbors(x)) {
      if (s.mark[nb.id] == epoch) continue;
      s.mark[nb.id] = epoch;
      s.dist[nb.id] = dx + 1.0;
      settle(nb.id, dx + 1.0);
      if (remaining == 0) break;
      s.fifo.push_back(nb.id);
    }
  }
}

/// Truncated Dijkstra for weighted graphs.
inline void dijkstra_row(const Graph& g, node_id source, std::span<const node_id> targets,
                         double radius_cap, double* row, SearchScratch& s) {
  s.prepare(g.node_count());
  const std::uint32_t epoch = s.epoch;
  std::size_t remaining = s.mark_targets(targets);
  using Item = std::pair<double, node_id>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.emplace(0.0, source);
  s.dist[source] = 0.0;
  s.mark[source] = epoch;
  while (!heap.empty() && remaining > 0) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > s.dist[x]) continue;  // superseded entry
    if (s.target_mark[x] == epoch && s.target_done[x] != epoch) {
      s.target_done[x] = epoch;
      row[s.target_col[x]] = d;
      --remaining;
    }
    for (const auto& nb : g.neighbors(x)) {
      const double nd = d + nb.length;
      if (nd > radius_cap) continue;
      if (s.mark[nb.id] != epoch || nd < s.dist[nb.id]) {
        s.mark[nb.id] = epoch;
        s.dist[nb.id] = nd;
        heap.emplace(nd, nb.id);
      }
    }
  }
}

}  // namespace detail

/// Exact shortest-path distances from every source to every target,
/// searching no further than radius_cap. A target that stays unreached
/// inside the cap keeps the cap value, which makes the operation total;
/// callers pick caps that no true distance can exceed.
inline DistanceTable truncated_distances(const Graph& g, std::span<const node_id> sources,
                                         std::span<const node_id> targets, double radius_cap) {
  if (!(radius_cap >= 0.0)) throw domain_error("radius_cap must be non-negative");
  for (const node_id x : sources)
    if (x >= g.node_count()) throw domain_error("source node out of range");
  for (const node_id x : targets)
    if (x >= g.node_count()) throw domain_error("target node out of range");

  DistanceTable table{{sources.begin(), sources.end()},
                      {targets.begin(), targets.end()},
                      std::vector<double>(sources.size() * targets.size(), radius_cap)};
  auto& scratch = detail::search_scratch();
  for (std::size_t i = 0; i < sources.size(); ++i) {
    double* row = table.dist.data() + i * targets.size();
    if (g.unit_lengths())
      detail::bfs_row(g, sources[i], targets, radius_cap, row, scratch);
    else
      detail::dijkstra_row(g, sources[i], targets, radius_cap, row, scratch);
  }

  // Duplicate targets share the column filled for their first occurrence.
  std::vector<std::uint32_t> order(targets.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<std::uint32_t>(j);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return targets[a] != targets[b] ? targets[a] < targets[b] : a < b; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (targets[order[k]] != targets[order[k - 1]]) continue;
    std::size_t first = k;
    while (first > 0 && targets[order[first - 1]] == targets[order[k]]) --first;
    for (std::size_t i = 0; i < sources.size(); ++i)
      table.at(i, order[k]) = table.at(i, order[first]);
  }
  return table;
}

}  // namespace ricci
