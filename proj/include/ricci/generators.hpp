#pragma once

#include <cstdint>
#include <set>
#include <unordered_set>
#include <vector>

#include "ricci/error.hpp"
#include "ricci/graph.hpp"
#include "ricci/random.hpp"

namespace ricci {

/// Erdos-Renyi G(n, p): every unordered pair is an edge independently with
/// probability p. Deterministic for a fixed seed.
inline Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw domain_error("edge probability must be in [0, 1]");
  Rng rng(seed);
  std::vector<Graph::Edge> edges;
  for (node_id u = 0; u + 1 < n; ++u)
    for (node_id v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

/// Barabasi-Albert preferential attachment. Starts from a clique on
/// m_attach + 1 nodes; each later node attaches to m_attach distinct
/// existing nodes chosen proportionally to degree, giving exactly
/// m_attach * (n - m_attach - 1) + C(m_attach + 1, 2) edges.
inline Graph generate_ba(std::size_t n, std::size_t m_attach, std::uint64_t seed) {
  if (m_attach < 1) throw domain_error("m_attach must be >= 1");
  if (n < m_attach + 1) throw domain_error("n must be at least m_attach + 1");
  Rng rng(seed);
  std::vector<Graph::Edge> edges;
  edges.reserve(m_attach * (n - m_attach - 1) + m_attach * (m_attach + 1) / 2);

  // One entry per edge endpoint; uniform draws from this list realize
  // degree-proportional selection.
  std::vector<node_id> endpoints;
  const node_id seed_size = static_cast<node_id>(m_attach + 1);
  for (node_id u = 0; u + 1 < seed_size; ++u) {
    for (node_id v = u + 1; v < seed_size; ++v) {
      edges.push_back({u, v, 1.0});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }

  std::vector<node_id> picked;
  for (node_id t = seed_size; t < n; ++t) {
    picked.clear();
    while (picked.size() < m_attach) {
      const node_id candidate = endpoints[rng.below(endpoints.size())];
      bool duplicate = false;
      for (const node_id c : picked) duplicate |= (c == candidate);
      if (!duplicate) picked.push_back(candidate);
    }
    for (const node_id c : picked) {
      edges.push_back({c, t, 1.0});
      endpoints.push_back(c);
      endpoints.push_back(t);
    }
  }
  return Graph(n, std::move(edges));
}

/// Watts-Strogatz small world: a ring lattice where every node links to its
/// k/2 nearest neighbours on each side, then each lattice edge is rewired
/// with probability beta to a uniformly chosen non-adjacent node.
inline Graph generate_ws(std::size_t n, std::size_t k, double beta, std::uint64_t seed) {
  if (k % 2 != 0) throw domain_error("k must be even");
  if (k >= n) throw domain_error("k must be smaller than n");
  if (!(beta >= 0.0 && beta <= 1.0)) throw domain_error("beta must be in [0, 1]");
  Rng rng(seed);

  std::set<std::pair<node_id, node_id>> edge_set;
  auto key = [](node_id a, node_id b) { return std::pair{std::min(a, b), std::max(a, b)}; };
  for (std::size_t j = 1; j <= k / 2; ++j)
    for (node_id u = 0; u < n; ++u)
      edge_set.insert(key(u, static_cast<node_id>((u + j) % n)));

  // Rewiring pass in lattice order. The candidate set is enumerated so that
  // the draw stays uniform and the pass terminates even at saturated nodes.
  std::vector<node_id> candidates;
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (node_id u = 0; u < n; ++u) {
      const node_id w = static_cast<node_id>((u + j) % n);
      if (!rng.bernoulli(beta)) continue;
      candidates.clear();
      for (node_id c = 0; c < n; ++c)
        if (c != u && !edge_set.count(key(u, c))) candidates.push_back(c);
      if (candidates.empty()) continue;  // u already adjacent to everyone
      const node_id nw = candidates[rng.below(candidates.size())];
      edge_set.erase(key(u, w));
      edge_set.insert(key(u, nw));
    }
  }

  std::vector<Graph::Edge> edges;
  edges.reserve(edge_set.size());
  for (const auto& [u, v] : edge_set) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

}  // namespace ricci
