#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ricci/error.hpp"
#include "ricci/graph.hpp"
#include "ricci/graph_io.hpp"
#include "ricci/parallel.hpp"
#include "ricci/random.hpp"
#include "ricci/transport.hpp"

namespace ricci {

struct CurvatureEntry {
  node_id u;
  node_id v;  // u < v
  double kappa;
};

/// Per-edge curvature values, possibly for a sampled subset of the edges.
/// Entries are kept in canonical (u, v) order, so the result of a parallel
/// run never depends on scheduling.
struct CurvatureMap {
  std::vector<CurvatureEntry> entries;
  std::size_t graph_edge_count = 0;
  bool sampled = false;
  std::optional<std::uint64_t> seed;

  double coverage() const {
    return graph_edge_count == 0
               ? 0.0
               : static_cast<double>(entries.size()) / static_cast<double>(graph_edge_count);
  }
  bool full_coverage() const {
    return graph_edge_count > 0 && entries.size() == graph_edge_count;
  }
};

/// Number of uniformly sampled edges needed for an epsilon-accurate estimate
/// of the curvature distribution with probability 1 - delta:
/// ceil(c * (eps^-2 ln(1/eps) + eps^-2 ln(1/delta))).
inline std::size_t sample_size(double eps, double delta, double constant_c) {
  if (!(eps > 0.0 && eps < 1.0)) throw domain_error("epsilon must be in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw domain_error("delta must be in (0, 1)");
  if (!(constant_c > 0.0)) throw domain_error("constant_c must be positive");
  const double inv_eps2 = 1.0 / (eps * eps);
  const double raw = constant_c * (inv_eps2 * std::log(1.0 / eps) + inv_eps2 * std::log(1.0 / delta));
  return static_cast<std::size_t>(std::ceil(raw));
}

struct SamplingPlan {
  double epsilon;
  double delta;
  double constant_c;
  std::size_t sample_count;
};

inline SamplingPlan make_sampling_plan(double eps, double delta, double constant_c = 1.0) {
  return {eps, delta, constant_c, sample_size(eps, delta, constant_c)};
}

/// Everything a curvature evaluation produces; tests and diagnostics read
/// the transport cost and the certified plan, the pipeline keeps kappa.
struct EdgeCurvature {
  double kappa;
  double transport_cost;
  double edge_length;
  MassDistribution mu;
  MassDistribution mv;
  TransportPlan plan;
};

namespace detail {

/// Exact hop distances between the closed neighborhoods of an edge's
/// endpoints, without any graph search: for x in N[u] and y in N[v] the
/// distance is 0, 1 (adjacent), 2 (shared neighbor), and otherwise exactly
/// 3 because the path x-u-v-y always exists. Work depends only on the
/// local degrees, never on the graph size. Values equal what the truncated
/// search with cap 3 produces.
inline DistanceTable edge_neighborhood_distances(const Graph& g, std::span<const node_id> sources,
                                                 std::span<const node_id> targets) {
  auto& s = search_scratch();
  DistanceTable table{{sources.begin(), sources.end()},
                      {targets.begin(), targets.end()},
                      std::vector<double>(sources.size() * targets.size(), 3.0)};
  const std::size_t nt = targets.size();

  // targets are stamped once; each row bumps the epoch for its own
  // neighbor marks, so the target stamps must stay clear of the row range
  s.prepare(g.node_count());
  if (s.epoch > std::numeric_limits<std::uint32_t>::max() - sources.size() - 2) {
    std::fill(s.mark.begin(), s.mark.end(), 0u);
    std::fill(s.target_mark.begin(), s.target_mark.end(), 0u);
    std::fill(s.target_done.begin(), s.target_done.end(), 0u);
    s.epoch = 1;
  }
  const std::uint32_t target_epoch = s.epoch;
  s.mark_targets(targets);

  for (std::size_t i = 0; i < sources.size(); ++i) {
    const node_id x = sources[i];
    const std::uint32_t epoch = ++s.epoch;
    for (const auto& nb : g.neighbors(x)) s.mark[nb.id] = epoch;
    double* row = table.dist.data() + i * nt;

    // two ways to find the distance-2 targets: walk the row node's wedges
    // (cost: its 2-hop volume) or probe every target's neighbors (cost:
    // roughly the target count times the hit depth); take the cheaper one
    std::size_t wedge_volume = 0;
    for (const auto& nb : g.neighbors(x)) wedge_volume += g.degree(nb.id);
    if (wedge_volume <= nt * 8) {
      for (const auto& nb : g.neighbors(x)) {
        for (const auto& nb2 : g.neighbors(nb.id)) {
          if (s.target_mark[nb2.id] == target_epoch) row[s.target_col[nb2.id]] = 2.0;
        }
      }
      for (std::size_t j = 0; j < nt; ++j) {
        const node_id y = targets[j];
        if (x == y)
          row[j] = 0.0;
        else if (s.mark[y] == epoch)
          row[j] = 1.0;
      }
    } else {
      for (std::size_t j = 0; j < nt; ++j) {
        const node_id y = targets[j];
        if (x == y) {
          row[j] = 0.0;
        } else if (s.mark[y] == epoch) {
          row[j] = 1.0;
        } else {
          for (const auto& nb : g.neighbors(y)) {
            if (s.mark[nb.id] == epoch) {
              row[j] = 2.0;
              break;
            }
          }
        }
      }
    }
  }
  return table;
}

}  // namespace detail

/// kappa(uv) = 1 - W(u, v) / d(u, v) with the lazy neighborhood measures.
/// On unweighted graphs every relevant distance is at most 3 hops (any
/// support pair connects through the edge itself), so the search radius is
/// capped at 3 * length; weighted graphs use uncapped exact distances.
inline EdgeCurvature edge_curvature_detail(const Graph& g, node_id u, node_id v, double alpha) {
  const auto length = g.edge_length(u, v);
  if (!length) throw domain_error("(" + std::to_string(u) + ", " + std::to_string(v) + ") is not an edge");

  EdgeCurvature result;
  result.edge_length = *length;
  result.mu = neighborhood_measure(g, u, alpha);
  result.mv = neighborhood_measure(g, v, alpha);

  DistanceTable table;
  if (g.unit_lengths()) {
    // cap would be 3 * length = 3 hops, attainable through the edge itself
    if (result.mu.size() <= result.mv.size()) {
      table = detail::edge_neighborhood_distances(g, result.mu.support, result.mv.support);
    } else {
      table = transposed(detail::edge_neighborhood_distances(g, result.mv.support, result.mu.support));
    }
  } else {
    const double cap = std::numeric_limits<double>::infinity();
    if (result.mu.size() <= result.mv.size()) {
      table = truncated_distances(g, result.mu.support, result.mv.support, cap);
    } else {
      table = transposed(truncated_distances(g, result.mv.support, result.mu.support, cap));
    }
  }
  result.plan = emd(result.mu, result.mv, table);
  result.transport_cost = result.plan.cost;
  result.kappa = 1.0 - result.plan.cost / *length;
  return result;
}

inline double edge_curvature(const Graph& g, node_id u, node_id v, double alpha) {
  return edge_curvature_detail(g, u, v, alpha).kappa;
}

namespace detail {

/// Map-level kappa: identical value to edge_curvature up to solver
/// round-off, with the reduced-instance path engaged once the supports get
/// big enough for it to pay off.
inline double edge_kappa(const Graph& g, const Graph::Edge& e, double alpha) {
  if (!g.unit_lengths()) return edge_curvature_detail(g, e.u, e.v, alpha).kappa;
  const auto mu = neighborhood_measure(g, e.u, alpha);
  const auto mv = neighborhood_measure(g, e.v, alpha);
  // W is symmetric, so the table is built from the smaller support and fed
  // to the solver in that orientation; no transposed copy needed.
  const double w = mu.size() <= mv.size()
                       ? emd(mu, mv, edge_neighborhood_distances(g, mu.support, mv.support)).cost
                       : emd(mv, mu, edge_neighborhood_distances(g, mv.support, mu.support)).cost;
  return 1.0 - w / e.length;
}

}  // namespace detail

/// Curvature of every edge. Per-edge tasks are pure and write disjoint
/// slots, so the map is identical for any worker count.
inline CurvatureMap all_curvatures(const Graph& g, double alpha, unsigned workers = 0) {
  if (g.edge_count() == 0) throw domain_error("graph has no edges");
  CurvatureMap map;
  map.graph_edge_count = g.edge_count();
  map.entries.resize(g.edge_count());
  parallel_for(g.edge_count(), workers, [&](std::size_t i) {
    const auto& e = g.edge(i);
    map.entries[i] = {e.u, e.v, detail::edge_kappa(g, e, alpha)};
  });
  return map;
}

/// Curvature of min(plan.sample_count, |E|) edges drawn uniformly without
/// replacement. Deterministic per seed; the edge subset never depends on
/// the worker count. Cost is proportional to the sample count, not |E|.
inline CurvatureMap sampled_curvatures(const Graph& g, double alpha, const SamplingPlan& plan,
                                       std::uint64_t seed, unsigned workers = 0) {
  if (g.edge_count() == 0) throw domain_error("graph has no edges");
  if (plan.sample_count == 0) throw domain_error("sample count must be positive");
  const std::size_t total = g.edge_count();
  const std::size_t take = std::min(plan.sample_count, total);

  // Partial Fisher-Yates over edge indices.
  Rng rng(seed, rng_stream::sampling);
  std::vector<std::uint32_t> indices(total);
  for (std::size_t i = 0; i < total; ++i) indices[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(take);
  std::sort(indices.begin(), indices.end());

  CurvatureMap map;
  map.graph_edge_count = total;
  map.sampled = true;
  map.seed = seed;
  map.entries.resize(take);
  parallel_for(take, workers, [&](std::size_t i) {
    const auto& e = g.edge(indices[i]);
    map.entries[i] = {e.u, e.v, detail::edge_kappa(g, e, alpha)};
  });
  return map;
}

/// CSV with header "u,v,kappa", one row per computed edge, 12 significant
/// digits.
inline void write_curvature_csv(std::ostream& out, const CurvatureMap& map) {
  out << "u,v,kappa\n";
  char buf[80];
  for (const auto& e : map.entries) {
    std::snprintf(buf, sizeof(buf), "%u,%u,%.12g\n", e.u, e.v, e.kappa);
    out << buf;
  }
}

/// Reads a curvature CSV back against its graph. Rows must name existing
/// edges; missing rows simply lower the coverage (a sampled map).
inline CurvatureMap read_curvature_csv(std::istream& in, const Graph& g) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "u,v,kappa")
    throw parse_error("curvature CSV must start with header 'u,v,kappa'");
  CurvatureMap map;
  map.graph_edge_count = g.edge_count();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto c1 = body.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw parse_error("curvature CSV line " + std::to_string(line_no) + ": expected u,v,kappa");
    std::uint64_t u = 0, v = 0;
    double kappa = 0.0;
    if (!detail::parse_u64(detail::trim(body.substr(0, c1)), u) ||
        !detail::parse_u64(detail::trim(body.substr(c1 + 1, c2 - c1 - 1)), v) ||
        !detail::parse_f64(detail::trim(body.substr(c2 + 1)), kappa))
      throw parse_error("curvature CSV line " + std::to_string(line_no) + ": malformed row");
    const node_id a = static_cast<node_id>(std::min(u, v));
    const node_id b = static_cast<node_id>(std::max(u, v));
    if (!g.has_edge(a, b))
      throw parse_error("curvature CSV line " + std::to_string(line_no) + ": (" +
                        std::to_string(u) + ", " + std::to_string(v) + ") is not a graph edge");
    map.entries.push_back({a, b, kappa});
  }
  std::sort(map.entries.begin(), map.entries.end(), [](const CurvatureEntry& x, const CurvatureEntry& y) {
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  for (std::size_t i = 1; i < map.entries.size(); ++i)
    if (map.entries[i - 1].u == map.entries[i].u && map.entries[i - 1].v == map.entries[i].v)
      throw parse_error("curvature CSV lists an edge twice");
  map.sampled = !map.full_coverage();
  return map;
}

}  // namespace ricci
