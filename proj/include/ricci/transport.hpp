#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ricci/error.hpp"
#include "ricci/graph.hpp"

namespace ricci {

/// Finite probability measure on node ids. Support nodes are distinct and
/// every stored mass is strictly positive; masses sum to 1 within 1e-12.
struct MassDistribution {
  std::vector<node_id> support;
  std::vector<double> mass;

  std::size_t size() const { return support.size(); }
  double total() const {
    double s = 0.0;
    for (const double m : mass) s += m;
    return s;
  }
};

/// The lazy neighborhood measure: mass alpha on x itself and
/// (1 - alpha) / deg(x) on each neighbor. alpha = 0.5 is the choice that
/// keeps curvature inside [-1, 1] on unweighted graphs.
inline MassDistribution neighborhood_measure(const Graph& g, node_id x, double alpha) {
  if (x >= g.node_count()) throw domain_error("node out of range");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw domain_error("alpha must be in [0, 1]");
  const std::size_t deg = g.degree(x);
  if (deg == 0) throw domain_error("node " + std::to_string(x) + " is isolated; curvature is undefined");

  MassDistribution d;
  // Zero-mass points are dropped so the support invariant (all masses > 0)
  // holds at the alpha = 0 and alpha = 1 boundaries.
  if (alpha > 0.0) {
    d.support.push_back(x);
    d.mass.push_back(alpha);
  }
  const double share = (1.0 - alpha) / static_cast<double>(deg);
  if (share > 0.0) {
    for (const auto& nb : g.neighbors(x)) {
      d.support.push_back(nb.id);
      d.mass.push_back(share);
    }
  }
  return d;
}

/// Optimal solution of the discrete transportation problem together with
/// the dual potentials that certify it: source_potential[i] +
/// target_potential[j] <= cost(i, j) for all cells, with equality on every
/// cell that carries flow.
struct TransportPlan {
  struct Flow {
    std::uint32_t source;
    std::uint32_t target;
    double amount;
  };
  std::vector<Flow> flows;
  double cost = 0.0;
  std::vector<double> source_potential;
  std::vector<double> target_potential;
};

namespace detail {

inline void check_transport_inputs(const MassDistribution& mu, const MassDistribution& mv,
                                   const DistanceTable& cost) {
  if (mu.size() == 0 || mv.size() == 0) throw domain_error("empty measure");
  if (cost.sources.size() != mu.size() || cost.targets.size() != mv.size())
    throw domain_error("cost table does not cover the two supports");
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (cost.sources[i] != mu.support[i]) throw domain_error("cost table sources mismatch");
  for (std::size_t j = 0; j < mv.size(); ++j)
    if (cost.targets[j] != mv.support[j]) throw domain_error("cost table targets mismatch");
  for (const double c : cost.dist)
    if (c < 0.0 || std::isnan(c)) throw domain_error("negative or NaN ground cost");
  if (std::abs(mu.total() - mv.total()) > 1e-9)
    throw domain_error("measures have different total mass");
}

constexpr double kMassDust = 1e-13;

}  // namespace detail

/// Verifies a plan against its instance: marginals within 1e-9, dual
/// feasibility, complementary slackness, and a primal-dual gap of at most
/// 1e-9. Throws internal_error when the certificate does not hold.
inline void verify_transport_plan(const TransportPlan& plan, const MassDistribution& mu,
                                  const MassDistribution& mv, const DistanceTable& cost) {
  const std::size_t m = mu.size(), n = mv.size();
  std::vector<double> row_sum(m, 0.0), col_sum(n, 0.0);
  for (const auto& f : plan.flows) {
    if (f.source >= m || f.target >= n) throw internal_error("flow index out of range");
    if (f.amount < 0.0) throw internal_error("negative flow amount");
    row_sum[f.source] += f.amount;
    col_sum[f.target] += f.amount;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (std::abs(row_sum[i] - mu.mass[i]) > 1e-9) throw internal_error("row marginal violated");
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(col_sum[j] - mv.mass[j]) > 1e-9) throw internal_error("column marginal violated");

  if (plan.source_potential.size() != m || plan.target_potential.size() != n)
    throw internal_error("missing dual potentials");
  double recomputed = 0.0;
  for (const auto& f : plan.flows) recomputed += f.amount * cost.at(f.source, f.target);
  if (std::abs(recomputed - plan.cost) > 1e-9) throw internal_error("plan cost mismatch");

  double dual_value = 0.0;
  for (std::size_t i = 0; i < m; ++i) dual_value += mu.mass[i] * plan.source_potential[i];
  for (std::size_t j = 0; j < n; ++j) dual_value += mv.mass[j] * plan.target_potential[j];
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = cost.at(i, j);
      if (!std::isfinite(c)) continue;
      const double slack = c - plan.source_potential[i] - plan.target_potential[j];
      if (slack < -1e-9) throw internal_error("dual infeasible cell");
    }
  }
  for (const auto& f : plan.flows) {
    if (f.amount <= detail::kMassDust) continue;
    const double slack =
        cost.at(f.source, f.target) - plan.source_potential[f.source] - plan.target_potential[f.target];
    if (std::abs(slack) > 1e-9) throw internal_error("complementary slackness violated");
  }
  if (plan.cost - dual_value > 1e-9) throw internal_error("primal-dual gap too large");
}

inline double primal_dual_gap(const TransportPlan& plan, const MassDistribution& mu,
                              const MassDistribution& mv) {
  double dual_value = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) dual_value += mu.mass[i] * plan.source_potential[i];
  for (std::size_t j = 0; j < mv.size(); ++j) dual_value += mv.mass[j] * plan.target_potential[j];
  return plan.cost - dual_value;
}

namespace detail {

/// Successive shortest paths with node potentials on the dense bipartite
/// instance; handles arbitrary non-negative real costs.
inline TransportPlan solve_transport_ssp(const MassDistribution& mu, const MassDistribution& mv,
                                         const DistanceTable& cost) {
  const std::size_t m = mu.size(), n = mv.size();
  TransportPlan plan;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> surplus(mu.mass), deficit(mv.mass);
  std::vector<double> flow(m * n, 0.0);
  std::vector<double> pot(m + n, 0.0);
  std::vector<double> dist(m + n);
  std::vector<std::int32_t> parent(m + n);
  std::vector<char> settled(m + n);

  auto cell = [&](std::size_t i, std::size_t j) -> double& { return flow[i * n + j]; };

  const std::size_t iteration_cap = 40 * (m + n) + 1000;
  std::size_t iterations = 0;
  using Item = std::pair<double, std::uint32_t>;

  while (true) {
    bool any_surplus = false;
    for (std::size_t i = 0; i < m; ++i)
      if (surplus[i] > detail::kMassDust) {
        any_surplus = true;
        break;
      }
    if (!any_surplus) break;
    if (++iterations > iteration_cap) throw internal_error("transport solver exceeded iteration budget");

    // Shortest augmenting path under reduced costs, from every surplus
    // source at once to the nearest sink with remaining demand.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(settled.begin(), settled.end(), 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (std::size_t i = 0; i < m; ++i) {
      if (surplus[i] > detail::kMassDust) {
        dist[i] = 0.0;
        heap.emplace(0.0, static_cast<std::uint32_t>(i));
      }
    }
    std::int32_t found = -1;
    while (!heap.empty()) {
      const auto [d, x] = heap.top();
      heap.pop();
      if (settled[x] || d > dist[x]) continue;
      settled[x] = 1;
      if (x >= m && deficit[x - m] > detail::kMassDust) {
        found = static_cast<std::int32_t>(x);
        break;
      }
      if (x < m) {
        for (std::size_t j = 0; j < n; ++j) {
          const double c = cost.at(x, j);
          if (!std::isfinite(c)) continue;
          double rc = c + pot[x] - pot[m + j];
          if (rc < 0.0) rc = 0.0;  // floating-point drift guard
          const double nd = d + rc;
          if (nd < dist[m + j]) {
            dist[m + j] = nd;
            parent[m + j] = static_cast<std::int32_t>(x);
            heap.emplace(nd, static_cast<std::uint32_t>(m + j));
          }
        }
      } else {
        const std::size_t j = x - m;
        for (std::size_t i = 0; i < m; ++i) {
          if (cell(i, j) <= 0.0) continue;
          const double c = cost.at(i, j);
          double rc = -c + pot[x] - pot[i];
          if (rc < 0.0) rc = 0.0;
          const double nd = d + rc;
          if (nd < dist[i]) {
            dist[i] = nd;
            parent[i] = static_cast<std::int32_t>(x);
            heap.emplace(nd, static_cast<std::uint32_t>(i));
          }
        }
      }
    }
    if (found < 0) throw internal_error("transportation instance is infeasible");

    const double reach = dist[found];
    for (std::size_t v = 0; v < m + n; ++v) pot[v] += std::min(dist[v], reach);

    // Trace the augmenting path and find the bottleneck.
    double delta = deficit[found - m];
    for (std::int32_t v = found; parent[v] >= 0; v = parent[v]) {
      const std::int32_t p = parent[v];
      if (v >= static_cast<std::int32_t>(m)) continue;          // p -> v is a forward arc
      delta = std::min(delta, cell(v, p - m));                  // backward arc consumes flow
    }
    {
      std::int32_t v = found;
      while (parent[v] >= 0) v = parent[v];
      delta = std::min(delta, surplus[v]);
      surplus[v] -= delta;
      if (surplus[v] < detail::kMassDust) surplus[v] = 0.0;
    }
    deficit[found - m] -= delta;
    if (deficit[found - m] < detail::kMassDust) deficit[found - m] = 0.0;
    for (std::int32_t v = found; parent[v] >= 0; v = parent[v]) {
      const std::int32_t p = parent[v];
      if (v >= static_cast<std::int32_t>(m)) {
        cell(p, v - m) += delta;
      } else {
        double& f = cell(v, p - m);
        f -= delta;
        if (f < detail::kMassDust) f = 0.0;
      }
    }
  }

  plan.cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double f = cell(i, j);
      if (f > 0.0) {
        plan.flows.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), f});
        plan.cost += f * cost.at(i, j);
      }
    }
  }
  plan.source_potential.resize(m);
  plan.target_potential.resize(n);
  for (std::size_t i = 0; i < m; ++i) plan.source_potential[i] = -pot[i];
  for (std::size_t j = 0; j < n; ++j) plan.target_potential[j] = pot[m + j];
  return plan;
}

/// Primal-dual solver for instances whose costs are small non-negative
/// integers (hop-distance tables in particular). Work proceeds in rounds:
/// ship as much mass as possible through the zero-reduced-cost subgraph
/// with Dinic-style blocking flows, then tighten the integer potentials by
/// the smallest positive reduced cost. Flows live in a sparse arc arena
/// and each source's admissible sinks are collected lazily once per round,
/// so the dense matrix is only scanned for sources the search reaches.
inline TransportPlan solve_transport_primal_dual(const MassDistribution& mu,
                                                 const MassDistribution& mv,
                                                 const DistanceTable& cost, int cost_cap) {
  const std::size_t m = mu.size(), n = mv.size();
  const std::size_t node_count = m + n;

  std::vector<std::int8_t> ic(m * n);
  for (std::size_t k = 0; k < ic.size(); ++k) ic[k] = static_cast<std::int8_t>(cost.dist[k]);

  std::vector<double> surplus(mu.mass), deficit(mv.mass);
  std::vector<std::int32_t> phi(node_count, 0);
  std::vector<std::int32_t> level(node_count);
  std::vector<std::uint32_t> ptr(node_count);
  std::vector<std::uint32_t> bfs, path_nodes, path_arcs;

  struct Arc {
    std::uint32_t source, sink;
    double flow;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<std::uint32_t>> out_arcs(m), in_arcs(n);
  auto arc_for = [&](std::uint32_t i, std::uint32_t j) -> std::uint32_t {
    for (const std::uint32_t a : out_arcs[i])
      if (arcs[a].sink == j) return a;
    arcs.push_back({i, j, 0.0});
    out_arcs[i].push_back(static_cast<std::uint32_t>(arcs.size() - 1));
    in_arcs[j].push_back(static_cast<std::uint32_t>(arcs.size() - 1));
    return static_cast<std::uint32_t>(arcs.size() - 1);
  };

  // admissible sinks per source, rebuilt lazily per dual round
  std::vector<std::vector<std::uint32_t>> admissible(m);
  std::vector<std::uint32_t> adm_round(m, 0);
  std::uint32_t round = 1;
  auto admissible_row = [&](std::uint32_t i) -> const std::vector<std::uint32_t>& {
    if (adm_round[i] != round) {
      adm_round[i] = round;
      auto& row = admissible[i];
      row.clear();
      const std::int32_t base = phi[i];
      const std::int8_t* costs = ic.data() + static_cast<std::size_t>(i) * n;
      for (std::size_t j = 0; j < n; ++j)
        if (static_cast<std::int32_t>(costs[j]) + base - phi[m + j] == 0)
          row.push_back(static_cast<std::uint32_t>(j));
    }
    return admissible[i];
  };

  std::size_t dual_rounds = 0;
  const std::size_t dual_cap = 64 * static_cast<std::size_t>(cost_cap + 2) + 1024;

  while (true) {
    bool any_surplus = false;
    for (std::size_t i = 0; i < m; ++i)
      if (surplus[i] > kMassDust) {
        any_surplus = true;
        break;
      }
    if (!any_surplus) break;

    // layered BFS over admissible residual arcs, stopping at the first
    // layer that holds a sink with remaining demand
    std::fill(level.begin(), level.end(), -1);
    bfs.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (surplus[i] > kMassDust) {
        level[i] = 0;
        bfs.push_back(static_cast<std::uint32_t>(i));
      }
    }
    std::int32_t sink_level = -1;
    for (std::size_t head = 0; head < bfs.size(); ++head) {
      const std::uint32_t x = bfs[head];
      if (sink_level >= 0 && level[x] >= sink_level) break;
      if (x < m) {
        for (const std::uint32_t j : admissible_row(x)) {
          if (level[m + j] < 0) {
            level[m + j] = level[x] + 1;
            if (deficit[j] > kMassDust && sink_level < 0) sink_level = level[m + j];
            bfs.push_back(static_cast<std::uint32_t>(m + j));
          }
        }
      } else {
        auto& entering = in_arcs[x - m];
        std::size_t keep = 0;
        for (std::size_t a = 0; a < entering.size(); ++a) {
          const Arc& arc = arcs[entering[a]];
          if (arc.flow <= 0.0) continue;  // lazily drop drained arcs
          entering[keep++] = entering[a];
          if (level[arc.source] < 0) {
            level[arc.source] = level[x] + 1;
            bfs.push_back(arc.source);
          }
        }
        entering.resize(keep);
      }
    }

    if (sink_level < 0) {
      // no admissible route left: tighten the potentials
      if (++dual_rounds > dual_cap) throw internal_error("transport dual updates exceeded their budget");
      std::int32_t delta = std::numeric_limits<std::int32_t>::max();
      for (std::size_t i = 0; i < m; ++i) {
        if (level[i] < 0) continue;
        const std::int32_t base = phi[i];
        const std::int8_t* costs = ic.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
          if (level[m + j] < 0)
            delta = std::min(delta, static_cast<std::int32_t>(costs[j]) + base - phi[m + j]);
        }
      }
      if (delta == std::numeric_limits<std::int32_t>::max() || delta <= 0)
        throw internal_error("transportation instance is infeasible");
      for (std::size_t v = 0; v < node_count; ++v)
        if (level[v] >= 0) phi[v] -= delta;
      ++round;
      continue;
    }

    // blocking flow: repeated pointer-guided DFS from each surplus source
    std::fill(ptr.begin(), ptr.end(), 0);
    for (std::size_t s = 0; s < m; ++s) {
      if (level[s] != 0) continue;
      while (surplus[s] > kMassDust) {
        path_nodes.clear();
        path_arcs.clear();
        path_nodes.push_back(static_cast<std::uint32_t>(s));
        bool augmented = false;
        while (!path_nodes.empty()) {
          const std::uint32_t x = path_nodes.back();
          if (x >= m && deficit[x - m] > kMassDust) {
            double delta = std::min(surplus[s], deficit[x - m]);
            for (std::size_t p = 1; p < path_arcs.size(); p += 2)
              delta = std::min(delta, arcs[path_arcs[p]].flow);  // backward arcs
            for (std::size_t p = 0; p < path_nodes.size() - 1; p += 2) {
              const std::uint32_t a =
                  arc_for(path_nodes[p], path_nodes[p + 1] - static_cast<std::uint32_t>(m));
              arcs[a].flow += delta;
            }
            for (std::size_t p = 1; p < path_arcs.size(); p += 2) {
              double& f = arcs[path_arcs[p]].flow;
              f -= delta;
              if (f < kMassDust) f = 0.0;
            }
            surplus[s] -= delta;
            if (surplus[s] < kMassDust) surplus[s] = 0.0;
            deficit[x - m] -= delta;
            if (deficit[x - m] < kMassDust) deficit[x - m] = 0.0;
            augmented = true;
            break;
          }
          bool advanced = false;
          if (x < m) {
            const auto& row = admissible_row(x);
            while (ptr[x] < row.size()) {
              const std::uint32_t j = row[ptr[x]];
              if (level[m + j] == level[x] + 1) {
                path_nodes.push_back(static_cast<std::uint32_t>(m + j));
                path_arcs.push_back(std::numeric_limits<std::uint32_t>::max());
                advanced = true;
                break;
              }
              ++ptr[x];
            }
          } else {
            const auto& entering = in_arcs[x - m];
            while (ptr[x] < entering.size()) {
              const Arc& arc = arcs[entering[ptr[x]]];
              if (arc.flow > 0.0 && level[arc.source] == level[x] + 1) {
                path_nodes.push_back(arc.source);
                path_arcs.push_back(entering[ptr[x]]);
                advanced = true;
                break;
              }
              ++ptr[x];
            }
          }
          if (!advanced) {
            path_nodes.pop_back();
            if (!path_arcs.empty()) path_arcs.pop_back();
            if (!path_nodes.empty()) ++ptr[path_nodes.back()];
          }
        }
        if (!augmented) break;
      }
    }
  }

  TransportPlan plan;
  plan.cost = 0.0;
  std::vector<std::uint32_t> live;
  live.reserve(arcs.size());
  for (std::uint32_t a = 0; a < arcs.size(); ++a)
    if (arcs[a].flow > 0.0) live.push_back(a);
  std::sort(live.begin(), live.end(), [&](std::uint32_t a, std::uint32_t b) {
    return arcs[a].source != arcs[b].source ? arcs[a].source < arcs[b].source
                                            : arcs[a].sink < arcs[b].sink;
  });
  for (const std::uint32_t a : live) {
    plan.flows.push_back({arcs[a].source, arcs[a].sink, arcs[a].flow});
    plan.cost += arcs[a].flow * cost.at(arcs[a].source, arcs[a].sink);
  }
  plan.source_potential.resize(m);
  plan.target_potential.resize(n);
  for (std::size_t i = 0; i < m; ++i) plan.source_potential[i] = -static_cast<double>(phi[i]);
  for (std::size_t j = 0; j < n; ++j) plan.target_potential[j] = static_cast<double>(phi[m + j]);
  return plan;
}

/// Smallest denominator q <= max_den with |x - p/q| <= 1e-12, via
/// continued-fraction convergents. Masses in this codebase are small
/// rationals (alpha and (1 - alpha) / degree shares, integer grids in
/// tests), so this almost always succeeds with a tiny q.
inline std::optional<std::int64_t> small_denominator(double x, std::int64_t max_den) {
  if (!(x > 0.0) || !std::isfinite(x)) return std::nullopt;
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  double rem = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= 1e-12) return k;
    if (rem <= 1e-15) return std::nullopt;
    const double inv = 1.0 / rem;
    const double a_floor = std::floor(inv);
    if (a_floor > static_cast<double>(max_den)) return std::nullopt;
    const auto a = static_cast<std::int64_t>(a_floor);
    rem = inv - a_floor;
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_den) return std::nullopt;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return std::nullopt;
}

/// Rescales both mass vectors onto one integer grid, exactly. Returns
/// nothing when the masses do not look rational with small denominators.
inline std::optional<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>>
integer_masses(const MassDistribution& mu, const MassDistribution& mv) {
  std::int64_t scale = 1;
  const auto fold = [&](double x) {
    const auto q = small_denominator(x, 1'000'000);
    if (!q) return false;
    const std::int64_t g = std::gcd(scale, *q);
    if (scale / g > 10'000'000 / *q) return false;  // lcm would overflow the cap
    scale = scale / g * *q;
    return true;
  };
  for (const double x : mu.mass)
    if (!fold(x)) return std::nullopt;
  for (const double x : mv.mass)
    if (!fold(x)) return std::nullopt;

  std::vector<std::int64_t> a(mu.size()), b(mv.size());
  std::int64_t sum_a = 0, sum_b = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double scaled = mu.mass[i] * static_cast<double>(scale);
    a[i] = std::llround(scaled);
    if (a[i] < 1 || std::abs(scaled - static_cast<double>(a[i])) > 1e-6) return std::nullopt;
    sum_a += a[i];
  }
  for (std::size_t j = 0; j < mv.size(); ++j) {
    const double scaled = mv.mass[j] * static_cast<double>(scale);
    b[j] = std::llround(scaled);
    if (b[j] < 1 || std::abs(scaled - static_cast<double>(b[j])) > 1e-6) return std::nullopt;
    sum_b += b[j];
  }
  if (sum_a != sum_b) return std::nullopt;
  return std::pair{std::move(a), std::move(b)};
}

/// Primal transportation simplex: north-west-corner start, Bland's rule for
/// entering and leaving cells, exhaustive pricing over every cell. Flows
/// are exact integers, so Bland's anti-cycling theorem applies verbatim and
/// termination is guaranteed.
inline double transport_simplex_integer(const std::vector<std::int64_t>& a,
                                        const std::vector<std::int64_t>& b,
                                        const DistanceTable& cost, double mass_scale) {
  const std::size_t m = a.size(), n = b.size();
  struct Cell {
    std::uint32_t i, j;
    std::int64_t flow;
  };
  std::vector<Cell> basis;
  basis.reserve(m + n - 1);
  {
    std::vector<std::int64_t> s(a), d(b);
    std::size_t i = 0, j = 0;
    while (true) {
      const std::int64_t f = std::min(s[i], d[j]);
      basis.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), f});
      s[i] -= f;
      d[j] -= f;
      if (i == m - 1 && j == n - 1) break;
      if (s[i] == 0 && i < m - 1)
        ++i;
      else
        ++j;
    }
  }

  double cmax = 0.0;
  for (const double c : cost.dist) cmax = std::max(cmax, std::abs(c));
  const double eps = 1e-11 * (1.0 + cmax);

  std::vector<double> u(m), v(n);
  std::vector<char> u_set(m), v_set(n);
  std::vector<std::int32_t> parent(m + n), parent_cell(m + n);

  const std::size_t pivot_cap = 200'000;
  for (std::size_t pivot = 0;; ++pivot) {
    if (pivot > pivot_cap) throw internal_error("transportation simplex exceeded its pivot budget");

    // duals from the basis tree: u_0 = 0, u_i + v_j = c_ij on basic cells
    std::fill(u_set.begin(), u_set.end(), 0);
    std::fill(v_set.begin(), v_set.end(), 0);
    u[0] = 0.0;
    u_set[0] = 1;
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& c : basis) {
        if (u_set[c.i] && !v_set[c.j]) {
          v[c.j] = cost.at(c.i, c.j) - u[c.i];
          v_set[c.j] = 1;
          progress = true;
        } else if (!u_set[c.i] && v_set[c.j]) {
          u[c.i] = cost.at(c.i, c.j) - v[c.j];
          u_set[c.i] = 1;
          progress = true;
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i)
      if (!u_set[i]) throw internal_error("transportation basis is not spanning");
    for (std::size_t j = 0; j < n; ++j)
      if (!v_set[j]) throw internal_error("transportation basis is not spanning");

    // Bland entering: lowest-index cell with a negative reduced cost
    std::int32_t enter_i = -1, enter_j = -1;
    for (std::size_t i = 0; i < m && enter_i < 0; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (cost.at(i, j) - u[i] - v[j] < -eps) {
          enter_i = static_cast<std::int32_t>(i);
          enter_j = static_cast<std::int32_t>(j);
          break;
        }
      }
    }
    if (enter_i < 0) {
      double total = 0.0;
      for (const auto& c : basis)
        total += static_cast<double>(c.flow) / mass_scale * cost.at(c.i, c.j);
      return total;
    }

    // the unique tree path from the entering column back to its row
    std::fill(parent.begin(), parent.end(), -1);
    std::vector<std::int32_t> queue{static_cast<std::int32_t>(m) + enter_j};
    parent[m + enter_j] = static_cast<std::int32_t>(m) + enter_j;  // root marker
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::int32_t x = queue[head];
      for (std::size_t ci = 0; ci < basis.size(); ++ci) {
        const auto& c = basis[ci];
        const std::int32_t row = static_cast<std::int32_t>(c.i);
        const std::int32_t col = static_cast<std::int32_t>(m + c.j);
        std::int32_t next = -1;
        if (row == x && parent[col] < 0) next = col;
        if (col == x && parent[row] < 0) next = row;
        if (next >= 0) {
          parent[next] = x;
          parent_cell[next] = static_cast<std::int32_t>(ci);
          queue.push_back(next);
        }
      }
    }
    if (parent[enter_i] < 0) throw internal_error("entering cell closes no cycle");

    // cells along the path, starting adjacent to the entering row; signs
    // alternate -,+,-,... with the entering cell itself taken as +
    std::vector<std::int32_t> path;
    for (std::int32_t x = enter_i; parent[x] != x; x = parent[x]) path.push_back(parent_cell[x]);
    std::int64_t theta = std::numeric_limits<std::int64_t>::max();
    std::int32_t leave_pos = -1;
    for (std::size_t p = 0; p < path.size(); p += 2) {  // the minus cells
      const auto& c = basis[path[p]];
      const bool tighter =
          c.flow < theta ||
          (c.flow == theta && leave_pos >= 0 &&
           (c.i < basis[path[leave_pos]].i ||
            (c.i == basis[path[leave_pos]].i && c.j < basis[path[leave_pos]].j)));
      if (tighter) {
        theta = c.flow;
        leave_pos = static_cast<std::int32_t>(p);
      }
    }
    if (leave_pos < 0) throw internal_error("degenerate cycle without minus cells");

    for (std::size_t p = 0; p < path.size(); ++p) {
      basis[path[p]].flow += (p % 2 == 0) ? -theta : theta;
    }
    const std::int32_t leaving_cell = path[leave_pos];
    basis[leaving_cell] = {static_cast<std::uint32_t>(enter_i), static_cast<std::uint32_t>(enter_j),
                           theta};
  }
}

}  // namespace detail

/// Exact earth mover distance between two discrete measures on the dense
/// bipartite instance. Integer-cost tables (hop distances in particular)
/// are solved by a primal-dual scheme whose dual work is bounded by the
/// cost range; everything else goes through successive shortest paths with
/// node potentials. Either way the optimum is exact and the returned plan
/// carries dual potentials that pass verify_transport_plan.
inline TransportPlan emd(const MassDistribution& mu, const MassDistribution& mv,
                         const DistanceTable& cost) {
  detail::check_transport_inputs(mu, mv, cost);

  TransportPlan plan;
  if (mu.size() == 1 && mv.size() == 1 && mu.support[0] == mv.support[0]) {
    // both measures are the same single point
    plan.flows.push_back({0, 0, mu.mass[0]});
    plan.cost = 0.0;
    plan.source_potential.assign(1, 0.0);
    plan.target_potential.assign(1, 0.0);
    return plan;
  }

  constexpr int kIntCostCap = 64;
  bool small_integer_costs = true;
  for (const double c : cost.dist) {
    if (!(c >= 0.0 && c <= kIntCostCap && c == std::floor(c))) {
      small_integer_costs = false;
      break;
    }
  }
  plan = small_integer_costs ? detail::solve_transport_primal_dual(mu, mv, cost, kIntCostCap)
                             : detail::solve_transport_ssp(mu, mv, cost);
  verify_transport_plan(plan, mu, mv, cost);
  return plan;
}

/// Exhaustive reference solver, independent of emd(). Masses are rescaled
/// onto an exact integer grid and solved by a north-west-corner
/// transportation simplex with exhaustive pricing and Bland's rule; inputs
/// that resist rationalization fall back to a depth-first enumeration of
/// greedy saturation orders (every vertex of the transportation polytope
/// arises from one) with an admissible two-pass dual bound for pruning.
/// Intended for supports of at most 7 points each.
inline double emd_bruteforce(const MassDistribution& mu, const MassDistribution& mv,
                             const DistanceTable& cost) {
  detail::check_transport_inputs(mu, mv, cost);
  const std::size_t m = mu.size(), n = mv.size();
  if (m > 7 || n > 7) throw domain_error("emd_bruteforce supports at most 7x7 instances");

  bool all_finite = true;
  for (const double c : cost.dist) all_finite = all_finite && std::isfinite(c);
  if (all_finite) {
    if (const auto grid = detail::integer_masses(mu, mv)) {
      double scale = 0.0;
      for (const std::int64_t x : grid->first) scale += static_cast<double>(x);
      scale /= mu.total();
      return detail::transport_simplex_integer(grid->first, grid->second, cost, scale);
    }
  }

  std::vector<double> surplus(mu.mass), deficit(mv.mass);

  // Cells in increasing cost order; trying cheap cells first tightens the
  // incumbent quickly.
  struct Cell {
    double c;
    std::uint32_t i, j;
  };
  std::vector<Cell> cells;
  cells.reserve(m * n);
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (std::isfinite(cost.at(i, j))) cells.push_back({cost.at(i, j), i, j});
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.c != b.c) return a.c < b.c;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  // Greedy incumbent.
  double best;
  {
    std::vector<double> s(surplus), d(deficit);
    double acc = 0.0;
    for (const auto& cl : cells) {
      if (s[cl.i] <= detail::kMassDust || d[cl.j] <= detail::kMassDust) continue;
      const double delta = std::min(s[cl.i], d[cl.j]);
      acc += delta * cl.c;
      s[cl.i] -= delta;
      d[cl.j] -= delta;
    }
    for (const double rest : s)
      if (rest > 1e-9) throw internal_error("greedy saturation left unshipped mass");
    best = acc;
  }

  // Two-pass dual bound: row minima as u, then column minima of the reduced
  // matrix as v. (u, v) is dual feasible for the active subproblem, so
  // sum(s u) + sum(d v) never exceeds the true completion cost. Computed in
  // both orders, keeping the larger.
  std::vector<double> lb_u(m), lb_v(n);
  auto lower_bound = [&](const std::vector<double>& s, const std::vector<double>& d) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    double bound = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      double lb = 0.0;
      if (pass == 0) {
        for (std::size_t i = 0; i < m; ++i) {
          if (s[i] <= detail::kMassDust) continue;
          double u = kInf;
          for (std::size_t j = 0; j < n; ++j)
            if (d[j] > detail::kMassDust) u = std::min(u, cost.at(i, j));
          lb_u[i] = std::isfinite(u) ? u : 0.0;
          lb += s[i] * lb_u[i];
        }
        for (std::size_t j = 0; j < n; ++j) {
          if (d[j] <= detail::kMassDust) continue;
          double v = kInf;
          for (std::size_t i = 0; i < m; ++i)
            if (s[i] > detail::kMassDust) v = std::min(v, cost.at(i, j) - lb_u[i]);
          if (std::isfinite(v) && v > 0.0) lb += d[j] * v;
        }
      } else {
        for (std::size_t j = 0; j < n; ++j) {
          if (d[j] <= detail::kMassDust) continue;
          double v = kInf;
          for (std::size_t i = 0; i < m; ++i)
            if (s[i] > detail::kMassDust) v = std::min(v, cost.at(i, j));
          lb_v[j] = std::isfinite(v) ? v : 0.0;
          lb += d[j] * lb_v[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
          if (s[i] <= detail::kMassDust) continue;
          double u = kInf;
          for (std::size_t j = 0; j < n; ++j)
            if (d[j] > detail::kMassDust) u = std::min(u, cost.at(i, j) - lb_v[j]);
          if (std::isfinite(u) && u > 0.0) lb += s[i] * u;
        }
      }
      bound = std::max(bound, lb);
    }
    return bound;
  };

  std::size_t nodes = 0;
  const std::size_t node_cap = 50'000'000;

  // Saturation moves commute, so distinct orderings of one move set reach
  // the same remaining-mass state; remembering the cheapest way into each
  // state collapses the search from orderings to subsets.
  std::unordered_map<std::string, double> visited;
  const std::size_t visited_cap = 1'000'000;
  auto state_key = [&]() {
    std::string key;
    key.resize((surplus.size() + deficit.size()) * sizeof(double));
    std::memcpy(key.data(), surplus.data(), surplus.size() * sizeof(double));
    std::memcpy(key.data() + surplus.size() * sizeof(double), deficit.data(),
                deficit.size() * sizeof(double));
    return key;
  };

  auto rec = [&](auto&& self, double acc) -> void {
    if (++nodes > node_cap) throw internal_error("emd_bruteforce search blew past its node budget");
    bool done = true;
    for (const double s : surplus)
      if (s > detail::kMassDust) {
        done = false;
        break;
      }
    if (done) {
      best = std::min(best, acc);
      return;
    }
    if (acc + lower_bound(surplus, deficit) >= best - 1e-12) return;
    if (visited.size() < visited_cap) {
      auto [it, inserted] = visited.try_emplace(state_key(), acc);
      if (!inserted) {
        if (it->second <= acc + 1e-15) return;  // reached cheaper before
        it->second = acc;
      }
    }
    for (const auto& cl : cells) {
      if (surplus[cl.i] <= detail::kMassDust || deficit[cl.j] <= detail::kMassDust) continue;
      const double delta = std::min(surplus[cl.i], deficit[cl.j]);
      surplus[cl.i] -= delta;
      deficit[cl.j] -= delta;
      self(self, acc + delta * cl.c);
      surplus[cl.i] += delta;
      deficit[cl.j] += delta;
    }
  };
  rec(rec, 0.0);
  return best;
}

}  // namespace ricci
