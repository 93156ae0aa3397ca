#pragma once

#include <cstdint>
#include <cmath>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "ricci/curvature.hpp"
#include "ricci/error.hpp"
#include "ricci/graph.hpp"

namespace ricci {

/// Normalized curvature distribution over [-1, 1]: the feature vector a
/// graph is compared by. 1D histograms hold `bins` weights, 2D histograms
/// hold bins x bins weights in row-major order and are symmetric.
struct Histogram {
  int dims = 1;
  std::size_t bins = 0;
  std::vector<double> weights;
  std::size_t total_samples = 0;
  std::size_t clamped = 0;  // values outside [-1, 1], folded into end bins

  static constexpr double range_min = -1.0;
  static constexpr double range_max = 1.0;

  bool same_shape(const Histogram& other) const {
    return dims == other.dims && bins == other.bins;
  }
  double weight(std::size_t i) const { return weights[i]; }
  double weight(std::size_t i, std::size_t j) const { return weights[i * bins + j]; }
};

namespace detail {

/// Bin of kappa under floor((kappa + 1) / 2 * B). The tiny upward nudge
/// keeps values that sit on a bin boundary mathematically (but a hair
/// below it in floating point, or rounded through a 12-digit CSV trip) in
/// the boundary's bin. Real curvature values are rationals that are never
/// closer to a boundary than ~1e-7 without being exactly on it, so the
/// nudge can't move an interior value.
inline std::size_t kappa_bin(double kappa, std::size_t bins, std::size_t& clamped) {
  const double scaled = (kappa + 1.0) / 2.0 * static_cast<double>(bins) + 1e-9;
  if (scaled < 0.0) {
    if (kappa < -1.0) ++clamped;
    return 0;
  }
  const auto bin = static_cast<std::size_t>(scaled);
  if (bin >= bins) {
    if (kappa > 1.0) ++clamped;
    return bins - 1;
  }
  return bin;
}

}  // namespace detail

/// The curvature distribution of the computed edges as a normalized B-bin
/// histogram.
inline Histogram histogram_1d(const CurvatureMap& map, std::size_t bins) {
  if (bins < 1) throw domain_error("bins must be >= 1");
  if (map.entries.empty()) throw domain_error("curvature map is empty");
  Histogram h;
  h.dims = 1;
  h.bins = bins;
  std::vector<std::size_t> counts(bins, 0);
  for (const auto& e : map.entries) ++counts[detail::kappa_bin(e.kappa, bins, h.clamped)];
  h.total_samples = map.entries.size();
  h.weights.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    h.weights[i] = static_cast<double>(counts[i]) / static_cast<double>(h.total_samples);
  return h;
}

/// The pair distribution over neighboring edges (edges sharing exactly one
/// endpoint): for every unordered pair both (k, k') and (k', k) are
/// inserted, which makes the histogram symmetric by construction. Needs
/// full coverage; pair statistics are meaningless on a sampled map.
inline Histogram histogram_2d(const Graph& g, const CurvatureMap& map, std::size_t bins) {
  if (bins < 1) throw domain_error("bins must be >= 1");
  if (map.graph_edge_count != g.edge_count() || !map.full_coverage())
    throw domain_error("2D histograms need full edge coverage; sampled maps support 1D only");

  // kappa per edge index, aligned with g.edges() order.
  std::vector<double> kappa(map.entries.size());
  for (std::size_t i = 0; i < map.entries.size(); ++i) {
    const auto& g_edge = g.edge(i);
    const auto& m_edge = map.entries[i];
    if (g_edge.u != m_edge.u || g_edge.v != m_edge.v)
      throw domain_error("curvature map does not match the graph's edge list");
    kappa[i] = m_edge.kappa;
  }

  // Incident-edge index lists per node. Two distinct edges of a simple
  // graph share at most one endpoint, so pairs within one node's list are
  // exactly the neighboring pairs, each found at its shared endpoint.
  std::vector<std::vector<std::uint32_t>> incident(g.node_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    incident[g.edge(i).u].push_back(static_cast<std::uint32_t>(i));
    incident[g.edge(i).v].push_back(static_cast<std::uint32_t>(i));
  }

  Histogram h;
  h.dims = 2;
  h.bins = bins;
  std::vector<std::size_t> counts(bins * bins, 0);
  std::size_t insertions = 0;
  std::vector<std::size_t> edge_bin(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) edge_bin[i] = detail::kappa_bin(kappa[i], bins, h.clamped);
  // clamping is per edge, counted once above, not per pair
  for (const auto& list : incident) {
    for (std::size_t a = 0; a + 1 < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        const std::size_t ba = edge_bin[list[a]];
        const std::size_t bb = edge_bin[list[b]];
        ++counts[ba * bins + bb];
        ++counts[bb * bins + ba];
        insertions += 2;
      }
    }
  }
  if (insertions == 0) throw domain_error("graph has no pairs of neighboring edges");
  h.total_samples = insertions;
  h.weights.resize(bins * bins);
  for (std::size_t i = 0; i < h.weights.size(); ++i)
    h.weights[i] = static_cast<double>(counts[i]) / static_cast<double>(insertions);
  return h;
}

inline nlohmann::json histogram_json(const Histogram& h) {
  return nlohmann::json{{"dims", h.dims},
                        {"bins", h.bins},
                        {"range", {Histogram::range_min, Histogram::range_max}},
                        {"weights", h.weights},
                        {"total_samples", h.total_samples},
                        {"clamped", h.clamped}};
}

inline void write_histogram_json(std::ostream& out, const Histogram& h) {
  out << histogram_json(h).dump(2) << "\n";
}

inline Histogram histogram_from_json(const nlohmann::json& j) {
  Histogram h;
  h.dims = j.at("dims").get<int>();
  h.bins = j.at("bins").get<std::size_t>();
  h.weights = j.at("weights").get<std::vector<double>>();
  h.total_samples = j.at("total_samples").get<std::size_t>();
  h.clamped = j.at("clamped").get<std::size_t>();
  const std::size_t expected = h.dims == 2 ? h.bins * h.bins : h.bins;
  if (h.weights.size() != expected) throw parse_error("histogram weights length mismatch");
  return h;
}

/// Gnuplot-style matrix dump of a 2D histogram: one row per line,
/// space-separated weights.
inline void write_histogram_matrix(std::ostream& out, const Histogram& h) {
  if (h.dims != 2) throw domain_error("matrix dump is for 2D histograms");
  char buf[32];
  for (std::size_t i = 0; i < h.bins; ++i) {
    for (std::size_t j = 0; j < h.bins; ++j) {
      std::snprintf(buf, sizeof(buf), "%.12g", h.weight(i, j));
      out << (j == 0 ? "" : " ") << buf;
    }
    out << "\n";
  }
}

}  // namespace ricci
