#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ricci/error.hpp"
#include "ricci/histogram.hpp"
#include "ricci/parallel.hpp"

namespace ricci {

/// Provenance of the feature vectors behind a Gram matrix.
struct FeatureDescriptor {
  int dims = 2;
  std::size_t bins = 20;
  double alpha = 0.5;
};

/// Symmetric kernel matrix over a graph collection: unit diagonal, entries
/// in (0, 1], positive semidefinite up to numerical tolerance.
struct GramMatrix {
  std::size_t size = 0;
  std::vector<double> values;  // row-major size x size
  double sigma = 0.0;
  FeatureDescriptor features;

  double at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * size + j]; }
};

inline double l2_distance(const Histogram& a, const Histogram& b) {
  if (!a.same_shape(b)) throw domain_error("histogram shapes differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    const double d = a.weights[i] - b.weights[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// Gaussian RBF kernel on histogram features:
/// k = exp(-||w1 - w2||^2 / (2 sigma^2)), always in (0, 1].
inline double rbf_kernel(const Histogram& a, const Histogram& b, double sigma) {
  if (!a.same_shape(b)) throw domain_error("histogram shapes differ");
  if (!(sigma > 0.0)) throw domain_error("sigma must be positive");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    const double d = a.weights[i] - b.weights[i];
    sq += d * d;
  }
  return std::exp(-sq / (2.0 * sigma * sigma));
}

/// Median heuristic for the kernel bandwidth: the median pairwise l2
/// distance over all distinct pairs, with mean-of-middle-two for even
/// counts and a fallback of 1.0 when every histogram is identical.
inline double median_sigma(std::span<const Histogram> hs) {
  if (hs.size() < 2) throw domain_error("median_sigma needs at least two histograms");
  std::vector<double> dists;
  dists.reserve(hs.size() * (hs.size() - 1) / 2);
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) dists.push_back(l2_distance(hs[i], hs[j]));
  std::sort(dists.begin(), dists.end());
  const std::size_t k = dists.size();
  const double median = k % 2 == 1 ? dists[k / 2] : 0.5 * (dists[k / 2 - 1] + dists[k / 2]);
  return median > 0.0 ? median : 1.0;
}

/// Assembles the Gram matrix; only the upper triangle is computed, the
/// rest is mirrored. sigma = nullopt resolves through median_sigma.
inline GramMatrix gram_matrix(std::span<const Histogram> hs, std::optional<double> sigma,
                              FeatureDescriptor features = {}, unsigned workers = 0) {
  if (hs.empty()) throw domain_error("empty histogram collection");
  for (const auto& h : hs)
    if (!h.same_shape(hs.front())) throw domain_error("histogram shapes differ across the collection");

  GramMatrix gm;
  gm.size = hs.size();
  gm.features = features;
  gm.sigma = sigma ? *sigma : (hs.size() >= 2 ? median_sigma(hs) : 1.0);
  if (!(gm.sigma > 0.0)) throw domain_error("sigma must be positive");
  gm.values.assign(gm.size * gm.size, 1.0);

  const std::size_t n = gm.size;
  parallel_for(n, workers, [&](std::size_t i) {
    gm.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = rbf_kernel(hs[i], hs[j], gm.sigma);
      gm.at(i, j) = k;
      gm.at(j, i) = k;
    }
  });
  return gm;
}

/// PSD diagnostic: smallest eigenvalue of the (symmetric) Gram matrix.
inline double min_eigenvalue(const GramMatrix& gm) {
  Eigen::MatrixXd m(gm.size, gm.size);
  for (std::size_t i = 0; i < gm.size; ++i)
    for (std::size_t j = 0; j < gm.size; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gm.at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Gram CSV: first row the graph names, then one row per graph holding its
/// name and the kernel values at 12 significant digits.
inline void write_gram_csv(std::ostream& out, const GramMatrix& gm,
                           std::span<const std::string> names) {
  if (names.size() != gm.size) throw domain_error("name count does not match Gram size");
  for (std::size_t j = 0; j < names.size(); ++j) out << (j == 0 ? "" : ",") << names[j];
  out << "\n";
  char buf[40];
  for (std::size_t i = 0; i < gm.size; ++i) {
    out << names[i];
    for (std::size_t j = 0; j < gm.size; ++j) {
      std::snprintf(buf, sizeof(buf), ",%.12g", gm.at(i, j));
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace ricci
