#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "ricci/error.hpp"
#include "ricci/kernel.hpp"
#include "ricci/random.hpp"

namespace ricci {

/// Cross-validation outcome; per_fold_accuracy holds one entry per fold and
/// mean_accuracy their arithmetic mean.
struct CvReport {
  std::size_t folds = 0;
  std::vector<double> per_fold_accuracy;
  double mean_accuracy = 0.0;
  std::uint64_t seed = 0;
  std::size_t k_neighbors = 0;
};

/// Distance induced by the kernel's feature-space embedding:
/// sqrt(k(i,i) + k(j,j) - 2 k(i,j)). With a unit diagonal this is
/// sqrt(2 - 2 k(i,j)).
inline double kernel_distance(const GramMatrix& gm, std::size_t i, std::size_t j) {
  if (i >= gm.size || j >= gm.size) throw domain_error("index out of range");
  return std::sqrt(std::max(0.0, gm.at(i, i) + gm.at(j, j) - 2.0 * gm.at(i, j)));
}

/// Majority vote over the k nearest training points. Neighbor selection
/// breaks distance ties by smaller training index; vote ties fall back to
/// smaller summed distance, then smaller label value.
inline std::vector<int> knn_predict(const GramMatrix& gm, std::span<const int> labels,
                                    std::span<const std::size_t> train_idx,
                                    std::span<const std::size_t> test_idx, std::size_t k) {
  if (labels.size() != gm.size) throw domain_error("label count does not match Gram size");
  if (train_idx.empty()) throw domain_error("empty training set");
  if (k == 0) throw domain_error("k must be >= 1");
  if (k > train_idx.size()) throw domain_error("k exceeds training set size");
  for (const std::size_t t : test_idx)
    for (const std::size_t s : train_idx)
      if (t == s) throw domain_error("train and test sets overlap");

  std::vector<int> predictions;
  predictions.reserve(test_idx.size());
  std::vector<std::pair<double, std::size_t>> order(train_idx.size());
  for (const std::size_t t : test_idx) {
    for (std::size_t a = 0; a < train_idx.size(); ++a)
      order[a] = {kernel_distance(gm, t, train_idx[a]), train_idx[a]};
    std::sort(order.begin(), order.end());
    struct Vote {
      std::size_t count = 0;
      double dist_sum = 0.0;
    };
    std::map<int, Vote> votes;
    for (std::size_t a = 0; a < k; ++a) {
      auto& v = votes[labels[order[a].second]];
      ++v.count;
      v.dist_sum += order[a].first;
    }
    int winner = votes.begin()->first;
    Vote winning = votes.begin()->second;
    for (const auto& [label, v] : votes) {
      const bool better = v.count > winning.count ||
                          (v.count == winning.count && v.dist_sum < winning.dist_sum) ||
                          (v.count == winning.count && v.dist_sum == winning.dist_sum && label < winner);
      if (better) {
        winner = label;
        winning = v;
      }
    }
    predictions.push_back(winner);
  }
  return predictions;
}

/// Stratified k-fold cross-validation: indices of each class are shuffled
/// with the seeded generator and dealt round-robin over the folds, so every
/// fold sees every class. Deterministic per seed.
inline CvReport cross_validate(const GramMatrix& gm, std::span<const int> labels, std::size_t folds,
                               std::size_t k, std::uint64_t seed) {
  if (labels.size() != gm.size) throw domain_error("label count does not match Gram size");
  if (folds < 2) throw domain_error("folds must be >= 2");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  if (by_class.size() < 2) throw domain_error("classification needs at least 2 distinct labels");
  for (const auto& [label, members] : by_class)
    if (members.size() < folds)
      throw domain_error("class " + std::to_string(label) + " has fewer members than folds");

  Rng rng(seed, rng_stream::cross_validation);
  std::vector<std::size_t> fold_of(labels.size());
  for (auto& [label, members] : by_class) {
    for (std::size_t i = members.size(); i > 1; --i)
      std::swap(members[i - 1], members[rng.below(i)]);
    for (std::size_t i = 0; i < members.size(); ++i) fold_of[members[i]] = i % folds;
  }

  CvReport report;
  report.folds = folds;
  report.seed = seed;
  report.k_neighbors = k;
  report.per_fold_accuracy.resize(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < labels.size(); ++i)
      (fold_of[i] == f ? test : train).push_back(i);
    const auto predicted = knn_predict(gm, labels, train, test, std::min(k, train.size()));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
      if (predicted[i] == labels[test[i]]) ++correct;
    report.per_fold_accuracy[f] =
        test.empty() ? 1.0 : static_cast<double>(correct) / static_cast<double>(test.size());
  }
  double sum = 0.0;
  for (const double a : report.per_fold_accuracy) sum += a;
  report.mean_accuracy = sum / static_cast<double>(folds);
  return report;
}

inline nlohmann::json cv_report_json(const CvReport& r) {
  return nlohmann::json{{"folds", r.folds},
                        {"k", r.k_neighbors},
                        {"seed", r.seed},
                        {"per_fold_accuracy", r.per_fold_accuracy},
                        {"mean_accuracy", r.mean_accuracy}};
}

}  // namespace ricci
