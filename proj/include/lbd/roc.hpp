#pragma once

// ROC curves and the rank-statistic AUC (ties count one half).

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lbd/common.hpp"

namespace lbd {

struct RocPoint {
  double fpr;
  double tpr;
};

struct RocCurve {
  std::string metric;
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Probability that a random positive outranks a random negative; higher
// score means more likely positive.
inline double auc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw std::invalid_argument("scores and labels differ in length");
  const std::size_t n = scores.size();
  std::size_t n_pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
  std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("AUC needs both positive and negative labels");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return scores[x] < scores[y]; });
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    // Ranks i+1 .. j+1 share their average.
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (positive[order[t]]) rank_sum += avg_rank;
    }
    i = j + 1;
  }
  double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

inline RocCurve roc(std::span<const double> scores, std::span<const bool> positive, std::string metric = {}) {
  RocCurve curve;
  curve.metric = std::move(metric);
  curve.auc = auc(scores, positive);
  const std::size_t n = scores.size();
  double n_pos = static_cast<double>(std::count(positive.begin(), positive.end(), true));
  double n_neg = static_cast<double>(n) - n_pos;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return scores[x] > scores[y]; });
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      (positive[order[j]] ? tp : fp) += 1;
      ++j;
    }
    curve.points.push_back({static_cast<double>(fp) / n_neg, static_cast<double>(tp) / n_pos});
    i = j;
  }
  return curve;
}

// Trapezoid area under the curve's points.
inline double curve_area(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i - 1];
    const auto& q = curve.points[i];
    area += (q.fpr - p.fpr) * (p.tpr + q.tpr) / 2.0;
  }
  return area;
}

}  // namespace lbd
