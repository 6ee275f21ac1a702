#include "skilldiag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skilldiag/error.hpp"

namespace skilldiag {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&values](std::size_t a, std::size_t b) {
                     return values[a] < values[b];
                   });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j share the same value; assign the midpoint rank.
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double compute_auc(const std::vector<std::pair<double, bool>>& scored) {
  std::size_t positives = 0;
  for (const auto& [score, is_match] : scored) {
    if (is_match) ++positives;
  }
  const std::size_t negatives = scored.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw MetricError(
        msg("compute_auc: needs both classes, got ", positives,
            " positives and ", negatives, " negatives"));
  }
  std::vector<double> scores;
  scores.reserve(scored.size());
  for (const auto& [score, is_match] : scored) scores.push_back(score);
  const std::vector<double> ranks = average_ranks(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].second) rank_sum += ranks[i];
  }
  const double p = static_cast<double>(positives);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

std::pair<double, double> compute_hr_ndcg(std::size_t rank, std::size_t k) {
  if (rank == 0) throw ContractError("compute_hr_ndcg: ranks are 1-based");
  if (k == 0) throw ContractError("compute_hr_ndcg: k must be >= 1");
  if (rank > k) return {0.0, 0.0};
  const double ndcg = 1.0 / std::log2(static_cast<double>(rank) + 1.0);
  return {1.0, ndcg};
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw ContractError("spearman: input lengths differ");
  }
  if (a.size() < 2) {
    throw MetricError("spearman: needs at least two observations");
  }
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += ra[i];
    mean_b += rb[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - mean_a;
    const double db = rb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw MetricError("spearman: an input is constant");
  }
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace skilldiag
