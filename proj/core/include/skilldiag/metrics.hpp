#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace skilldiag {

/// Mann-Whitney AUC: probability that a random positive outranks a random
/// negative, ties counting one half. Throws MetricError when either class
/// is empty.
double compute_auc(const std::vector<std::pair<double, bool>>& scored);

/// Hit ratio and NDCG for a list with a single relevant item at `rank`
/// (1-based): hr = rank <= k; ndcg = 1/log2(rank+1) within the window, 0
/// outside (ideal DCG is 1).
std::pair<double, double> compute_hr_ndcg(std::size_t rank, std::size_t k);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// Average ranks (1-based, ties averaged) of the given values.
std::vector<double> average_ranks(const std::vector<double>& values);

}  // namespace skilldiag
