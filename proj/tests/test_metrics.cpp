#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skilldiag/error.hpp"
#include "skilldiag/metrics.hpp"
#include "skilldiag/rng.hpp"

using namespace skilldiag;

namespace {

// Independent O(P·N) oracle: concordant pairs count 1, ties count 1/2.
double brute_force_auc(const std::vector<std::pair<double, bool>>& scored) {
  double numerator = 0.0;
  std::size_t pairs = 0;
  for (const auto& [ps, pl] : scored) {
    if (!pl) continue;
    for (const auto& [ns, nl] : scored) {
      if (nl) continue;
      ++pairs;
      if (ps > ns) {
        numerator += 1.0;
      } else if (ps == ns) {
        numerator += 0.5;
      }
    }
  }
  return numerator / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("perfect separation gives auc one") {
  std::vector<std::pair<double, bool>> scored{
      {0.9, true}, {0.8, true}, {0.3, false}, {0.2, false}, {0.1, false}};
  CHECK(compute_auc(scored) == 1.0);
}

TEST_CASE("all-tied scores give auc one half") {
  std::vector<std::pair<double, bool>> scored{
      {0.5, true}, {0.5, false}, {0.5, true}, {0.5, false}};
  CHECK(compute_auc(scored) == 0.5);
}

TEST_CASE("three concordant of four pairs give 0.75") {
  std::vector<std::pair<double, bool>> scored{
      {0.9, true}, {0.8, false}, {0.7, true}, {0.1, false}};
  CHECK(compute_auc(scored) == 0.75);
}

TEST_CASE("auc equals the brute-force pair count exactly") {
  Rng rng(55);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::pair<double, bool>> scored;
    const std::size_t n = 5 + rng.index(40);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      // Quantized scores force plenty of ties.
      const double score = static_cast<double>(rng.index(8)) / 8.0;
      const bool label = rng.uniform() < 0.4;
      has_pos |= label;
      has_neg |= !label;
      scored.emplace_back(score, label);
    }
    if (!has_pos) scored.emplace_back(0.33, true);
    if (!has_neg) scored.emplace_back(0.66, false);
    CHECK(compute_auc(scored) == brute_force_auc(scored));
  }
}

TEST_CASE("single-class input is an undefined metric") {
  std::vector<std::pair<double, bool>> only_pos{{0.5, true}, {0.2, true}};
  CHECK_THROWS_AS(compute_auc(only_pos), MetricError);
  std::vector<std::pair<double, bool>> only_neg{{0.5, false}};
  CHECK_THROWS_AS(compute_auc(only_neg), MetricError);
}

TEST_CASE("hr and ndcg match hand-computed ranks") {
  auto [hr1, ndcg1] = compute_hr_ndcg(1, 5);
  CHECK(hr1 == 1.0);
  CHECK(ndcg1 == 1.0);
  auto [hr3, ndcg3] = compute_hr_ndcg(3, 5);
  CHECK(hr3 == 1.0);
  CHECK(ndcg3 == doctest::Approx(0.5).epsilon(1e-12));  // 1/log2(4)
  auto [hr7, ndcg7] = compute_hr_ndcg(7, 5);
  CHECK(hr7 == 0.0);
  CHECK(ndcg7 == 0.0);
}

TEST_CASE("hr and ndcg are monotone nonincreasing in rank") {
  double prev_hr = 2.0, prev_ndcg = 2.0;
  for (std::size_t rank = 1; rank <= 12; ++rank) {
    auto [hr, ndcg] = compute_hr_ndcg(rank, 10);
    CHECK(hr <= prev_hr);
    CHECK(ndcg <= prev_ndcg);
    CHECK(ndcg >= 0.0);
    CHECK(ndcg <= 1.0);
    CHECK((hr == 0.0 || hr == 1.0));
    prev_hr = hr;
    prev_ndcg = ndcg;
  }
}

TEST_CASE("spearman recognizes monotone and reversed relationships") {
  std::vector<double> a{1, 2, 3, 4, 5};
  std::vector<double> b{10, 20, 25, 40, 100};  // monotone transform
  CHECK(spearman(a, b) == doctest::Approx(1.0));
  std::vector<double> c{5, 4, 3, 2, 1};
  CHECK(spearman(a, c) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(spearman(a, {1, 1, 1, 1, 1}), MetricError);
}

TEST_CASE("average ranks split ties evenly") {
  const auto ranks = average_ranks({0.3, 0.1, 0.3, 0.7});
  CHECK(ranks[1] == 1.0);
  CHECK(ranks[0] == 2.5);
  CHECK(ranks[2] == 2.5);
  CHECK(ranks[3] == 4.0);
}
