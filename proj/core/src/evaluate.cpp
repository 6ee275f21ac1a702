#include "skilldiag/evaluate.hpp"

#include <algorithm>
#include <sstream>

#include "skilldiag/error.hpp"

namespace skilldiag {

std::vector<double> CoverageScorer::score(const std::vector<int>& candidates,
                                          const std::vector<int>& jobs) const {
  std::vector<double> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[i] = truth_->coverage(candidates[i], jobs[i], *q_);
  }
  return out;
}

std::vector<EvalList> build_eval_lists(const InteractionDataset& dataset,
                                       Split split, int negatives_per_list,
                                       Rng& rng, std::size_t* skipped) {
  if (negatives_per_list < 1) {
    throw ContractError("build_eval_lists: need at least one negative");
  }
  std::vector<EvalList> lists;
  std::size_t skip_count = 0;
  const auto& match_sets = dataset.match_sets();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.split_of(i) != split) continue;
    const auto& rec = dataset.record(i);
    if (rec.behavior != kMatch) continue;
    const auto& positives = match_sets[rec.candidate];
    const int available =
        dataset.num_jobs() - static_cast<int>(positives.size());
    if (available < negatives_per_list) {
      ++skip_count;
      continue;
    }
    EvalList list;
    list.candidate = rec.candidate;
    list.positive_job = rec.job;
    list.negatives =
        sample_negatives(positives, dataset.num_jobs(), negatives_per_list, rng);
    lists.push_back(std::move(list));
  }
  if (skipped) *skipped = skip_count;
  return lists;
}

RankedList rank_list(const EvalList& list, const std::vector<double>& scores) {
  if (scores.size() != list.negatives.size() + 1) {
    throw ContractError(msg("rank_list: got ", scores.size(),
                            " scores for ", list.negatives.size() + 1,
                            " items"));
  }
  RankedList ranked;
  ranked.candidate = list.candidate;
  ranked.positive_job = list.positive_job;
  ranked.scores = scores;
  // Rank of the positive after sorting by (score desc, job id asc).
  const double pos_score = scores[0];
  std::size_t rank = 1;
  for (std::size_t i = 0; i < list.negatives.size(); ++i) {
    const double neg_score = scores[i + 1];
    if (neg_score > pos_score ||
        (neg_score == pos_score && list.negatives[i] < list.positive_job)) {
      ++rank;
    }
  }
  ranked.positive_rank = rank;
  return ranked;
}

EvalReport evaluate_lists(const PairScorer& scorer,
                          const std::vector<EvalList>& lists,
                          const std::vector<int>& ks, std::size_t skipped) {
  EvalReport report;
  report.skipped = skipped;
  report.lists = lists.size();
  if (lists.empty()) {
    throw MetricError("evaluate: no evaluation lists (empty split?)");
  }
  // One flat scoring pass over every (candidate, item) point.
  std::vector<int> candidates, jobs;
  candidates.reserve(lists.size() * (lists[0].negatives.size() + 1));
  jobs.reserve(candidates.capacity());
  for (const auto& list : lists) {
    candidates.push_back(list.candidate);
    jobs.push_back(list.positive_job);
    for (int neg : list.negatives) {
      candidates.push_back(list.candidate);
      jobs.push_back(neg);
    }
  }
  const std::vector<double> flat = scorer.score(candidates, jobs);

  std::vector<std::pair<double, bool>> auc_points;
  auc_points.reserve(flat.size());
  std::map<int, double> hr_sum, ndcg_sum;
  for (int k : ks) {
    hr_sum[k] = 0.0;
    ndcg_sum[k] = 0.0;
  }
  std::size_t offset = 0;
  for (const auto& list : lists) {
    const std::size_t width = list.negatives.size() + 1;
    std::vector<double> scores(flat.begin() + offset,
                               flat.begin() + offset + width);
    offset += width;
    auc_points.emplace_back(scores[0], true);
    for (std::size_t i = 1; i < width; ++i) {
      auc_points.emplace_back(scores[i], false);
    }
    const RankedList ranked = rank_list(list, scores);
    for (int k : ks) {
      const auto [hr, ndcg] =
          compute_hr_ndcg(ranked.positive_rank, static_cast<std::size_t>(k));
      hr_sum[k] += hr;
      ndcg_sum[k] += ndcg;
    }
  }
  report.auc = compute_auc(auc_points);
  const double n = static_cast<double>(lists.size());
  for (int k : ks) {
    report.hr[k] = hr_sum[k] / n;
    report.ndcg[k] = ndcg_sum[k] / n;
  }
  return report;
}

EvalReport evaluate(const PairScorer& scorer, const InteractionDataset& dataset,
                    Split split, const EvalOptions& options, Rng& rng) {
  std::size_t skipped = 0;
  const auto lists = build_eval_lists(dataset, split,
                                      options.negatives_per_list, rng, &skipped);
  return evaluate_lists(scorer, lists, options.ks, skipped);
}

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "auc=" << auc << "\n";
  for (const auto& [k, v] : hr) os << "hr@" << k << "=" << v << "\n";
  for (const auto& [k, v] : ndcg) os << "ndcg@" << k << "=" << v << "\n";
  os << "lists=" << lists << "\n";
  os << "skipped=" << skipped << "\n";
  return os.str();
}

EvalReport EvalReport::from_text(const std::string& text) {
  EvalReport report;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "auc") {
      report.auc = std::stod(value);
    } else if (key.rfind("hr@", 0) == 0) {
      report.hr[std::stoi(key.substr(3))] = std::stod(value);
    } else if (key.rfind("ndcg@", 0) == 0) {
      report.ndcg[std::stoi(key.substr(5))] = std::stod(value);
    } else if (key == "lists") {
      report.lists = std::stoul(value);
    } else if (key == "skipped") {
      report.skipped = std::stoul(value);
    }
  }
  return report;
}

}  // namespace skilldiag
