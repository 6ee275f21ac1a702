#include "skilldiag/interactions.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "skilldiag/error.hpp"

namespace skilldiag {

const char* behavior_name(int behavior) {
  switch (behavior) {
    case kBrowse: return "browse";
    case kClick: return "click";
    case kChat: return "chat";
    case kMatch: return "match";
    default: return "?";
  }
}

InteractionDataset::InteractionDataset(std::vector<InteractionRecord> records,
                                       std::vector<Split> splits,
                                       int num_candidates, int num_jobs)
    : records_(std::move(records)),
      splits_(std::move(splits)),
      num_candidates_(num_candidates),
      num_jobs_(num_jobs) {
  if (records_.size() != splits_.size()) {
    throw ContractError(msg("dataset: ", records_.size(), " records but ",
                            splits_.size(), " split assignments"));
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    if (rec.candidate < 0 || rec.candidate >= num_candidates_) {
      throw ValidationError(msg("dataset: record ", i, " candidate ",
                                rec.candidate, " out of range [0,",
                                num_candidates_, ")"));
    }
    if (rec.job < 0 || rec.job >= num_jobs_) {
      throw ValidationError(msg("dataset: record ", i, " job ", rec.job,
                                " out of range [0,", num_jobs_, ")"));
    }
    if (rec.behavior < 0 || rec.behavior >= kNumBehaviors) {
      throw ValidationError(msg("dataset: record ", i, " behavior ",
                                rec.behavior, " not in {0,1,2,3}"));
    }
  }
  match_sets_.assign(num_candidates_, {});
  for (const auto& rec : records_) {
    if (rec.behavior == kMatch) match_sets_[rec.candidate].push_back(rec.job);
  }
  for (auto& set : match_sets_) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
}

std::vector<std::size_t> InteractionDataset::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (splits_[i] == split) out.push_back(i);
  }
  return out;
}

std::size_t InteractionDataset::count(Split split) const {
  std::size_t n = 0;
  for (Split s : splits_) {
    if (s == split) ++n;
  }
  return n;
}

std::array<std::size_t, kNumBehaviors> InteractionDataset::behavior_counts()
    const {
  std::array<std::size_t, kNumBehaviors> counts{};
  for (const auto& rec : records_) ++counts[rec.behavior];
  return counts;
}

void InteractionDataset::save(const std::string& interactions_path,
                              const std::string& splits_path) const {
  std::ofstream out(interactions_path);
  if (!out) {
    throw IoError(msg("cannot write interactions file ", interactions_path));
  }
  out << "# candidate_id job_id behavior\n";
  for (const auto& rec : records_) {
    out << rec.candidate << '\t' << rec.job << '\t' << rec.behavior << '\n';
  }
  std::ofstream sout(splits_path);
  if (!sout) throw IoError(msg("cannot write splits file ", splits_path));
  sout << "# record_index split (0=train 1=valid 2=test)\n";
  for (std::size_t i = 0; i < splits_.size(); ++i) {
    sout << i << '\t' << static_cast<int>(splits_[i]) << '\n';
  }
}

InteractionDataset InteractionDataset::load(
    const std::string& interactions_path, const std::string& splits_path,
    int num_candidates_hint, int num_jobs_hint) {
  std::ifstream in(interactions_path);
  if (!in) {
    throw IoError(msg("cannot open interactions file ", interactions_path));
  }
  std::vector<InteractionRecord> records;
  int max_candidate = num_candidates_hint - 1;
  int max_job = num_jobs_hint - 1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    InteractionRecord rec;
    if (!(fields >> rec.candidate >> rec.job >> rec.behavior)) {
      throw ValidationError(msg(interactions_path, ":", line_no,
                                ": expected 'candidate_id job_id behavior'"));
    }
    if (rec.behavior < 0 || rec.behavior >= kNumBehaviors) {
      throw ValidationError(msg(interactions_path, ":", line_no,
                                ": behavior ", rec.behavior,
                                " not in {0,1,2,3}"));
    }
    max_candidate = std::max(max_candidate, rec.candidate);
    max_job = std::max(max_job, rec.job);
    records.push_back(rec);
  }

  std::ifstream sin(splits_path);
  if (!sin) throw IoError(msg("cannot open splits file ", splits_path));
  std::vector<Split> splits(records.size(), Split::kTrain);
  std::vector<bool> seen(records.size(), false);
  line_no = 0;
  while (std::getline(sin, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::size_t index;
    int split;
    if (!(fields >> index >> split)) {
      throw ValidationError(
          msg(splits_path, ":", line_no, ": expected 'record_index split'"));
    }
    if (index >= records.size()) {
      throw ValidationError(msg(splits_path, ":", line_no, ": record index ",
                                index, " out of range"));
    }
    if (split < 0 || split > 2) {
      throw ValidationError(
          msg(splits_path, ":", line_no, ": split ", split, " not in {0,1,2}"));
    }
    splits[index] = static_cast<Split>(split);
    seen[index] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw ValidationError(
          msg(splits_path, ": no split assignment for record ", i));
    }
  }
  return InteractionDataset(std::move(records), std::move(splits),
                            max_candidate + 1, max_job + 1);
}

std::vector<Split> split_records(std::size_t count,
                                 const std::array<int, 3>& ratios, Rng& rng) {
  if (count < 10) {
    throw ContractError(
        msg("split_records: need at least 10 records, got ", count));
  }
  const long long total = ratios[0] + ratios[1] + ratios[2];
  if (ratios[0] <= 0 || ratios[1] < 0 || ratios[2] < 0 || total <= 0) {
    throw ContractError("split_records: invalid ratios");
  }
  const std::size_t n_train = static_cast<std::size_t>(
      static_cast<long long>(count) * ratios[0] / total);
  const std::size_t n_valid = static_cast<std::size_t>(
      static_cast<long long>(count) * ratios[1] / total);
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<Split> splits(count, Split::kTest);
  for (std::size_t i = 0; i < n_train; ++i) splits[order[i]] = Split::kTrain;
  for (std::size_t i = n_train; i < n_train + n_valid; ++i) {
    splits[order[i]] = Split::kValid;
  }
  return splits;
}

std::vector<int> sample_negatives(const std::vector<int>& positives,
                                  int num_jobs, int count, Rng& rng) {
  std::vector<int> complement;
  complement.reserve(num_jobs);
  std::size_t p = 0;
  for (int job = 0; job < num_jobs; ++job) {
    while (p < positives.size() && positives[p] < job) ++p;
    if (p < positives.size() && positives[p] == job) continue;
    complement.push_back(job);
  }
  if (static_cast<int>(complement.size()) < count) {
    throw ContractError(
        msg("sample_negatives: only ", complement.size(),
            " jobs available outside the positive set; request fewer than ",
            count, " negatives"));
  }
  // Partial Fisher-Yates over the complement.
  for (int i = 0; i < count; ++i) {
    const std::size_t j = i + rng.index(complement.size() - i);
    std::swap(complement[i], complement[j]);
  }
  complement.resize(count);
  return complement;
}

}  // namespace skilldiag
