#pragma once

#include <array>
#include <string>
#include <vector>

#include "skilldiag/rng.hpp"

namespace skilldiag {

/// The four interaction behaviors, ordered by matching intensity.
enum Behavior : int {
  kBrowse = 0,
  kClick = 1,
  kChat = 2,
  kMatch = 3,
};
inline constexpr int kNumBehaviors = 4;

const char* behavior_name(int behavior);

enum class Split : int { kTrain = 0, kValid = 1, kTest = 2 };

struct InteractionRecord {
  int candidate = 0;
  int job = 0;
  int behavior = kBrowse;
};

/// Candidate-job interaction records with a persistent train/valid/test
/// assignment. Immutable after construction.
class InteractionDataset {
 public:
  InteractionDataset(std::vector<InteractionRecord> records,
                     std::vector<Split> splits, int num_candidates,
                     int num_jobs);

  std::size_t size() const { return records_.size(); }
  const InteractionRecord& record(std::size_t i) const { return records_[i]; }
  const std::vector<InteractionRecord>& records() const { return records_; }
  Split split_of(std::size_t i) const { return splits_[i]; }

  int num_candidates() const { return num_candidates_; }
  int num_jobs() const { return num_jobs_; }

  std::vector<std::size_t> indices(Split split) const;
  std::size_t count(Split split) const;
  std::array<std::size_t, kNumBehaviors> behavior_counts() const;

  /// Per candidate: sorted jobs with a Match record in ANY split. Used by the
  /// evaluation protocol to keep sampled negatives leak-free.
  const std::vector<std::vector<int>>& match_sets() const {
    return match_sets_;
  }

  void save(const std::string& interactions_path,
            const std::string& splits_path) const;
  static InteractionDataset load(const std::string& interactions_path,
                                 const std::string& splits_path,
                                 int num_candidates_hint = 0,
                                 int num_jobs_hint = 0);

 private:
  std::vector<InteractionRecord> records_;
  std::vector<Split> splits_;
  int num_candidates_ = 0;
  int num_jobs_ = 0;
  std::vector<std::vector<int>> match_sets_;
};

/// Randomly assigns records to train/valid/test in the given ratio (within
/// integer rounding), deterministically per seed. Requires >= 10 records.
std::vector<Split> split_records(std::size_t count,
                                 const std::array<int, 3>& ratios, Rng& rng);

/// Draws `count` distinct jobs outside `positives` (sorted) from [0, num_jobs).
std::vector<int> sample_negatives(const std::vector<int>& positives,
                                  int num_jobs, int count, Rng& rng);

}  // namespace skilldiag
