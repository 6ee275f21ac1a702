#pragma once

#include <vector>

#include "skilldiag/interactions.hpp"
#include "skilldiag/tensor.hpp"

namespace skilldiag {

enum class EdgeRule {
  kMatchOnly,      // Match records only (the positive signal)
  kAllBehaviors,   // every interaction regardless of behavior
};

/// Undirected candidate-job interaction graph with symmetric-normalized
/// aggregation maps for message passing. Edges are deduplicated.
class BipartiteGraph {
 public:
  BipartiteGraph(int num_candidates, int num_jobs);

  void add_edge(int candidate, int job);
  /// Call once after the final add_edge; builds degree tables and the
  /// 1/sqrt(|N_u||N_v|) aggregation maps.
  void finalize();

  /// Builds from the records of `split` under the edge rule and finalizes.
  static BipartiteGraph build(const InteractionDataset& dataset, EdgeRule rule,
                              Split split = Split::kTrain);

  int num_candidates() const { return num_candidates_; }
  int num_jobs() const { return num_jobs_; }
  std::size_t num_edges() const;

  const std::vector<int>& candidate_neighbors(int candidate) const;
  const std::vector<int>& job_neighbors(int job) const;
  int candidate_degree(int candidate) const;
  int job_degree(int job) const;

  /// Aggregates job rows into candidate rows (and vice versa) with
  /// symmetric normalization.
  const AggregationMap& jobs_to_candidates() const;
  const AggregationMap& candidates_to_jobs() const;

 private:
  int num_candidates_;
  int num_jobs_;
  bool finalized_ = false;
  std::vector<std::vector<int>> cand_nbrs_;
  std::vector<std::vector<int>> job_nbrs_;
  AggregationMap jobs_to_cands_;
  AggregationMap cands_to_jobs_;
};

}  // namespace skilldiag
