#include "skilldiag/graph.hpp"

#include <algorithm>
#include <cmath>

#include "skilldiag/error.hpp"

namespace skilldiag {

BipartiteGraph::BipartiteGraph(int num_candidates, int num_jobs)
    : num_candidates_(num_candidates), num_jobs_(num_jobs) {
  if (num_candidates < 0 || num_jobs < 0) {
    throw ContractError("graph: negative entity count");
  }
  cand_nbrs_.resize(num_candidates);
  job_nbrs_.resize(num_jobs);
}

void BipartiteGraph::add_edge(int candidate, int job) {
  if (finalized_) throw ContractError("graph: add_edge after finalize");
  if (candidate < 0 || candidate >= num_candidates_) {
    throw LookupError(msg("graph: candidate ", candidate, " out of range"));
  }
  if (job < 0 || job >= num_jobs_) {
    throw LookupError(msg("graph: job ", job, " out of range"));
  }
  cand_nbrs_[candidate].push_back(job);
  job_nbrs_[job].push_back(candidate);
}

void BipartiteGraph::finalize() {
  if (finalized_) return;
  for (auto& nbrs : cand_nbrs_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  for (auto& nbrs : job_nbrs_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  auto build_map = [](const std::vector<std::vector<int>>& out_nbrs,
                      const std::vector<std::vector<int>>& src_nbrs) {
    AggregationMap map;
    map.out_rows = out_nbrs.size();
    map.offsets.reserve(out_nbrs.size() + 1);
    map.offsets.push_back(0);
    for (std::size_t i = 0; i < out_nbrs.size(); ++i) {
      const double deg_out = static_cast<double>(out_nbrs[i].size());
      for (int src : out_nbrs[i]) {
        const double deg_src = static_cast<double>(src_nbrs[src].size());
        map.indices.push_back(src);
        map.coeffs.push_back(1.0 / std::sqrt(deg_out * deg_src));
      }
      map.offsets.push_back(map.indices.size());
    }
    return map;
  };
  jobs_to_cands_ = build_map(cand_nbrs_, job_nbrs_);
  cands_to_jobs_ = build_map(job_nbrs_, cand_nbrs_);
  finalized_ = true;
}

BipartiteGraph BipartiteGraph::build(const InteractionDataset& dataset,
                                     EdgeRule rule, Split split) {
  BipartiteGraph graph(dataset.num_candidates(), dataset.num_jobs());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.split_of(i) != split) continue;
    const auto& rec = dataset.record(i);
    if (rule == EdgeRule::kMatchOnly && rec.behavior != kMatch) continue;
    graph.add_edge(rec.candidate, rec.job);
  }
  graph.finalize();
  return graph;
}

std::size_t BipartiteGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& nbrs : cand_nbrs_) n += nbrs.size();
  return n;
}

const std::vector<int>& BipartiteGraph::candidate_neighbors(
    int candidate) const {
  if (candidate < 0 || candidate >= num_candidates_) {
    throw LookupError(msg("graph: candidate ", candidate, " out of range"));
  }
  return cand_nbrs_[candidate];
}

const std::vector<int>& BipartiteGraph::job_neighbors(int job) const {
  if (job < 0 || job >= num_jobs_) {
    throw LookupError(msg("graph: job ", job, " out of range"));
  }
  return job_nbrs_[job];
}

int BipartiteGraph::candidate_degree(int candidate) const {
  return static_cast<int>(candidate_neighbors(candidate).size());
}

int BipartiteGraph::job_degree(int job) const {
  return static_cast<int>(job_neighbors(job).size());
}

const AggregationMap& BipartiteGraph::jobs_to_candidates() const {
  if (!finalized_) throw ContractError("graph: not finalized");
  return jobs_to_cands_;
}

const AggregationMap& BipartiteGraph::candidates_to_jobs() const {
  if (!finalized_) throw ContractError("graph: not finalized");
  return cands_to_jobs_;
}

}  // namespace skilldiag
