#pragma once

#include <map>
#include <string>
#include <vector>

#include "skilldiag/graph.hpp"
#include "skilldiag/interactions.hpp"
#include "skilldiag/metrics.hpp"
#include "skilldiag/model.hpp"
#include "skilldiag/qmatrix.hpp"
#include "skilldiag/rng.hpp"
#include "skilldiag/synthetic.hpp"

namespace skilldiag {

/// Scores (candidate, job) pairs; implemented by the trained model and by
/// the planted-signal coverage oracle.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual std::vector<double> score(const std::vector<int>& candidates,
                                    const std::vector<int>& jobs) const = 0;
};

class ModelScorer : public PairScorer {
 public:
  ModelScorer(const SkillDiagModel& model, const PropagatedTables& tables,
              const QMatrix& q)
      : model_(&model), tables_(&tables), q_(&q) {}
  std::vector<double> score(const std::vector<int>& candidates,
                            const std::vector<int>& jobs) const override {
    return model_->score_pairs(*tables_, *q_, candidates, jobs);
  }

 private:
  const SkillDiagModel* model_;
  const PropagatedTables* tables_;
  const QMatrix* q_;
};

/// Scores pairs by ground-truth requirement coverage; the planted signal's
/// upper bound on ranking quality.
class CoverageScorer : public PairScorer {
 public:
  CoverageScorer(const PlantedGroundTruth& truth, const QMatrix& q)
      : truth_(&truth), q_(&q) {}
  std::vector<double> score(const std::vector<int>& candidates,
                            const std::vector<int>& jobs) const override;

 private:
  const PlantedGroundTruth* truth_;
  const QMatrix* q_;
};

/// One ranking list of the evaluation protocol: the positive job plus
/// sampled negatives, none of which is in the candidate's Match set.
struct EvalList {
  int candidate = 0;
  int positive_job = 0;
  std::vector<int> negatives;
};

/// Builds one list per Match record in `split`. Negatives are drawn outside
/// the candidate's Match set across ALL splits; candidates without enough
/// eligible jobs are skipped and counted.
std::vector<EvalList> build_eval_lists(const InteractionDataset& dataset,
                                       Split split, int negatives_per_list,
                                       Rng& rng, std::size_t* skipped);

struct RankedList {
  int candidate = 0;
  int positive_job = 0;
  std::size_t positive_rank = 0;  // 1-based; ties broken by ascending job id
  std::vector<double> scores;     // positive first, then negatives
};

/// Ranks one list under a scorer with deterministic tie-breaking.
RankedList rank_list(const EvalList& list, const std::vector<double>& scores);

struct EvalReport {
  double auc = 0.0;
  std::map<int, double> hr;    // k -> hit ratio
  std::map<int, double> ndcg;  // k -> ndcg
  std::size_t lists = 0;
  std::size_t skipped = 0;

  std::string to_text() const;
  static EvalReport from_text(const std::string& text);
};

struct EvalOptions {
  std::vector<int> ks = {5, 10};
  int negatives_per_list = 25;
};

/// Full protocol: per Match record in `split`, score 1 positive against the
/// sampled negatives, aggregate HR@k/NDCG@k over lists and AUC over all
/// scored points. Deterministic per rng seed.
EvalReport evaluate(const PairScorer& scorer, const InteractionDataset& dataset,
                    Split split, const EvalOptions& options, Rng& rng);

/// Same protocol over prebuilt lists (training reuses fixed validation
/// lists across epochs).
EvalReport evaluate_lists(const PairScorer& scorer,
                          const std::vector<EvalList>& lists,
                          const std::vector<int>& ks, std::size_t skipped);

}  // namespace skilldiag
