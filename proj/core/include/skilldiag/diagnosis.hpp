#pragma once

#include <vector>

#include "skilldiag/tensor.hpp"

namespace skilldiag {

inline constexpr int kNumClasses = 4;  // Browse/Click/Chat/Match

enum class OutputActivation { kSigmoid, kSoftmax };

/// Two fully connected layers mapping the concatenated per-level match
/// distances onto per-class scores.
struct DiagnosisHead {
  Tensor w1;  // (levels·d_z)×d_h
  Tensor b1;  // d_h
  Tensor w2;  // d_h×4
  Tensor b2;  // 4
  OutputActivation activation = OutputActivation::kSigmoid;
};

/// Signed per-skill match distance at one level:
/// mask ⊙ (sigmoid(candidate) − sigmoid(job)). All three operands are
/// B×d_z; a positive component means the candidate's squashed ability
/// exceeds the job's squashed requirement on that (masked) skill.
Tensor diagnose_level(const Tensor& candidate, const Tensor& job,
                      const Tensor& mask);

/// Concatenates the per-level distances and applies the prediction head.
/// Output is B×4 with entries in (0,1); rows sum to 1 under softmax.
Tensor aggregate_predict(const std::vector<Tensor>& levels,
                         const DiagnosisHead& head);

/// Multi-class cross-entropy against integer behavior labels, averaged over
/// the batch. Probabilities at or below zero are clamped to 1e-12 with a
/// structured warning before the log.
Tensor interaction_loss(const Tensor& prediction,
                        const std::vector<int>& labels);

/// total = main + lambda·contrastive.
Tensor total_loss(const Tensor& main, const Tensor& contrastive,
                  double lambda);

/// Ranking score: the Match-class output column.
Tensor match_score(const Tensor& prediction);

}  // namespace skilldiag
