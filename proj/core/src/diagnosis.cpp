#include "skilldiag/diagnosis.hpp"

#include "skilldiag/error.hpp"
#include "skilldiag/interactions.hpp"
#include "skilldiag/warnings.hpp"

namespace skilldiag {

Tensor diagnose_level(const Tensor& candidate, const Tensor& job,
                      const Tensor& mask) {
  return mul(mask, sub(sigmoid(candidate), sigmoid(job)));
}

Tensor aggregate_predict(const std::vector<Tensor>& levels,
                         const DiagnosisHead& head) {
  if (levels.empty()) {
    throw ContractError("aggregate_predict: no level distances");
  }
  Tensor h = levels.size() == 1 ? levels[0] : concat_cols(levels);
  Tensor hidden = sigmoid(add_rowvec(matmul(h, head.w1), head.b1));
  Tensor logits = add_rowvec(matmul(hidden, head.w2), head.b2);
  switch (head.activation) {
    case OutputActivation::kSigmoid: return sigmoid(logits);
    case OutputActivation::kSoftmax: return softmax_rows(logits);
  }
  throw ContractError("aggregate_predict: unknown output activation");
}

Tensor interaction_loss(const Tensor& prediction,
                        const std::vector<int>& labels) {
  if (prediction.cols() != kNumClasses) {
    throw ShapeError(msg("interaction_loss: prediction has ",
                         prediction.cols(), " classes, expected ",
                         kNumClasses));
  }
  for (int label : labels) {
    if (label < 0 || label >= kNumClasses) {
      throw ContractError(
          msg("interaction_loss: label ", label, " not in {0,1,2,3}"));
    }
  }
  Tensor picked = select_cols(prediction, labels);
  for (double v : picked.values()) {
    if (v <= 0.0) {
      warnings::emit("loss_log_clamp",
                     "predicted probability <= 0 clamped to 1e-12");
      break;
    }
  }
  return neg(mean(log(clamp_min(picked, 1e-12))));
}

Tensor total_loss(const Tensor& main, const Tensor& contrastive,
                  double lambda) {
  if (lambda < 0.0) {
    throw ContractError(msg("total_loss: negative lambda ", lambda));
  }
  return add(main, scale(contrastive, lambda));
}

Tensor match_score(const Tensor& prediction) {
  return col(prediction, kMatch);
}

}  // namespace skilldiag
