#include "skilldiag/association.hpp"

#include <cmath>

#include "skilldiag/error.hpp"
#include "skilldiag/warnings.hpp"

namespace skilldiag {

std::vector<Tensor> level_attention(const std::vector<Tensor>& prototypes,
                                    const std::vector<Tensor>& values_source,
                                    const AttentionParams& params) {
  if (prototypes.empty()) {
    throw ContractError("level_attention: no prototypes");
  }
  if (values_source.size() != prototypes.size()) {
    throw ContractError(msg("level_attention: ", prototypes.size(),
                            " key levels vs ", values_source.size(),
                            " value levels"));
  }
  const std::size_t levels = prototypes.size();
  const std::size_t d_z = prototypes[0].cols();
  const double scaling = 1.0 / std::sqrt(static_cast<double>(d_z));

  std::vector<Tensor> queries, keys, values;
  queries.reserve(levels);
  keys.reserve(levels);
  values.reserve(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    queries.push_back(matmul(prototypes[l], params.wq));
    keys.push_back(matmul(prototypes[l], params.wk));
    values.push_back(matmul(values_source[l], params.wv));
  }

  std::vector<Tensor> enhanced;
  enhanced.reserve(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    std::vector<Tensor> scores;
    scores.reserve(levels);
    for (std::size_t k = 0; k < levels; ++k) {
      scores.push_back(rowwise_dot(queries[l], keys[k]));
    }
    Tensor weights = softmax_rows(scale(stack_cols(scores), scaling));
    Tensor out = mul_colvec(values[0], col(weights, 0));
    for (std::size_t k = 1; k < levels; ++k) {
      out = add(out, mul_colvec(values[k], col(weights, k)));
    }
    enhanced.push_back(out);
  }
  return enhanced;
}

Tensor augment_noise(const Tensor& prototypes, double epsilon, Rng& rng) {
  if (epsilon < 0.0) {
    throw ContractError(
        msg("augment_noise: negative noise radius ", epsilon));
  }
  const bool is_vector = prototypes.rank() == 1;
  const std::size_t rows = is_vector ? 1 : prototypes.rows();
  const std::size_t cols = is_vector ? prototypes.size() : prototypes.cols();
  const auto& pv = prototypes.values();

  std::vector<double> delta(rows * cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double p = pv[i * cols + j];
      const double s = p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
      const double raw = rng.uniform() * s;
      delta[i * cols + j] = raw;
      norm_sq += raw * raw;
    }
    if (norm_sq == 0.0) {
      if (epsilon > 0.0) {
        warnings::emit("noise_zero_prototype",
                       "cannot satisfy the noise norm constraint on an "
                       "all-zero prototype; returning it unchanged");
      }
      continue;
    }
    const double rescale = epsilon / std::sqrt(norm_sq);
    for (std::size_t j = 0; j < cols; ++j) delta[i * cols + j] *= rescale;
  }
  Tensor noise = Tensor::leaf(prototypes.shape(), std::move(delta));
  return add(prototypes, noise);
}

Tensor level_contrastive_loss(const std::vector<Tensor>& enhanced,
                              const ContrastiveConfig& config, Rng& rng) {
  if (enhanced.empty()) {
    throw ContractError("level_contrastive_loss: no levels");
  }
  if (config.tau <= 0.0) {
    throw ContractError(
        msg("level_contrastive_loss: temperature must be positive, got ",
            config.tau));
  }
  const std::size_t levels = enhanced.size();
  std::vector<Tensor> similarities;
  similarities.reserve(levels);
  for (const Tensor& proto : enhanced) {
    Tensor view = config.double_noise
                      ? augment_noise(proto, config.epsilon, rng)
                      : proto;
    Tensor positive = augment_noise(proto, config.epsilon, rng);
    similarities.push_back(cosine_rows(view, positive));
  }
  Tensor scores = scale(stack_cols(similarities), 1.0 / config.tau);
  Tensor log_probs = log(softmax_rows(scores));
  return scale(sum(log_probs), -1.0 / static_cast<double>(levels));
}

Tensor combined_cl_loss(const Tensor& candidate_loss, const Tensor& job_loss) {
  return add(candidate_loss, job_loss);
}

}  // namespace skilldiag
