#include "skilldiag/base_embed.hpp"

#include "skilldiag/error.hpp"

namespace skilldiag {

Tensor apply_activation(const Tensor& t, Activation act, double leaky_slope) {
  switch (act) {
    case Activation::kIdentity: return t;
    case Activation::kLeakyRelu: return leaky_relu(t, leaky_slope);
    case Activation::kTanh: return tanh(t);
    case Activation::kSigmoid: return sigmoid(t);
  }
  throw ContractError("apply_activation: unknown activation");
}

PropagatedTables embed_mf(const EmbeddingTable& tables) {
  return {tables.candidates, tables.jobs, tables.candidates.cols()};
}

PropagatedTables propagate_ngcf(const BipartiteGraph& graph,
                                const EmbeddingTable& tables,
                                const NgcfParams& params, Activation activation,
                                double leaky_slope) {
  if (params.w1.empty() || params.w1.size() != params.w2.size()) {
    throw ContractError("propagate_ngcf: needs matching W1/W2 per layer");
  }
  const std::size_t layers = params.w1.size();
  std::vector<Tensor> cand_layers{tables.candidates};
  std::vector<Tensor> job_layers{tables.jobs};
  for (std::size_t k = 0; k < layers; ++k) {
    const Tensor& c = cand_layers.back();
    const Tensor& j = job_layers.back();
    // Normalized neighbor sums; the elementwise term factors through them.
    Tensor agg_c = neighbor_combine(j, graph.jobs_to_candidates());
    Tensor agg_j = neighbor_combine(c, graph.candidates_to_jobs());
    Tensor next_c =
        add(matmul(add(c, agg_c), params.w1[k]),
            matmul(mul(agg_c, c), params.w2[k]));
    Tensor next_j =
        add(matmul(add(j, agg_j), params.w1[k]),
            matmul(mul(agg_j, j), params.w2[k]));
    cand_layers.push_back(apply_activation(next_c, activation, leaky_slope));
    job_layers.push_back(apply_activation(next_j, activation, leaky_slope));
  }
  Tensor c_out = concat_cols(cand_layers);
  Tensor j_out = concat_cols(job_layers);
  return {c_out, j_out, c_out.cols()};
}

PropagatedTables propagate_lightgcn(const BipartiteGraph& graph,
                                    const EmbeddingTable& tables, int layers) {
  if (layers < 0) throw ContractError("propagate_lightgcn: negative layers");
  Tensor c = tables.candidates;
  Tensor j = tables.jobs;
  Tensor c_sum = c;
  Tensor j_sum = j;
  for (int k = 0; k < layers; ++k) {
    Tensor next_c = neighbor_combine(j, graph.jobs_to_candidates());
    Tensor next_j = neighbor_combine(c, graph.candidates_to_jobs());
    c = next_c;
    j = next_j;
    c_sum = add(c_sum, c);
    j_sum = add(j_sum, j);
  }
  const double inv = 1.0 / static_cast<double>(layers + 1);
  Tensor c_out = scale(c_sum, inv);
  Tensor j_out = scale(j_sum, inv);
  return {c_out, j_out, c_out.cols()};
}

}  // namespace skilldiag
