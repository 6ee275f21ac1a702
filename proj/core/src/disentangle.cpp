#include "skilldiag/disentangle.hpp"

#include "skilldiag/error.hpp"

namespace skilldiag {

std::vector<Tensor> project_levels(const Tensor& embedded,
                                   const std::vector<Tensor>& projectors) {
  if (projectors.empty()) {
    throw ContractError("project_levels: no projectors");
  }
  std::vector<Tensor> hidden;
  hidden.reserve(projectors.size());
  for (const Tensor& w : projectors) hidden.push_back(matmul(embedded, w));
  return hidden;
}

Tensor encode_prototype(const Tensor& hidden, const EncoderMlp& encoder,
                        Activation hidden_activation) {
  Tensor h = add_rowvec(matmul(hidden, encoder.w1), encoder.b1);
  h = apply_activation(h, hidden_activation, 0.2);
  return add_rowvec(matmul(h, encoder.w2), encoder.b2);
}

std::vector<Tensor> encode_prototypes(const Tensor& embedded,
                                      const std::vector<Tensor>& projectors,
                                      const std::vector<EncoderMlp>& encoders,
                                      Activation hidden_activation) {
  if (projectors.size() != encoders.size()) {
    throw ContractError(
        msg("encode_prototypes: ", projectors.size(), " projectors vs ",
            encoders.size(), " encoders"));
  }
  std::vector<Tensor> prototypes;
  prototypes.reserve(encoders.size());
  for (std::size_t l = 0; l < encoders.size(); ++l) {
    Tensor hidden = matmul(embedded, projectors[l]);
    prototypes.push_back(
        encode_prototype(hidden, encoders[l], hidden_activation));
  }
  return prototypes;
}

}  // namespace skilldiag
