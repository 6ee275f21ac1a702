#pragma once

#include <vector>

#include "skilldiag/base_embed.hpp"
#include "skilldiag/tensor.hpp"

namespace skilldiag {

/// Two-layer MLP mapping a projected hidden representation (d_h) onto a
/// skill prototype (d_z). No output activation; the diagnosis interaction
/// applies its own sigmoid.
struct EncoderMlp {
  Tensor w1;  // d_h×d_h
  Tensor b1;  // d_h
  Tensor w2;  // d_h×d_z
  Tensor b2;  // d_z
};

/// Bias-free linear maps into each level's skill space: h_l = x·W_l.
/// Input is a batch matrix (B×in); output has one B×d_h tensor per level.
std::vector<Tensor> project_levels(const Tensor& embedded,
                                   const std::vector<Tensor>& projectors);

Tensor encode_prototype(const Tensor& hidden, const EncoderMlp& encoder,
                        Activation hidden_activation);

/// Full disentangling stage for one side: per level, project then encode.
/// Returns L tensors of shape B×d_z.
std::vector<Tensor> encode_prototypes(const Tensor& embedded,
                                      const std::vector<Tensor>& projectors,
                                      const std::vector<EncoderMlp>& encoders,
                                      Activation hidden_activation);

}  // namespace skilldiag
