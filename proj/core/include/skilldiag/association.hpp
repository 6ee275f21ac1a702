#pragma once

#include <vector>

#include "skilldiag/rng.hpp"
#include "skilldiag/tensor.hpp"

namespace skilldiag {

/// Learned square query/key/value projections, shared across levels within
/// one entity side.
struct AttentionParams {
  Tensor wq;  // d_z×d_z
  Tensor wk;
  Tensor wv;
};

struct ContrastiveConfig {
  double tau = 0.2;       // softmax temperature, > 0
  double epsilon = 0.1;   // noise radius, >= 0
  bool double_noise = false;  // contrast two noisy views instead of clean/noisy
};

/// Level-aware self-attention. For each query level l, keys and values come
/// from all L levels of `values_source` (the same side by default); weights
/// are softmax(q·k^T / sqrt(d_z)). Shapes: each of the L inputs is B×d_z.
std::vector<Tensor> level_attention(const std::vector<Tensor>& prototypes,
                                    const std::vector<Tensor>& values_source,
                                    const AttentionParams& params);

inline std::vector<Tensor> level_attention(
    const std::vector<Tensor>& prototypes, const AttentionParams& params) {
  return level_attention(prototypes, prototypes, params);
}

/// Adds norm-epsilon noise to every row: the raw direction is
/// U(0,1)^d_z ⊙ sign(row), rescaled so its L2 norm is exactly epsilon.
/// Nonzero noise components therefore share the row's signs, and zero
/// components stay zero. An all-zero row is returned unchanged with a
/// structured warning (the norm constraint is unsatisfiable). The noise is
/// a constant in the compute graph.
Tensor augment_noise(const Tensor& prototypes, double epsilon, Rng& rng);

/// Level-wise contrastive loss for one side over a batch of entities.
/// For entity u and level l, the positive-pair similarity phi_l is the
/// cosine between the (clean or noisy) view and its augmented view; each
/// level competes against the others through softmax(phi/tau), and the loss
/// is (1/L)·Σ_u Σ_l −log p(l).
Tensor level_contrastive_loss(const std::vector<Tensor>& enhanced,
                              const ContrastiveConfig& config, Rng& rng);

/// Sum of the candidate-side and job-side contrastive losses.
Tensor combined_cl_loss(const Tensor& candidate_loss, const Tensor& job_loss);

}  // namespace skilldiag
