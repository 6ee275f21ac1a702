#pragma once

#include <vector>

#include "skilldiag/graph.hpp"
#include "skilldiag/tensor.hpp"

namespace skilldiag {

enum class BaseModel { kMf, kNgcf, kLightGcn };

enum class Activation { kIdentity, kLeakyRelu, kTanh, kSigmoid };

Tensor apply_activation(const Tensor& t, Activation act, double leaky_slope);

/// Trainable embedding tables for both entity sides.
struct EmbeddingTable {
  Tensor candidates;  // N×d
  Tensor jobs;        // M×d
};

/// Per-layer feature-transform matrices used by NGCF propagation.
struct NgcfParams {
  std::vector<Tensor> w1;  // d×d per layer
  std::vector<Tensor> w2;  // d×d per layer
};

struct PropagatedTables {
  Tensor candidates;
  Tensor jobs;
  std::size_t width = 0;  // output embedding width
};

/// Identity propagation: the raw tables.
PropagatedTables embed_mf(const EmbeddingTable& tables);

/// Message passing with per-layer transforms; layer k+1 for a node is
/// act(self·W1 + (norm-agg of neighbors)·W1 + ((norm-agg) ⊙ self)·W2).
/// The output is the column concatenation of layers 0..K, so the width
/// is (layers+1)·d.
PropagatedTables propagate_ngcf(const BipartiteGraph& graph,
                                const EmbeddingTable& tables,
                                const NgcfParams& params, Activation activation,
                                double leaky_slope);

/// Transform-free propagation; layer k+1 is the normalized neighbor sum of
/// layer k, and the output is the arithmetic mean of layers 0..K.
PropagatedTables propagate_lightgcn(const BipartiteGraph& graph,
                                    const EmbeddingTable& tables, int layers);

}  // namespace skilldiag
