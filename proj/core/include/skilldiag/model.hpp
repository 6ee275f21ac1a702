#pragma once

#include <string>
#include <vector>

#include "skilldiag/adam.hpp"
#include "skilldiag/association.hpp"
#include "skilldiag/base_embed.hpp"
#include "skilldiag/diagnosis.hpp"
#include "skilldiag/disentangle.hpp"
#include "skilldiag/qmatrix.hpp"
#include "skilldiag/taxonomy.hpp"

namespace skilldiag {

enum class Side { kCandidate, kJob };

const char* side_name(Side side);

struct ModelConfig {
  BaseModel base_model = BaseModel::kMf;
  int embed_dim = 32;   // d
  int hidden_dim = 32;  // d_h
  int gcn_layers = 2;
  Activation ngcf_activation = Activation::kLeakyRelu;
  double leaky_slope = 0.2;
  Activation encoder_activation = Activation::kTanh;
  OutputActivation output_activation = OutputActivation::kSigmoid;
  double lambda = 1e-3;   // contrastive loss weight
  double tau = 0.2;       // contrastive temperature
  double epsilon = 0.1;   // noise radius
  bool disable_hd = false;  // single-level pipeline
  bool disable_sa = false;  // skip level attention
  bool disable_cl = false;  // skip the contrastive objective entirely
  bool disable_id = false;  // prototypes feed the head directly
  bool attention_cross_side = false;  // candidate attention values from jobs
  bool double_noise = false;
  bool freeze_base = false;  // keep embedding tables fixed
  // Keep the head's first layer nonnegative (projected after each step).
  // Without it the sign of every prototype dimension is unidentifiable
  // (flipping a dimension on both sides plus its head row leaves every
  // prediction unchanged), and exported profiles lose their orientation.
  bool monotonic_head = true;
};

struct BatchData {
  std::vector<int> candidates;
  std::vector<int> jobs;
  std::vector<int> labels;
};

struct ForwardResult {
  Tensor prediction;  // B×4
  Tensor main_loss;
  Tensor cl_loss;  // undefined when the contrastive path is disabled
  Tensor total;
};

/// The full interaction model: base embeddings, per-level disentangling,
/// level attention, contrastive regularization, and the diagnosis head.
class SkillDiagModel {
 public:
  SkillDiagModel(const ModelConfig& config, int num_candidates, int num_jobs,
                 const SkillTaxonomy& taxonomy, Rng& init_rng);

  const ModelConfig& config() const { return config_; }
  int num_candidates() const { return num_candidates_; }
  int num_jobs() const { return num_jobs_; }
  /// Pipeline level count: 1 under disable_hd, else the taxonomy's L.
  int levels() const { return levels_; }
  int prototype_dim() const { return d_z_; }
  /// Embedding width after propagation (projector input width).
  int propagated_width() const { return propagated_width_; }

  bool needs_graph() const { return config_.base_model != BaseModel::kMf; }

  /// Trainable tensors in a fixed order; honors ablations and freeze_base.
  ParameterMap parameters();
  /// Projects the head's first layer onto the nonnegative orthant; called
  /// after each optimizer step when monotonic_head is set. No-op under
  /// disable_id, where the head input is not a signed match distance.
  void project_monotonic_head();
  /// Every tensor that belongs in a checkpoint (including frozen tables).
  ParameterMap state_tensors();
  void load_state(const ParameterMap& state);

  PropagatedTables propagate(const BipartiteGraph* graph) const;

  /// Attention-enhanced prototypes (raw ones under disable_sa) for `ids`,
  /// one B×d_z tensor per level. Always uses same-side attention values.
  std::vector<Tensor> enhanced_prototypes(const PropagatedTables& tables,
                                          Side side,
                                          const std::vector<int>& ids) const;

  ForwardResult forward_batch(const BipartiteGraph* graph, const QMatrix& q,
                              const BatchData& batch, Rng& noise_rng) const;

  /// Match-class scores for aligned candidate/job id lists. Runs without
  /// building a gradient graph.
  std::vector<double> score_pairs(const PropagatedTables& tables,
                                  const QMatrix& q,
                                  const std::vector<int>& candidates,
                                  const std::vector<int>& jobs) const;

 private:
  std::vector<Tensor> prototype_stage(const Tensor& table, Side side,
                                      const std::vector<int>& ids) const;
  Tensor level_mask_tensor(const QMatrix& q, const std::vector<int>& jobs,
                           int pipeline_level) const;
  Tensor predict_from_prototypes(const std::vector<Tensor>& cand_protos,
                                 const std::vector<Tensor>& job_protos,
                                 const QMatrix& q,
                                 const std::vector<int>& jobs) const;

  ModelConfig config_;
  int num_candidates_;
  int num_jobs_;
  int taxonomy_levels_;
  int levels_;
  int d_z_;
  int propagated_width_;

  EmbeddingTable tables_;
  NgcfParams ngcf_;
  std::vector<Tensor> proj_cand_, proj_job_;
  std::vector<EncoderMlp> enc_cand_, enc_job_;
  AttentionParams attn_cand_, attn_job_;
  DiagnosisHead head_;
};

}  // namespace skilldiag
