#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skilldiag/graph.hpp"
#include "skilldiag/model.hpp"
#include "skilldiag/taxonomy.hpp"

namespace skilldiag {

/// Declarative run configuration, parsed from line-oriented key=value text
/// ('#' starts a comment). Unknown keys and out-of-range values are rejected
/// with messages naming the field.
struct RunConfig {
  // Model.
  BaseModel base_model = BaseModel::kMf;
  int embed_dim = 32;   // d; --paper-scale restores 256
  int hidden_dim = 32;  // d_h
  int d_z = 0;          // 0 = take the taxonomy's atomic count
  int gcn_layers = 2;
  Activation ngcf_activation = Activation::kLeakyRelu;
  double leaky_slope = 0.2;
  Activation encoder_activation = Activation::kTanh;
  OutputActivation output_activation = OutputActivation::kSigmoid;

  // Objective.
  double learning_rate = 1e-3;
  double lambda = 1e-3;
  double tau = 0.2;
  double epsilon = 0.1;

  // Training loop.
  int batch_size = 256;
  int epochs = 100;
  int patience = 10;
  std::uint64_t seed = 42;
  std::vector<double> lr_grid;  // optional sweep; best val AUC wins

  // Ablations and variant switches.
  bool disable_hd = false;
  bool disable_sa = false;
  bool disable_cl = false;
  bool disable_id = false;
  bool attention_cross_side = false;
  bool double_noise = false;
  bool freeze_base = false;
  bool monotonic_head = true;
  EdgeRule edge_rule = EdgeRule::kMatchOnly;

  // Evaluation protocol.
  int eval_negatives = 25;
  std::vector<int> eval_ks = {5, 10};

  // Synthetic data generation.
  int gen_candidates = 200;
  int gen_jobs = 400;
  std::vector<int> gen_levels = {3, 10, 30};
  double gen_density = 0.075;

  static RunConfig parse_file(const std::string& path);
  void apply(const std::string& key, const std::string& value);
  /// Throws ValidationError naming the offending field. When a taxonomy is
  /// given, also checks d_z against its atomic count.
  void validate(const SkillTaxonomy* taxonomy = nullptr) const;

  /// Restores the full-scale dimensions (d = d_h = 256, lr = 1e-4).
  void apply_paper_scale();

  ModelConfig model_config() const;
  std::string to_text() const;
};

const char* base_model_name(BaseModel m);
const char* activation_name(Activation a);
const char* output_activation_name(OutputActivation a);
const char* edge_rule_name(EdgeRule r);

}  // namespace skilldiag
