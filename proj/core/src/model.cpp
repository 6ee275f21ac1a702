#include "skilldiag/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "skilldiag/error.hpp"

namespace skilldiag {

const char* side_name(Side side) {
  return side == Side::kCandidate ? "candidate" : "job";
}

namespace {

// Deduplicates ids, producing the unique list plus a per-position remap.
void unique_ids(const std::vector<int>& ids, std::vector<int>& unique,
                std::vector<int>& remap) {
  unique.clear();
  remap.resize(ids.size());
  std::unordered_map<int, int> seen;
  seen.reserve(ids.size() * 2);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, inserted] =
        seen.emplace(ids[i], static_cast<int>(unique.size()));
    if (inserted) unique.push_back(ids[i]);
    remap[i] = it->second;
  }
}

EncoderMlp make_encoder(int d_h, int d_z, Rng& rng) {
  EncoderMlp enc;
  enc.w1 = xavier_init(d_h, d_h, rng);
  enc.b1 = xavier_init_shaped({static_cast<std::size_t>(d_h)}, d_h, d_h, rng);
  enc.w2 = xavier_init(d_h, d_z, rng);
  enc.b2 = xavier_init_shaped({static_cast<std::size_t>(d_z)}, d_h, d_z, rng);
  return enc;
}

}  // namespace

SkillDiagModel::SkillDiagModel(const ModelConfig& config, int num_candidates,
                               int num_jobs, const SkillTaxonomy& taxonomy,
                               Rng& init_rng)
    : config_(config),
      num_candidates_(num_candidates),
      num_jobs_(num_jobs),
      taxonomy_levels_(taxonomy.levels()),
      levels_(config.disable_hd ? 1 : taxonomy.levels()),
      d_z_(taxonomy.atomic_count()) {
  if (num_candidates < 1 || num_jobs < 1) {
    throw ContractError("model: needs at least one candidate and one job");
  }
  if (config.embed_dim < 1 || config.hidden_dim < 1) {
    throw ContractError("model: embedding dimensions must be positive");
  }
  const int d = config.embed_dim;
  tables_.candidates = xavier_init(num_candidates, d, init_rng,
                                   /*requires_grad=*/!config.freeze_base);
  tables_.jobs =
      xavier_init(num_jobs, d, init_rng, /*requires_grad=*/!config.freeze_base);

  propagated_width_ = d;
  if (config.base_model == BaseModel::kNgcf) {
    if (config.gcn_layers < 1) {
      throw ContractError("model: ngcf needs at least one layer");
    }
    for (int k = 0; k < config.gcn_layers; ++k) {
      ngcf_.w1.push_back(xavier_init(d, d, init_rng));
      ngcf_.w2.push_back(xavier_init(d, d, init_rng));
    }
    propagated_width_ = (config.gcn_layers + 1) * d;
  }

  const int d_h = config.hidden_dim;
  for (int l = 0; l < levels_; ++l) {
    proj_cand_.push_back(xavier_init(propagated_width_, d_h, init_rng));
  }
  for (int l = 0; l < levels_; ++l) {
    proj_job_.push_back(xavier_init(propagated_width_, d_h, init_rng));
  }
  for (int l = 0; l < levels_; ++l) {
    enc_cand_.push_back(make_encoder(d_h, d_z_, init_rng));
  }
  for (int l = 0; l < levels_; ++l) {
    enc_job_.push_back(make_encoder(d_h, d_z_, init_rng));
  }
  if (!config.disable_sa) {
    attn_cand_.wq = xavier_init(d_z_, d_z_, init_rng);
    attn_cand_.wk = xavier_init(d_z_, d_z_, init_rng);
    attn_cand_.wv = xavier_init(d_z_, d_z_, init_rng);
    attn_job_.wq = xavier_init(d_z_, d_z_, init_rng);
    attn_job_.wk = xavier_init(d_z_, d_z_, init_rng);
    attn_job_.wv = xavier_init(d_z_, d_z_, init_rng);
  }
  const int head_in = (config.disable_id ? 2 : 1) * levels_ * d_z_;
  head_.w1 = xavier_init(head_in, d_h, init_rng);
  head_.b1 =
      xavier_init_shaped({static_cast<std::size_t>(d_h)}, head_in, d_h, init_rng);
  head_.w2 = xavier_init(d_h, kNumClasses, init_rng);
  head_.b2 = xavier_init_shaped({static_cast<std::size_t>(kNumClasses)}, d_h,
                                kNumClasses, init_rng);
  head_.activation = config.output_activation;
  if (config.monotonic_head && !config.disable_id) {
    // Projected optimization starts inside the feasible set: magnitudes of
    // the Xavier draw for the first layer, sorted class slopes for the
    // second. Starting on the boundary (half the entries clipped to zero)
    // weakens the early orientation pressure on the prototypes.
    for (double& w : head_.w1.mutable_values()) w = std::fabs(w);
    project_monotonic_head();
  }
}

ParameterMap SkillDiagModel::parameters() {
  ParameterMap params;
  if (!config_.freeze_base) {
    params.emplace_back("embed.candidates", tables_.candidates);
    params.emplace_back("embed.jobs", tables_.jobs);
  }
  for (std::size_t k = 0; k < ngcf_.w1.size(); ++k) {
    params.emplace_back(msg("ngcf.", k, ".w1"), ngcf_.w1[k]);
    params.emplace_back(msg("ngcf.", k, ".w2"), ngcf_.w2[k]);
  }
  for (int l = 0; l < levels_; ++l) {
    params.emplace_back(msg("proj.candidate.", l), proj_cand_[l]);
    params.emplace_back(msg("proj.job.", l), proj_job_[l]);
  }
  auto add_encoder = [&params](const char* side, int l, const EncoderMlp& e) {
    params.emplace_back(msg("enc.", side, ".", l, ".w1"), e.w1);
    params.emplace_back(msg("enc.", side, ".", l, ".b1"), e.b1);
    params.emplace_back(msg("enc.", side, ".", l, ".w2"), e.w2);
    params.emplace_back(msg("enc.", side, ".", l, ".b2"), e.b2);
  };
  for (int l = 0; l < levels_; ++l) add_encoder("candidate", l, enc_cand_[l]);
  for (int l = 0; l < levels_; ++l) add_encoder("job", l, enc_job_[l]);
  if (!config_.disable_sa) {
    params.emplace_back("attn.candidate.wq", attn_cand_.wq);
    params.emplace_back("attn.candidate.wk", attn_cand_.wk);
    params.emplace_back("attn.candidate.wv", attn_cand_.wv);
    params.emplace_back("attn.job.wq", attn_job_.wq);
    params.emplace_back("attn.job.wk", attn_job_.wk);
    params.emplace_back("attn.job.wv", attn_job_.wv);
  }
  params.emplace_back("head.w1", head_.w1);
  params.emplace_back("head.b1", head_.b1);
  params.emplace_back("head.w2", head_.w2);
  params.emplace_back("head.b2", head_.b2);
  return params;
}

void SkillDiagModel::project_monotonic_head() {
  if (!config_.monotonic_head || config_.disable_id) return;
  // First layer nonnegative, so hidden channels are nondecreasing in every
  // match-distance component.
  for (double& w : head_.w1.mutable_values()) {
    if (w < 0.0) w = 0.0;
  }
  // Second layer: per hidden unit, class slopes ascend with behavior
  // intensity (isotonic projection via pool-adjacent-violators). Every
  // higher-minus-lower logit gap is then nondecreasing in each distance
  // component, which pins the orientation of the prototypes.
  auto& w2 = head_.w2.mutable_values();
  const std::size_t classes = kNumClasses;
  for (std::size_t k = 0; k * classes < w2.size(); ++k) {
    double* row = w2.data() + k * classes;
    double level[kNumClasses];
    int width[kNumClasses];
    int blocks = 0;
    for (std::size_t i = 0; i < classes; ++i) {
      level[blocks] = row[i];
      width[blocks] = 1;
      ++blocks;
      while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
        const double merged = (level[blocks - 2] * width[blocks - 2] +
                               level[blocks - 1] * width[blocks - 1]) /
                              (width[blocks - 2] + width[blocks - 1]);
        width[blocks - 2] += width[blocks - 1];
        level[blocks - 2] = merged;
        --blocks;
      }
    }
    std::size_t i = 0;
    for (int b = 0; b < blocks; ++b) {
      for (int t = 0; t < width[b]; ++t) row[i++] = level[b];
    }
  }
}

ParameterMap SkillDiagModel::state_tensors() {
  ParameterMap state = parameters();
  if (config_.freeze_base) {
    state.emplace_back("embed.candidates", tables_.candidates);
    state.emplace_back("embed.jobs", tables_.jobs);
  }
  return state;
}

void SkillDiagModel::load_state(const ParameterMap& state) {
  ParameterMap mine = state_tensors();
  if (state.size() != mine.size()) {
    throw ValidationError(msg("checkpoint has ", state.size(),
                              " tensors, model expects ", mine.size()));
  }
  std::unordered_map<std::string, const Tensor*> by_name;
  for (const auto& [name, tensor] : state) by_name[name] = &tensor;
  for (auto& [name, tensor] : mine) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw ValidationError(msg("checkpoint is missing tensor '", name, "'"));
    }
    const Tensor& src = *it->second;
    if (src.shape() != tensor.shape()) {
      throw ValidationError(msg("checkpoint tensor '", name, "' has shape ",
                                shape_str(src.shape()), ", model expects ",
                                shape_str(tensor.shape())));
    }
    tensor.mutable_values() = src.values();
    tensor.zero_grad();
  }
}

PropagatedTables SkillDiagModel::propagate(const BipartiteGraph* graph) const {
  switch (config_.base_model) {
    case BaseModel::kMf:
      return embed_mf(tables_);
    case BaseModel::kNgcf:
      if (!graph) throw ContractError("model: ngcf propagation needs a graph");
      return propagate_ngcf(*graph, tables_, ngcf_, config_.ngcf_activation,
                            config_.leaky_slope);
    case BaseModel::kLightGcn:
      if (!graph) {
        throw ContractError("model: lightgcn propagation needs a graph");
      }
      return propagate_lightgcn(*graph, tables_, config_.gcn_layers);
  }
  throw ContractError("model: unknown base model");
}

std::vector<Tensor> SkillDiagModel::prototype_stage(
    const Tensor& table, Side side, const std::vector<int>& ids) const {
  Tensor embedded = rows(table, ids);
  const auto& projectors = side == Side::kCandidate ? proj_cand_ : proj_job_;
  const auto& encoders = side == Side::kCandidate ? enc_cand_ : enc_job_;
  return encode_prototypes(embedded, projectors, encoders,
                           config_.encoder_activation);
}

std::vector<Tensor> SkillDiagModel::enhanced_prototypes(
    const PropagatedTables& tables, Side side,
    const std::vector<int>& ids) const {
  const Tensor& table =
      side == Side::kCandidate ? tables.candidates : tables.jobs;
  std::vector<Tensor> protos = prototype_stage(table, side, ids);
  if (config_.disable_sa) return protos;
  const AttentionParams& attn =
      side == Side::kCandidate ? attn_cand_ : attn_job_;
  return level_attention(protos, attn);
}

Tensor SkillDiagModel::level_mask_tensor(const QMatrix& q,
                                         const std::vector<int>& jobs,
                                         int pipeline_level) const {
  // Under disable_hd the single pipeline level carries the atomic masks.
  const int tax_level =
      config_.disable_hd ? taxonomy_levels_ : pipeline_level + 1;
  std::vector<double> values;
  values.reserve(jobs.size() * d_z_);
  for (int job : jobs) {
    const auto& mask = q.level_mask(job, tax_level);
    values.insert(values.end(), mask.begin(), mask.end());
  }
  return Tensor::matrix(jobs.size(), d_z_, std::move(values));
}

Tensor SkillDiagModel::predict_from_prototypes(
    const std::vector<Tensor>& cand_protos,
    const std::vector<Tensor>& job_protos, const QMatrix& q,
    const std::vector<int>& jobs) const {
  if (config_.disable_id) {
    std::vector<Tensor> direct = cand_protos;
    direct.insert(direct.end(), job_protos.begin(), job_protos.end());
    return aggregate_predict(direct, head_);
  }
  std::vector<Tensor> distances;
  distances.reserve(levels_);
  for (int l = 0; l < levels_; ++l) {
    Tensor mask = level_mask_tensor(q, jobs, l);
    distances.push_back(diagnose_level(cand_protos[l], job_protos[l], mask));
  }
  return aggregate_predict(distances, head_);
}

ForwardResult SkillDiagModel::forward_batch(const BipartiteGraph* graph,
                                            const QMatrix& q,
                                            const BatchData& batch,
                                            Rng& noise_rng) const {
  if (batch.candidates.size() != batch.jobs.size() ||
      batch.candidates.size() != batch.labels.size()) {
    throw ContractError("forward_batch: misaligned batch columns");
  }
  if (batch.candidates.empty()) {
    throw ContractError("forward_batch: empty batch");
  }
  PropagatedTables tables = propagate(graph);

  std::vector<Tensor> cand_protos, job_protos;
  Tensor cl;
  const bool want_cl = !config_.disable_cl;
  ContrastiveConfig ccfg{config_.tau, config_.epsilon, config_.double_noise};

  if (config_.attention_cross_side) {
    // Literal cross-side reading: candidate attention values come from the
    // paired job's prototypes, so everything stays per-record.
    std::vector<Tensor> zc = prototype_stage(tables.candidates,
                                             Side::kCandidate,
                                             batch.candidates);
    std::vector<Tensor> zj =
        prototype_stage(tables.jobs, Side::kJob, batch.jobs);
    if (config_.disable_sa) {
      cand_protos = zc;
      job_protos = zj;
    } else {
      cand_protos = level_attention(zc, zj, attn_cand_);
      job_protos = level_attention(zj, attn_job_);
    }
    if (want_cl) {
      Tensor cl_c = level_contrastive_loss(cand_protos, ccfg, noise_rng);
      Tensor cl_j = level_contrastive_loss(job_protos, ccfg, noise_rng);
      cl = combined_cl_loss(cl_c, cl_j);
    }
  } else {
    // Symmetric reading: prototypes depend only on the entity, so compute
    // them once per unique id and gather back per record.
    std::vector<int> uc, uj, remap_c, remap_j;
    unique_ids(batch.candidates, uc, remap_c);
    unique_ids(batch.jobs, uj, remap_j);
    std::vector<Tensor> c_enh =
        enhanced_prototypes(tables, Side::kCandidate, uc);
    std::vector<Tensor> j_enh = enhanced_prototypes(tables, Side::kJob, uj);
    if (want_cl) {
      Tensor cl_c = level_contrastive_loss(c_enh, ccfg, noise_rng);
      Tensor cl_j = level_contrastive_loss(j_enh, ccfg, noise_rng);
      cl = combined_cl_loss(cl_c, cl_j);
    }
    cand_protos.reserve(levels_);
    job_protos.reserve(levels_);
    for (int l = 0; l < levels_; ++l) {
      cand_protos.push_back(rows(c_enh[l], remap_c));
      job_protos.push_back(rows(j_enh[l], remap_j));
    }
  }

  ForwardResult result;
  result.prediction =
      predict_from_prototypes(cand_protos, job_protos, q, batch.jobs);
  result.main_loss = interaction_loss(result.prediction, batch.labels);
  if (want_cl) {
    result.cl_loss = cl;
    result.total = total_loss(result.main_loss, cl, config_.lambda);
  } else {
    result.total = result.main_loss;
  }
  return result;
}

std::vector<double> SkillDiagModel::score_pairs(
    const PropagatedTables& tables, const QMatrix& q,
    const std::vector<int>& candidates, const std::vector<int>& jobs) const {
  if (candidates.size() != jobs.size()) {
    throw ContractError("score_pairs: misaligned id lists");
  }
  if (candidates.empty()) return {};
  NoGradGuard no_grad;
  std::vector<Tensor> cand_protos, job_protos;
  if (config_.attention_cross_side) {
    std::vector<Tensor> zc =
        prototype_stage(tables.candidates, Side::kCandidate, candidates);
    std::vector<Tensor> zj = prototype_stage(tables.jobs, Side::kJob, jobs);
    if (config_.disable_sa) {
      cand_protos = zc;
      job_protos = zj;
    } else {
      cand_protos = level_attention(zc, zj, attn_cand_);
      job_protos = level_attention(zj, attn_job_);
    }
  } else {
    std::vector<int> uc, uj, remap_c, remap_j;
    unique_ids(candidates, uc, remap_c);
    unique_ids(jobs, uj, remap_j);
    std::vector<Tensor> c_enh =
        enhanced_prototypes(tables, Side::kCandidate, uc);
    std::vector<Tensor> j_enh = enhanced_prototypes(tables, Side::kJob, uj);
    for (int l = 0; l < levels_; ++l) {
      cand_protos.push_back(rows(c_enh[l], remap_c));
      job_protos.push_back(rows(j_enh[l], remap_j));
    }
  }
  Tensor y = predict_from_prototypes(cand_protos, job_protos, q, jobs);
  return match_score(y).values();
}

}  // namespace skilldiag
