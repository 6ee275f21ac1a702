#pragma once

#include <memory>
#include <string>

#include "skilldiag/config.hpp"
#include "skilldiag/model.hpp"

namespace skilldiag {

/// Everything needed to resume or evaluate a trained model.
struct Checkpoint {
  RunConfig config;
  int epoch = 0;
  double best_validation_auc = 0.0;
  int num_candidates = 0;
  int num_jobs = 0;
  ParameterMap tensors;
};

Checkpoint snapshot_model(SkillDiagModel& model, const RunConfig& config,
                          int epoch, double best_validation_auc);

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);

/// Loads and validates a checkpoint file; throws ValidationError on
/// missing/corrupt content.
Checkpoint load_checkpoint(const std::string& path);

/// Rebuilds the model a checkpoint was saved from and restores its tensors.
std::unique_ptr<SkillDiagModel> restore_model(const Checkpoint& checkpoint,
                                              const SkillTaxonomy& taxonomy);

}  // namespace skilldiag
