#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skilldiag/checkpoint.hpp"
#include "skilldiag/config.hpp"
#include "skilldiag/evaluate.hpp"
#include "skilldiag/grad_check.hpp"
#include "skilldiag/interactions.hpp"
#include "skilldiag/qmatrix.hpp"
#include "skilldiag/synthetic.hpp"
#include "skilldiag/taxonomy.hpp"

namespace skilldiag {

/// A loaded data directory: taxonomy plus interactions plus tags, with the
/// planted ground truth when present.
struct DataBundle {
  SkillTaxonomy taxonomy;
  QMatrix qmatrix;
  InteractionDataset dataset;
  std::optional<PlantedGroundTruth> truth;
};

/// File names inside a data directory.
namespace datafiles {
inline constexpr const char* kTaxonomy = "taxonomy.tsv";
inline constexpr const char* kInteractions = "interactions.tsv";
inline constexpr const char* kQMatrix = "qmatrix.tsv";
inline constexpr const char* kSplits = "splits.tsv";
inline constexpr const char* kProficiency = "ground_truth_proficiency.tsv";
inline constexpr const char* kRequirements = "ground_truth_requirements.tsv";
}  // namespace datafiles

DataBundle load_data_dir(const std::string& dir);

struct EpochLog {
  int epoch = 0;
  double main_loss = 0.0;
  double cl_loss = 0.0;
  double val_auc = 0.0;
  double val_hr5 = 0.0;
  double val_ndcg5 = 0.0;
};

struct TrainResult {
  Checkpoint best;    // highest validation AUC
  Checkpoint final;   // state after the last epoch
  std::vector<EpochLog> log;
  int best_epoch = 0;
  double best_val_auc = 0.0;
  double final_train_main_loss = 0.0;
};

/// Trains under `config`, tracking validation AUC per epoch on fixed lists,
/// keeping the best-validation snapshot and stopping after `patience` epochs
/// without improvement. `log_stream`, when set, receives one tab-separated
/// line per epoch (cl_loss column omitted under disable_cl).
TrainResult train_model(const RunConfig& config, const DataBundle& data,
                        std::ostream* log_stream);

/// Builds the fixed toy instance (8 candidates, 12 jobs, 3 levels, d_z=10,
/// d=d_h=16) and checks every parameter group of the full objective against
/// central finite differences.
GradCheckReport run_toy_grad_check(double tolerance,
                                   const GradCheckOptions& options = {});

}  // namespace skilldiag
