#include "skilldiag/train.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>

#include "skilldiag/error.hpp"

namespace skilldiag {

namespace fs = std::filesystem;

DataBundle load_data_dir(const std::string& dir) {
  const fs::path root(dir);
  SkillTaxonomy taxonomy =
      SkillTaxonomy::load((root / datafiles::kTaxonomy).string());
  InteractionDataset dataset = InteractionDataset::load(
      (root / datafiles::kInteractions).string(),
      (root / datafiles::kSplits).string());
  QMatrix qmatrix = QMatrix::load((root / datafiles::kQMatrix).string(),
                                  taxonomy, dataset.num_jobs());
  std::optional<PlantedGroundTruth> truth;
  const fs::path prof = root / datafiles::kProficiency;
  const fs::path req = root / datafiles::kRequirements;
  if (fs::exists(prof) && fs::exists(req)) {
    truth = PlantedGroundTruth::load(prof.string(), req.string());
  }
  if (qmatrix.num_jobs() < dataset.num_jobs()) {
    throw ValidationError(
        msg("data: q-matrix covers ", qmatrix.num_jobs(), " jobs but ",
            "interactions reference ", dataset.num_jobs()));
  }
  return DataBundle{std::move(taxonomy), std::move(qmatrix),
                    std::move(dataset), std::move(truth)};
}

namespace {

void log_epoch(std::ostream* os, const EpochLog& entry, bool with_cl) {
  if (!os) return;
  (*os) << entry.epoch << '\t' << entry.main_loss << '\t';
  if (with_cl) (*os) << entry.cl_loss << '\t';
  (*os) << entry.val_auc << '\t' << entry.val_hr5 << '\t' << entry.val_ndcg5
        << '\n';
  os->flush();
}

}  // namespace

TrainResult train_model(const RunConfig& config, const DataBundle& data,
                        std::ostream* log_stream) {
  config.validate(&data.taxonomy);

  Rng root_rng(config.seed);
  Rng init_rng = root_rng.fork(1);
  Rng shuffle_rng = root_rng.fork(2);
  Rng noise_rng = root_rng.fork(3);
  Rng eval_rng = root_rng.fork(4);

  SkillDiagModel model(config.model_config(), data.dataset.num_candidates(),
                       data.dataset.num_jobs(), data.taxonomy, init_rng);
  model.project_monotonic_head();

  std::optional<BipartiteGraph> graph;
  if (model.needs_graph()) {
    graph = BipartiteGraph::build(data.dataset, config.edge_rule,
                                  Split::kTrain);
  }
  const BipartiteGraph* graph_ptr = graph ? &*graph : nullptr;

  const std::vector<std::size_t> train_idx =
      data.dataset.indices(Split::kTrain);
  if (train_idx.empty()) throw ContractError("train: empty training split");

  // Validation lists are fixed for the whole run so early stopping compares
  // like with like across epochs.
  std::size_t val_skipped = 0;
  const std::vector<EvalList> val_lists = build_eval_lists(
      data.dataset, Split::kValid, config.eval_negatives, eval_rng,
      &val_skipped);

  Adam optimizer(AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8});
  ParameterMap params = model.parameters();

  if (log_stream) {
    (*log_stream) << "# epoch\tmain_loss\t";
    if (!config.disable_cl) (*log_stream) << "cl_loss\t";
    (*log_stream) << "val_auc\tval_hr5\tval_ndcg5\n";
  }

  TrainResult result;
  double best_auc = -1.0;
  int best_epoch = 0;
  int since_best = 0;
  std::vector<std::size_t> order = train_idx;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double main_sum = 0.0, cl_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      BatchData batch;
      batch.candidates.reserve(stop - start);
      batch.jobs.reserve(stop - start);
      batch.labels.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        const auto& rec = data.dataset.record(order[i]);
        batch.candidates.push_back(rec.candidate);
        batch.jobs.push_back(rec.job);
        batch.labels.push_back(rec.behavior);
      }
      ForwardResult fwd =
          model.forward_batch(graph_ptr, data.qmatrix, batch, noise_rng);
      fwd.total.backward();
      optimizer.step(params);
      model.project_monotonic_head();
      main_sum += fwd.main_loss.item();
      if (!config.disable_cl) cl_sum += fwd.cl_loss.item();
      ++batches;
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.main_loss = main_sum / static_cast<double>(batches);
    entry.cl_loss = config.disable_cl
                        ? 0.0
                        : cl_sum / static_cast<double>(batches);
    if (!val_lists.empty()) {
      PropagatedTables tables = [&] {
        NoGradGuard no_grad;
        return model.propagate(graph_ptr);
      }();
      ModelScorer scorer(model, tables, data.qmatrix);
      EvalReport report =
          evaluate_lists(scorer, val_lists, config.eval_ks, val_skipped);
      entry.val_auc = report.auc;
      const int k0 = config.eval_ks.front();
      entry.val_hr5 = report.hr.at(k0);
      entry.val_ndcg5 = report.ndcg.at(k0);
    }
    log_epoch(log_stream, entry, !config.disable_cl);
    result.log.push_back(entry);
    result.final_train_main_loss = entry.main_loss;

    if (val_lists.empty()) continue;  // no early-stopping signal
    if (entry.val_auc > best_auc) {
      best_auc = entry.val_auc;
      best_epoch = epoch;
      since_best = 0;
      result.best = snapshot_model(model, config, epoch, best_auc);
    } else {
      ++since_best;
      if (since_best >= config.patience) break;
    }
  }
  result.final = snapshot_model(model, config, result.log.empty() ? 0 : result.log.back().epoch,
                                std::max(best_auc, 0.0));
  if (result.best.tensors.empty()) {
    // No validation signal at all; keep the final state.
    result.best = result.final;
  }
  result.best_epoch = best_epoch;
  result.best_val_auc = std::max(best_auc, 0.0);
  return result;
}

GradCheckReport run_toy_grad_check(double tolerance,
                                   const GradCheckOptions& options) {
  // Small enough that every parameter element can be checked, big enough to
  // exercise multi-level masks, attention, and the contrastive path.
  const SkillTaxonomy taxonomy = SkillTaxonomy::balanced({3, 5, 10});
  Rng data_rng(2024);
  SyntheticData data = generate_synthetic(8, 12, taxonomy, 0.5, data_rng);

  ModelConfig mc;
  mc.base_model = BaseModel::kMf;
  mc.embed_dim = 16;
  mc.hidden_dim = 16;
  mc.output_activation = OutputActivation::kSoftmax;
  mc.lambda = 0.5;  // keep the contrastive gradients well inside the check
  mc.tau = 0.2;
  mc.epsilon = 0.1;

  Rng init_rng(7);
  SkillDiagModel model(mc, 8, 12, taxonomy, init_rng);

  BatchData batch;
  for (const auto& rec : data.records) {
    batch.candidates.push_back(rec.candidate);
    batch.jobs.push_back(rec.job);
    batch.labels.push_back(rec.behavior);
  }

  ParameterMap params = model.parameters();
  const auto forward = [&]() {
    // The noise draw must be identical on every call for central
    // differences to see a deterministic function.
    Rng noise_rng(99);
    return model.forward_batch(nullptr, data.qmatrix, batch, noise_rng).total;
  };
  return finite_diff_check(params, forward, tolerance, options);
}

}  // namespace skilldiag
