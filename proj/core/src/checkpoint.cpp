#include "skilldiag/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "skilldiag/error.hpp"

namespace skilldiag {

namespace {

using nlohmann::json;

}  // namespace

Checkpoint snapshot_model(SkillDiagModel& model, const RunConfig& config,
                          int epoch, double best_validation_auc) {
  Checkpoint ckpt;
  ckpt.config = config;
  ckpt.epoch = epoch;
  ckpt.best_validation_auc = best_validation_auc;
  ckpt.num_candidates = model.num_candidates();
  ckpt.num_jobs = model.num_jobs();
  for (auto& [name, tensor] : model.state_tensors()) {
    // Deep copy so later training steps do not mutate the snapshot.
    ckpt.tensors.emplace_back(
        name, Tensor::leaf(tensor.shape(), tensor.values()));
  }
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  json doc;
  doc["format"] = "skilldiag-checkpoint-v1";
  doc["config"] = ckpt.config.to_text();
  doc["epoch"] = ckpt.epoch;
  doc["best_validation_auc"] = ckpt.best_validation_auc;
  doc["num_candidates"] = ckpt.num_candidates;
  doc["num_jobs"] = ckpt.num_jobs;
  json tensors = json::object();
  for (const auto& [name, tensor] : ckpt.tensors) {
    json entry;
    entry["shape"] = tensor.shape();
    entry["values"] = tensor.values();
    tensors[name] = std::move(entry);
  }
  doc["tensors"] = std::move(tensors);
  std::ofstream out(path);
  if (!out) throw IoError(msg("cannot write checkpoint file ", path));
  out << doc.dump();
  if (!out) throw IoError(msg("failed writing checkpoint file ", path));
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(msg("cannot open checkpoint file ", path));
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError(msg("checkpoint ", path, " is corrupt: ", e.what()));
  }
  try {
    if (doc.at("format").get<std::string>() != "skilldiag-checkpoint-v1") {
      throw ValidationError(
          msg("checkpoint ", path, " has an unknown format tag"));
    }
    Checkpoint ckpt;
    RunConfig config;
    std::istringstream cfg(doc.at("config").get<std::string>());
    std::string line;
    while (std::getline(cfg, line)) {
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      config.apply(line.substr(0, eq), line.substr(eq + 1));
    }
    ckpt.config = config;
    ckpt.epoch = doc.at("epoch").get<int>();
    ckpt.best_validation_auc = doc.at("best_validation_auc").get<double>();
    ckpt.num_candidates = doc.at("num_candidates").get<int>();
    ckpt.num_jobs = doc.at("num_jobs").get<int>();
    for (const auto& [name, entry] : doc.at("tensors").items()) {
      Shape shape = entry.at("shape").get<Shape>();
      std::vector<double> values =
          entry.at("values").get<std::vector<double>>();
      ckpt.tensors.emplace_back(
          name, Tensor::leaf(std::move(shape), std::move(values)));
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw ValidationError(msg("checkpoint ", path, " is corrupt: ", e.what()));
  } catch (const ShapeError& e) {
    throw ValidationError(msg("checkpoint ", path, " is corrupt: ", e.what()));
  }
}

std::unique_ptr<SkillDiagModel> restore_model(const Checkpoint& ckpt,
                                              const SkillTaxonomy& taxonomy) {
  ckpt.config.validate(&taxonomy);
  Rng init_rng(ckpt.config.seed);
  auto model = std::make_unique<SkillDiagModel>(
      ckpt.config.model_config(), ckpt.num_candidates, ckpt.num_jobs, taxonomy,
      init_rng);
  model->load_state(ckpt.tensors);
  return model;
}

}  // namespace skilldiag
