// Command-line front end: data generation, training, evaluation, gradient
// checking, and interpretability export.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "skilldiag/checkpoint.hpp"
#include "skilldiag/error.hpp"
#include "skilldiag/evaluate.hpp"
#include "skilldiag/profiles.hpp"
#include "skilldiag/train.hpp"

namespace fs = std::filesystem;
using namespace skilldiag;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool paper_scale = false;
};

RunConfig load_config(const GlobalArgs& args) {
  RunConfig config;
  if (!args.config_path.empty()) {
    config = RunConfig::parse_file(args.config_path);
  }
  if (args.paper_scale) config.apply_paper_scale();
  if (args.seed) config.seed = *args.seed;
  return config;
}

fs::path resolve_out_dir(const GlobalArgs& args) {
  if (const char* env = std::getenv("SKILLDIAG_OUT")) {
    if (*env) return fs::path(env);
  }
  return fs::path(args.out_dir);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError(msg("cannot create output directory ", dir.string()));
  }
}

int cmd_gen_data(const GlobalArgs& args) {
  RunConfig config = load_config(args);
  config.validate();
  const fs::path out = resolve_out_dir(args);
  ensure_dir(out);

  SkillTaxonomy taxonomy = SkillTaxonomy::balanced(config.gen_levels);
  Rng rng(config.seed);
  SyntheticData data = generate_synthetic(
      config.gen_candidates, config.gen_jobs, taxonomy, config.gen_density, rng);
  Rng split_rng = rng.fork(17);
  auto splits = split_records(data.records.size(), {7, 1, 2}, split_rng);
  InteractionDataset dataset(data.records, splits, config.gen_candidates,
                             config.gen_jobs);

  taxonomy.save((out / datafiles::kTaxonomy).string());
  dataset.save((out / datafiles::kInteractions).string(),
               (out / datafiles::kSplits).string());
  data.qmatrix.save((out / datafiles::kQMatrix).string());
  data.truth.save((out / datafiles::kProficiency).string(),
                  (out / datafiles::kRequirements).string());

  const auto counts = dataset.behavior_counts();
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  std::cout << "generated " << total << " interactions ("
            << config.gen_candidates << " candidates, " << config.gen_jobs
            << " jobs, " << taxonomy.atomic_count() << " atomic skills)\n";
  for (int b = 0; b < kNumBehaviors; ++b) {
    std::cout << "  " << behavior_name(b) << ": " << counts[b] << "\n";
  }
  std::cout << "  train/valid/test: " << dataset.count(Split::kTrain) << "/"
            << dataset.count(Split::kValid) << "/"
            << dataset.count(Split::kTest) << "\n";
  std::cout << "files written to " << out.string() << "\n";
  return kExitOk;
}

EvalReport eval_checkpoint(SkillDiagModel& model, const RunConfig& config,
                           const DataBundle& data, Split split,
                           std::uint64_t seed) {
  std::optional<BipartiteGraph> graph;
  if (model.needs_graph()) {
    graph =
        BipartiteGraph::build(data.dataset, config.edge_rule, Split::kTrain);
  }
  NoGradGuard no_grad;
  PropagatedTables tables = model.propagate(graph ? &*graph : nullptr);
  ModelScorer scorer(model, tables, data.qmatrix);
  Rng rng(seed);
  return evaluate(scorer, data.dataset, split,
                  {config.eval_ks, config.eval_negatives}, rng);
}

int cmd_train(const GlobalArgs& args, const std::string& data_dir,
              int repeat) {
  RunConfig config = load_config(args);
  DataBundle data = load_data_dir(data_dir);
  config.validate(&data.taxonomy);
  const fs::path out = resolve_out_dir(args);
  ensure_dir(out);

  std::vector<double> lrs = config.lr_grid;
  if (lrs.empty()) lrs = {config.learning_rate};

  std::vector<EvalReport> test_reports;
  for (int run = 0; run < repeat; ++run) {
    RunConfig run_config = config;
    run_config.seed = config.seed + static_cast<std::uint64_t>(run);

    TrainResult best_result;
    double best_grid_auc = -1.0;
    double best_lr = lrs.front();
    for (std::size_t g = 0; g < lrs.size(); ++g) {
      RunConfig grid_config = run_config;
      grid_config.learning_rate = lrs[g];
      std::string log_name = "train_log";
      if (repeat > 1) log_name += msg("_seed", run_config.seed);
      if (lrs.size() > 1) log_name += msg("_lr", g);
      std::ofstream log((out / (log_name + ".tsv")).string());
      TrainResult result = train_model(grid_config, data, &log);
      std::cout << "run seed=" << run_config.seed << " lr=" << lrs[g]
                << ": best val auc=" << result.best_val_auc << " at epoch "
                << result.best_epoch << "\n";
      if (result.best_val_auc > best_grid_auc) {
        best_grid_auc = result.best_val_auc;
        best_lr = lrs[g];
        best_result = std::move(result);
      }
    }
    if (lrs.size() > 1) {
      std::cout << "selected lr=" << best_lr << " by validation auc\n";
    }

    std::string ckpt_name = repeat > 1
                                ? msg("checkpoint_seed", run_config.seed, ".json")
                                : std::string("checkpoint.json");
    const fs::path ckpt_path = out / ckpt_name;
    save_checkpoint(best_result.best, ckpt_path.string());
    std::cout << "checkpoint written to " << ckpt_path.string() << "\n";

    auto model = restore_model(best_result.best, data.taxonomy);
    EvalReport report = eval_checkpoint(*model, best_result.best.config, data,
                                        Split::kTest, run_config.seed);
    std::cout << "test metrics (seed " << run_config.seed << "):\n"
              << report.to_text();
    test_reports.push_back(report);
  }

  if (repeat > 1) {
    auto mean_std = [&](auto getter) {
      double mean = 0.0;
      for (const auto& r : test_reports) mean += getter(r);
      mean /= static_cast<double>(test_reports.size());
      double var = 0.0;
      for (const auto& r : test_reports) {
        const double d = getter(r) - mean;
        var += d * d;
      }
      var /= static_cast<double>(test_reports.size());
      return std::pair<double, double>(mean, std::sqrt(var));
    };
    std::cout << "aggregate over " << repeat << " seeds (mean±std):\n";
    auto [am, as] = mean_std([](const EvalReport& r) { return r.auc; });
    std::cout << "auc=" << am << "±" << as << "\n";
    for (int k : config.eval_ks) {
      auto [hm, hs] = mean_std([k](const EvalReport& r) { return r.hr.at(k); });
      auto [nm, ns] =
          mean_std([k](const EvalReport& r) { return r.ndcg.at(k); });
      std::cout << "hr@" << k << "=" << hm << "±" << hs << "\n";
      std::cout << "ndcg@" << k << "=" << nm << "±" << ns << "\n";
    }
  }
  return kExitOk;
}

int cmd_eval(const GlobalArgs& args, const std::string& checkpoint_path,
             const std::string& data_dir) {
  if (!fs::exists(checkpoint_path)) {
    throw ValidationError(
        msg("checkpoint file ", checkpoint_path, " does not exist"));
  }
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  DataBundle data = load_data_dir(data_dir);
  auto model = restore_model(ckpt, data.taxonomy);
  const std::uint64_t seed = args.seed ? *args.seed : ckpt.config.seed;
  EvalReport report =
      eval_checkpoint(*model, ckpt.config, data, Split::kTest, seed);
  const std::string text = report.to_text();
  std::cout << text;
  const fs::path out = resolve_out_dir(args);
  ensure_dir(out);
  std::ofstream file((out / "metrics.txt").string());
  file << text;
  return kExitOk;
}

int cmd_grad_check(double tolerance, const std::string& corrupt) {
  GradCheckOptions options;
  options.corrupt_param = corrupt;
  GradCheckReport report = run_toy_grad_check(tolerance, options);
  print_report(report, std::cout);
  return report.pass ? kExitOk : kExitRuntime;
}

int cmd_export_profiles(const GlobalArgs& args,
                        const std::string& checkpoint_path,
                        const std::string& data_dir,
                        const std::vector<int>& candidates,
                        const std::vector<int>& jobs, bool chart) {
  if (!fs::exists(checkpoint_path)) {
    throw ValidationError(
        msg("checkpoint file ", checkpoint_path, " does not exist"));
  }
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  DataBundle data = load_data_dir(data_dir);
  auto model = restore_model(ckpt, data.taxonomy);
  std::optional<BipartiteGraph> graph;
  if (model->needs_graph()) {
    graph = BipartiteGraph::build(data.dataset, ckpt.config.edge_rule,
                                  Split::kTrain);
  }
  NoGradGuard no_grad;
  PropagatedTables tables = model->propagate(graph ? &*graph : nullptr);

  const fs::path out = resolve_out_dir(args);
  ensure_dir(out);
  std::vector<SkillProfile> cand_profiles, job_profiles;
  for (int id : candidates) {
    SkillProfile p = export_profile(*model, tables, Side::kCandidate, id);
    const fs::path path = out / msg("profile_candidate_", id, ".tsv");
    write_profile(path.string(), p, data.taxonomy);
    std::cout << "wrote " << path.string() << "\n";
    cand_profiles.push_back(std::move(p));
  }
  for (int id : jobs) {
    SkillProfile p = export_profile(*model, tables, Side::kJob, id);
    const fs::path path = out / msg("profile_job_", id, ".tsv");
    write_profile(path.string(), p, data.taxonomy);
    std::cout << "wrote " << path.string() << "\n";
    job_profiles.push_back(std::move(p));
  }
  if (chart) {
    if (cand_profiles.empty() || job_profiles.empty()) {
      throw ValidationError(
          "chart output needs at least one candidate and one job id");
    }
    const fs::path path =
        out / msg("profile_chart_c", cand_profiles[0].entity, "_j",
                  job_profiles[0].entity, ".svg");
    write_profile_chart(path.string(), cand_profiles[0], job_profiles[0],
                        data.taxonomy);
    std::cout << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical skill-diagnosis job recommender"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "Run configuration file");
  app.add_option("--seed", args.seed, "Override the configured seed");
  app.add_option("--out", args.out_dir,
                 "Output directory (SKILLDIAG_OUT overrides)");
  app.add_flag("--paper-scale", args.paper_scale,
               "Use the full-scale dimensions (d = d_h = 256)");

  auto* gen = app.add_subcommand("gen-data", "Generate a planted dataset");
  gen->fallthrough();

  auto* train = app.add_subcommand("train", "Train a model");
  train->fallthrough();
  std::string train_data;
  int repeat = 1;
  train->add_option("--data", train_data, "Data directory")->required();
  train->add_option("--repeat", repeat, "Train this many seeds")
      ->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->fallthrough();
  std::string eval_ckpt, eval_data;
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  eval->add_option("--data", eval_data, "Data directory")->required();

  auto* gc = app.add_subcommand("grad-check",
                                "Finite-difference check on a toy instance");
  gc->fallthrough();
  double tolerance = 1e-4;
  std::string corrupt;
  gc->add_option("--tolerance", tolerance, "Max relative error");
  gc->add_option("--corrupt", corrupt,
                 "Test hook: corrupt this parameter's analytic gradient");

  auto* prof = app.add_subcommand("export-profiles",
                                  "Export per-level skill profiles");
  prof->fallthrough();
  std::string prof_ckpt, prof_data;
  std::vector<int> prof_cands, prof_jobs;
  bool chart = false;
  prof->add_option("--checkpoint", prof_ckpt, "Checkpoint file")->required();
  prof->add_option("--data", prof_data, "Data directory")->required();
  prof->add_option("--candidates", prof_cands, "Candidate ids");
  prof->add_option("--jobs", prof_jobs, "Job ids");
  prof->add_flag("--chart", chart, "Also emit an SVG bar chart");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_data(args);
    if (train->parsed()) return cmd_train(args, train_data, repeat);
    if (eval->parsed()) return cmd_eval(args, eval_ckpt, eval_data);
    if (gc->parsed()) return cmd_grad_check(tolerance, corrupt);
    if (prof->parsed()) {
      return cmd_export_profiles(args, prof_ckpt, prof_data, prof_cands,
                                 prof_jobs, chart);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
