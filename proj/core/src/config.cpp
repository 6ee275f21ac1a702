#include "skilldiag/config.hpp"

#include <fstream>
#include <sstream>

#include "skilldiag/error.hpp"

namespace skilldiag {

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError(msg("config: field '", key, "' expects a boolean, got '",
                            value, "'"));
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(
        msg("config: field '", key, "' expects an integer, got '", value, "'"));
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(
        msg("config: field '", key, "' expects a number, got '", value, "'"));
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Activation parse_activation(const std::string& key, const std::string& value) {
  if (value == "identity") return Activation::kIdentity;
  if (value == "leaky_relu") return Activation::kLeakyRelu;
  if (value == "tanh") return Activation::kTanh;
  if (value == "sigmoid") return Activation::kSigmoid;
  throw ValidationError(msg("config: field '", key, "' expects one of "
                            "identity|leaky_relu|tanh|sigmoid, got '",
                            value, "'"));
}

}  // namespace

const char* base_model_name(BaseModel m) {
  switch (m) {
    case BaseModel::kMf: return "mf";
    case BaseModel::kNgcf: return "ngcf";
    case BaseModel::kLightGcn: return "lightgcn";
  }
  return "?";
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kLeakyRelu: return "leaky_relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "?";
}

const char* output_activation_name(OutputActivation a) {
  return a == OutputActivation::kSigmoid ? "sigmoid" : "softmax";
}

const char* edge_rule_name(EdgeRule r) {
  return r == EdgeRule::kMatchOnly ? "match-only" : "all";
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(msg("cannot open config file ", path));
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(
          msg(path, ":", line_no, ": expected key=value, got '", line, "'"));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      config.apply(key, value);
    } catch (const ValidationError& e) {
      throw ValidationError(msg(path, ":", line_no, ": ", e.what()));
    }
  }
  return config;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
  if (key == "base_model") {
    if (value == "mf") {
      base_model = BaseModel::kMf;
    } else if (value == "ngcf") {
      base_model = BaseModel::kNgcf;
    } else if (value == "lightgcn") {
      base_model = BaseModel::kLightGcn;
    } else {
      throw ValidationError(msg(
          "config: field 'base_model' expects mf|ngcf|lightgcn, got '", value,
          "'"));
    }
  } else if (key == "d" || key == "embed_dim") {
    embed_dim = parse_int(key, value);
  } else if (key == "d_h" || key == "hidden_dim") {
    hidden_dim = parse_int(key, value);
  } else if (key == "d_z") {
    d_z = parse_int(key, value);
  } else if (key == "layers" || key == "gcn_layers") {
    gcn_layers = parse_int(key, value);
  } else if (key == "ngcf_activation") {
    ngcf_activation = parse_activation(key, value);
  } else if (key == "leaky_slope") {
    leaky_slope = parse_double(key, value);
  } else if (key == "encoder_activation") {
    encoder_activation = parse_activation(key, value);
  } else if (key == "output_activation") {
    if (value == "sigmoid") {
      output_activation = OutputActivation::kSigmoid;
    } else if (value == "softmax") {
      output_activation = OutputActivation::kSoftmax;
    } else {
      throw ValidationError(
          msg("config: field 'output_activation' expects sigmoid|softmax, "
              "got '",
              value, "'"));
    }
  } else if (key == "learning_rate" || key == "lr") {
    learning_rate = parse_double(key, value);
  } else if (key == "lambda") {
    lambda = parse_double(key, value);
  } else if (key == "tau") {
    tau = parse_double(key, value);
  } else if (key == "epsilon") {
    epsilon = parse_double(key, value);
  } else if (key == "batch_size") {
    batch_size = parse_int(key, value);
  } else if (key == "epochs") {
    epochs = parse_int(key, value);
  } else if (key == "patience") {
    patience = parse_int(key, value);
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "lr_grid") {
    lr_grid.clear();
    for (const auto& item : split_list(value)) {
      lr_grid.push_back(parse_double(key, item));
    }
  } else if (key == "disable_hd") {
    disable_hd = parse_bool(key, value);
  } else if (key == "disable_sa") {
    disable_sa = parse_bool(key, value);
  } else if (key == "disable_cl") {
    disable_cl = parse_bool(key, value);
  } else if (key == "disable_id") {
    disable_id = parse_bool(key, value);
  } else if (key == "attention_cross_side") {
    attention_cross_side = parse_bool(key, value);
  } else if (key == "double_noise") {
    double_noise = parse_bool(key, value);
  } else if (key == "freeze_base") {
    freeze_base = parse_bool(key, value);
  } else if (key == "monotonic_head") {
    monotonic_head = parse_bool(key, value);
  } else if (key == "edge_rule") {
    if (value == "match-only") {
      edge_rule = EdgeRule::kMatchOnly;
    } else if (value == "all") {
      edge_rule = EdgeRule::kAllBehaviors;
    } else {
      throw ValidationError(
          msg("config: field 'edge_rule' expects match-only|all, got '", value,
              "'"));
    }
  } else if (key == "eval_negatives") {
    eval_negatives = parse_int(key, value);
  } else if (key == "eval_ks") {
    eval_ks.clear();
    for (const auto& item : split_list(value)) {
      eval_ks.push_back(parse_int(key, item));
    }
  } else if (key == "gen_candidates") {
    gen_candidates = parse_int(key, value);
  } else if (key == "gen_jobs") {
    gen_jobs = parse_int(key, value);
  } else if (key == "gen_levels") {
    gen_levels.clear();
    for (const auto& item : split_list(value)) {
      gen_levels.push_back(parse_int(key, item));
    }
  } else if (key == "gen_density") {
    gen_density = parse_double(key, value);
  } else {
    throw ValidationError(msg("config: unknown field '", key, "'"));
  }
}

void RunConfig::validate(const SkillTaxonomy* taxonomy) const {
  if (embed_dim < 1) {
    throw ValidationError(msg("config: field 'd' must be >= 1, got ", embed_dim));
  }
  if (hidden_dim < 1) {
    throw ValidationError(
        msg("config: field 'd_h' must be >= 1, got ", hidden_dim));
  }
  if (gcn_layers < 0 ||
      (base_model == BaseModel::kNgcf && gcn_layers < 1)) {
    throw ValidationError(
        msg("config: field 'layers' invalid for base model ",
            base_model_name(base_model), ": ", gcn_layers));
  }
  if (learning_rate <= 0.0) {
    throw ValidationError(msg("config: field 'learning_rate' must be > 0, got ",
                              learning_rate));
  }
  if (lambda < 0.0) {
    throw ValidationError(
        msg("config: field 'lambda' must be >= 0, got ", lambda));
  }
  if (tau <= 0.0) {
    throw ValidationError(msg("config: field 'tau' must be > 0, got ", tau));
  }
  if (epsilon < 0.0) {
    throw ValidationError(
        msg("config: field 'epsilon' must be >= 0, got ", epsilon));
  }
  if (batch_size < 1) {
    throw ValidationError(
        msg("config: field 'batch_size' must be >= 1, got ", batch_size));
  }
  if (epochs < 1) {
    throw ValidationError(msg("config: field 'epochs' must be >= 1, got ",
                              epochs));
  }
  if (patience < 1) {
    throw ValidationError(
        msg("config: field 'patience' must be >= 1, got ", patience));
  }
  for (double lr : lr_grid) {
    if (lr <= 0.0) {
      throw ValidationError(
          msg("config: field 'lr_grid' entries must be > 0, got ", lr));
    }
  }
  if (eval_negatives < 1) {
    throw ValidationError(msg("config: field 'eval_negatives' must be >= 1, "
                              "got ",
                              eval_negatives));
  }
  if (eval_ks.empty()) {
    throw ValidationError("config: field 'eval_ks' must list at least one k");
  }
  for (int k : eval_ks) {
    if (k < 1) {
      throw ValidationError(
          msg("config: field 'eval_ks' entries must be >= 1, got ", k));
    }
  }
  if (gen_candidates < 2 || gen_jobs < 2) {
    throw ValidationError(
        "config: fields 'gen_candidates'/'gen_jobs' must be >= 2");
  }
  if (gen_levels.empty()) {
    throw ValidationError("config: field 'gen_levels' must list level sizes");
  }
  if (gen_density <= 0.0 || gen_density > 1.0) {
    throw ValidationError(
        msg("config: field 'gen_density' must be in (0,1], got ", gen_density));
  }
  if (taxonomy && d_z != 0 && d_z != taxonomy->atomic_count()) {
    throw ValidationError(msg("config: field 'd_z' is ", d_z,
                              " but the taxonomy has ",
                              taxonomy->atomic_count(), " atomic skills"));
  }
}

void RunConfig::apply_paper_scale() {
  embed_dim = 256;
  hidden_dim = 256;
  learning_rate = 1e-4;
}

ModelConfig RunConfig::model_config() const {
  ModelConfig mc;
  mc.base_model = base_model;
  mc.embed_dim = embed_dim;
  mc.hidden_dim = hidden_dim;
  mc.gcn_layers = gcn_layers;
  mc.ngcf_activation = ngcf_activation;
  mc.leaky_slope = leaky_slope;
  mc.encoder_activation = encoder_activation;
  mc.output_activation = output_activation;
  mc.lambda = lambda;
  mc.tau = tau;
  mc.epsilon = epsilon;
  mc.disable_hd = disable_hd;
  mc.disable_sa = disable_sa;
  mc.disable_cl = disable_cl;
  mc.disable_id = disable_id;
  mc.attention_cross_side = attention_cross_side;
  mc.double_noise = double_noise;
  mc.freeze_base = freeze_base;
  mc.monotonic_head = monotonic_head;
  return mc;
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "base_model=" << base_model_name(base_model) << "\n";
  os << "d=" << embed_dim << "\n";
  os << "d_h=" << hidden_dim << "\n";
  os << "d_z=" << d_z << "\n";
  os << "layers=" << gcn_layers << "\n";
  os << "ngcf_activation=" << activation_name(ngcf_activation) << "\n";
  os << "leaky_slope=" << leaky_slope << "\n";
  os << "encoder_activation=" << activation_name(encoder_activation) << "\n";
  os << "output_activation=" << output_activation_name(output_activation)
     << "\n";
  os << "learning_rate=" << learning_rate << "\n";
  os << "lambda=" << lambda << "\n";
  os << "tau=" << tau << "\n";
  os << "epsilon=" << epsilon << "\n";
  os << "batch_size=" << batch_size << "\n";
  os << "epochs=" << epochs << "\n";
  os << "patience=" << patience << "\n";
  os << "seed=" << seed << "\n";
  if (!lr_grid.empty()) {
    os << "lr_grid=";
    for (std::size_t i = 0; i < lr_grid.size(); ++i) {
      if (i) os << ",";
      os << lr_grid[i];
    }
    os << "\n";
  }
  os << "disable_hd=" << (disable_hd ? "true" : "false") << "\n";
  os << "disable_sa=" << (disable_sa ? "true" : "false") << "\n";
  os << "disable_cl=" << (disable_cl ? "true" : "false") << "\n";
  os << "disable_id=" << (disable_id ? "true" : "false") << "\n";
  os << "attention_cross_side=" << (attention_cross_side ? "true" : "false")
     << "\n";
  os << "double_noise=" << (double_noise ? "true" : "false") << "\n";
  os << "freeze_base=" << (freeze_base ? "true" : "false") << "\n";
  os << "monotonic_head=" << (monotonic_head ? "true" : "false") << "\n";
  os << "edge_rule=" << edge_rule_name(edge_rule) << "\n";
  os << "eval_negatives=" << eval_negatives << "\n";
  os << "eval_ks=";
  for (std::size_t i = 0; i < eval_ks.size(); ++i) {
    if (i) os << ",";
    os << eval_ks[i];
  }
  os << "\n";
  os << "gen_candidates=" << gen_candidates << "\n";
  os << "gen_jobs=" << gen_jobs << "\n";
  os << "gen_levels=";
  for (std::size_t i = 0; i < gen_levels.size(); ++i) {
    if (i) os << ",";
    os << gen_levels[i];
  }
  os << "\n";
  os << "gen_density=" << gen_density << "\n";
  return os.str();
}

}  // namespace skilldiag
