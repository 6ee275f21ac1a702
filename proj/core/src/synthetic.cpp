#include "skilldiag/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "skilldiag/error.hpp"

namespace skilldiag {

namespace {

// Per-job difficulty range. Requirements are the job difficulty plus a small
// per-skill jitter, which spreads coverage across the four label buckets
// while keeping latent high-coverage pairs rare enough for clean ranking.
constexpr double kDifficultyLo = 0.25;
constexpr double kDifficultyHi = 0.80;
constexpr double kRequirementJitter = 0.25;

double clamp01(double x, double lo, double hi) {
  return std::min(hi, std::max(lo, x));
}

void save_matrix(const std::string& path, const char* header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError(msg("cannot write ground-truth file ", path));
  out << header << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i;
    for (double v : rows[i]) out << '\t' << v;
    out << '\n';
  }
}

std::vector<std::vector<double>> load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(msg("cannot open ground-truth file ", path));
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::size_t id;
    if (!(fields >> id)) {
      throw ValidationError(msg(path, ":", line_no, ": expected entity id"));
    }
    if (id != rows.size()) {
      throw ValidationError(msg(path, ":", line_no,
                                ": entity ids must be dense, expected ",
                                rows.size(), " got ", id));
    }
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (values.empty()) {
      throw ValidationError(msg(path, ":", line_no, ": row has no values"));
    }
    rows.push_back(std::move(values));
  }
  return rows;
}

}  // namespace

double PlantedGroundTruth::coverage(int candidate, int job,
                                    const QMatrix& q) const {
  const auto& atoms = q.required_atoms(job);
  if (atoms.empty()) return 0.0;
  const auto& p = proficiency.at(candidate);
  const auto& r = requirement.at(job);
  int satisfied = 0;
  for (int s : atoms) {
    if (p[s] >= r[s]) ++satisfied;
  }
  return static_cast<double>(satisfied) / static_cast<double>(atoms.size());
}

int PlantedGroundTruth::label_from_coverage(double coverage) {
  if (coverage >= kMatchCoverage) return kMatch;
  if (coverage >= kChatCoverage) return kChat;
  if (coverage >= kClickCoverage) return kClick;
  return kBrowse;
}

int PlantedGroundTruth::label(int candidate, int job, const QMatrix& q) const {
  return label_from_coverage(coverage(candidate, job, q));
}

void PlantedGroundTruth::save(const std::string& proficiency_path,
                              const std::string& requirement_path) const {
  save_matrix(proficiency_path, "# candidate_id proficiency[d_z]",
              proficiency);
  save_matrix(requirement_path, "# job_id requirement[d_z]", requirement);
}

PlantedGroundTruth PlantedGroundTruth::load(
    const std::string& proficiency_path, const std::string& requirement_path) {
  PlantedGroundTruth truth;
  truth.proficiency = load_matrix(proficiency_path);
  truth.requirement = load_matrix(requirement_path);
  return truth;
}

SyntheticData generate_synthetic(int num_candidates, int num_jobs,
                                 const SkillTaxonomy& taxonomy, double density,
                                 Rng& rng) {
  if (num_candidates < 2 || num_jobs < 2) {
    throw ContractError(msg("generate_synthetic: need at least 2 candidates "
                            "and 2 jobs, got ",
                            num_candidates, " and ", num_jobs));
  }
  if (density <= 0.0 || density > 1.0) {
    throw ContractError(
        msg("generate_synthetic: density must be in (0,1], got ", density));
  }
  const int d_z = taxonomy.atomic_count();
  if (d_z <= 0) {
    throw ContractError("generate_synthetic: taxonomy has no atomic skills");
  }

  PlantedGroundTruth truth;
  truth.proficiency.resize(num_candidates);
  for (auto& p : truth.proficiency) {
    p.resize(d_z);
    for (double& v : p) v = rng.uniform();
  }

  QMatrix q(taxonomy, num_jobs);
  truth.requirement.resize(num_jobs);
  for (int job = 0; job < num_jobs; ++job) {
    for (int level = 1; level <= taxonomy.levels(); ++level) {
      const int size = taxonomy.level_size(level);
      const int want = 1 + static_cast<int>(rng.index(3));
      const int n_tags = std::min(want, size);
      std::vector<int> pool(size);
      for (int i = 0; i < size; ++i) pool[i] = taxonomy.level_offset(level) + i;
      for (int i = 0; i < n_tags; ++i) {
        const std::size_t j = i + rng.index(pool.size() - i);
        std::swap(pool[i], pool[j]);
        q.add_tag(job, pool[i]);
      }
    }
    const double difficulty = rng.uniform(kDifficultyLo, kDifficultyHi);
    auto& r = truth.requirement[job];
    r.resize(d_z);
    for (double& v : r) {
      v = clamp01(
          difficulty + rng.uniform(-kRequirementJitter, kRequirementJitter),
          0.02, 0.98);
    }
  }

  const int per_candidate = std::min(
      num_jobs,
      std::max(1, static_cast<int>(std::lround(density * num_jobs))));
  SyntheticData data{{}, std::move(q), std::move(truth)};
  std::vector<int> pool(num_jobs);
  for (int j = 0; j < num_jobs; ++j) pool[j] = j;
  for (int candidate = 0; candidate < num_candidates; ++candidate) {
    for (int i = 0; i < per_candidate; ++i) {
      const std::size_t j = i + rng.index(pool.size() - i);
      std::swap(pool[i], pool[j]);
      const int job = pool[i];
      InteractionRecord rec;
      rec.candidate = candidate;
      rec.job = job;
      rec.behavior = data.truth.label(candidate, job, data.qmatrix);
      data.records.push_back(rec);
    }
  }
  return data;
}

}  // namespace skilldiag
