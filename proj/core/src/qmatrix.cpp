#include "skilldiag/qmatrix.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "skilldiag/error.hpp"

namespace skilldiag {

std::vector<std::vector<std::uint8_t>> build_level_masks(
    const SkillTaxonomy& taxonomy, const std::vector<std::uint8_t>& raw_row) {
  if (raw_row.size() != static_cast<std::size_t>(taxonomy.total_skills())) {
    throw ShapeError(msg("build_level_masks: raw row length ", raw_row.size(),
                         " does not match skill count ",
                         taxonomy.total_skills()));
  }
  const int levels = taxonomy.levels();
  const int d_z = taxonomy.atomic_count();
  std::vector<std::vector<std::uint8_t>> masks(
      levels, std::vector<std::uint8_t>(d_z, 0));
  for (int skill = 0; skill < taxonomy.total_skills(); ++skill) {
    if (!raw_row[skill]) continue;
    auto& mask = masks[taxonomy.level_of(skill) - 1];
    for (int atom : taxonomy.atomic_descendants(skill)) mask[atom] = 1;
  }
  return masks;
}

QMatrix::QMatrix(const SkillTaxonomy& taxonomy, int num_jobs)
    : taxonomy_(&taxonomy),
      num_skills_(taxonomy.total_skills()),
      levels_(taxonomy.levels()),
      atomic_count_(taxonomy.atomic_count()) {
  if (num_jobs < 0) {
    throw ContractError(msg("qmatrix: negative job count ", num_jobs));
  }
  tags_.resize(num_jobs);
  masks_.assign(num_jobs, std::vector<std::vector<double>>(
                              levels_, std::vector<double>(atomic_count_, 0.0)));
  required_.resize(num_jobs);
}

void QMatrix::check_job(int job) const {
  if (job < 0 || job >= num_jobs()) {
    throw LookupError(
        msg("qmatrix: job ", job, " out of range [0,", num_jobs(), ")"));
  }
}

void QMatrix::add_tag(int job, int skill) {
  check_job(job);
  if (skill < 0 || skill >= num_skills_) {
    throw LookupError(
        msg("qmatrix: skill ", skill, " out of range [0,", num_skills_, ")"));
  }
  auto& row = tags_[job];
  auto it = std::lower_bound(row.begin(), row.end(), skill);
  if (it != row.end() && *it == skill) return;
  row.insert(it, skill);
  rebuild(job);
}

void QMatrix::rebuild(int job) {
  auto raw = raw_row(job);
  auto masks = build_level_masks(*taxonomy_, raw);
  for (int l = 0; l < levels_; ++l) {
    for (int s = 0; s < atomic_count_; ++s) {
      masks_[job][l][s] = masks[l][s] ? 1.0 : 0.0;
    }
  }
  auto& req = required_[job];
  req.clear();
  for (int s = 0; s < atomic_count_; ++s) {
    for (int l = 0; l < levels_; ++l) {
      if (masks[l][s]) {
        req.push_back(s);
        break;
      }
    }
  }
}

const std::vector<int>& QMatrix::tags(int job) const {
  check_job(job);
  return tags_[job];
}

bool QMatrix::has_tag(int job, int skill) const {
  check_job(job);
  const auto& row = tags_[job];
  return std::binary_search(row.begin(), row.end(), skill);
}

std::vector<std::uint8_t> QMatrix::raw_row(int job) const {
  check_job(job);
  std::vector<std::uint8_t> row(num_skills_, 0);
  for (int skill : tags_[job]) row[skill] = 1;
  return row;
}

const std::vector<double>& QMatrix::level_mask(int job, int level) const {
  check_job(job);
  if (level < 1 || level > levels_) {
    throw LookupError(msg("qmatrix: level ", level, " out of range [1,",
                          levels_, "]"));
  }
  return masks_[job][level - 1];
}

const std::vector<int>& QMatrix::required_atoms(int job) const {
  check_job(job);
  return required_[job];
}

QMatrix QMatrix::load(const std::string& path, const SkillTaxonomy& taxonomy,
                      int num_jobs_hint) {
  std::ifstream in(path);
  if (!in) throw IoError(msg("cannot open q-matrix file ", path));
  std::vector<std::pair<int, int>> pairs;
  int max_job = num_jobs_hint - 1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    int job, skill;
    if (!(fields >> job >> skill)) {
      throw ValidationError(
          msg(path, ":", line_no, ": expected 'job_id skill_id'"));
    }
    if (job < 0) {
      throw ValidationError(msg(path, ":", line_no, ": negative job id"));
    }
    if (skill < 0 || skill >= taxonomy.total_skills()) {
      throw ValidationError(
          msg(path, ":", line_no, ": skill id ", skill, " not in taxonomy"));
    }
    pairs.emplace_back(job, skill);
    max_job = std::max(max_job, job);
  }
  QMatrix q(taxonomy, max_job + 1);
  for (const auto& [job, skill] : pairs) q.add_tag(job, skill);
  return q;
}

void QMatrix::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError(msg("cannot write q-matrix file ", path));
  out << "# job_id skill_id\n";
  for (int job = 0; job < num_jobs(); ++job) {
    for (int skill : tags_[job]) out << job << '\t' << skill << '\n';
  }
}

}  // namespace skilldiag
