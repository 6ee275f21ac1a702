#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skilldiag/taxonomy.hpp"

namespace skilldiag {

/// Builds the per-level atomic masks for one job from its raw skill-tag row
/// (length K over all levels). Mask l has a 1 at atomic index s iff some
/// level-l tag of the job is an ancestor-or-self of atomic skill s; the last
/// level's mask therefore equals the raw atomic tags exactly.
std::vector<std::vector<std::uint8_t>> build_level_masks(
    const SkillTaxonomy& taxonomy, const std::vector<std::uint8_t>& raw_row);

/// Binary job-skill tagging over all taxonomy levels, plus the derived
/// per-level atomic masks consumed by the diagnosis interaction.
class QMatrix {
 public:
  QMatrix(const SkillTaxonomy& taxonomy, int num_jobs);

  void add_tag(int job, int skill);

  static QMatrix load(const std::string& path, const SkillTaxonomy& taxonomy,
                      int num_jobs_hint = 0);
  void save(const std::string& path) const;

  int num_jobs() const { return static_cast<int>(tags_.size()); }
  int num_skills() const { return num_skills_; }
  int levels() const { return levels_; }
  int atomic_count() const { return atomic_count_; }

  /// Sorted global skill ids tagged for the job.
  const std::vector<int>& tags(int job) const;
  bool has_tag(int job, int skill) const;

  /// Dense binary row over all K skills.
  std::vector<std::uint8_t> raw_row(int job) const;

  /// Level mask (1-based level) as doubles, ready for tensor constants.
  const std::vector<double>& level_mask(int job, int level) const;

  /// Atomic indices required by the job: union of all level masks.
  const std::vector<int>& required_atoms(int job) const;

 private:
  void check_job(int job) const;
  void rebuild(int job);

  const SkillTaxonomy* taxonomy_;
  int num_skills_ = 0;
  int levels_ = 0;
  int atomic_count_ = 0;
  std::vector<std::vector<int>> tags_;
  std::vector<std::vector<std::vector<double>>> masks_;  // job × level × d_z
  std::vector<std::vector<int>> required_;
};

}  // namespace skilldiag
