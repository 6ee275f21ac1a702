#pragma once

#include <string>
#include <vector>

#include "skilldiag/interactions.hpp"
#include "skilldiag/qmatrix.hpp"
#include "skilldiag/rng.hpp"
#include "skilldiag/taxonomy.hpp"

namespace skilldiag {

/// Hidden vectors behind a generated dataset. Labels are a pure function of
/// these vectors and the job's required atomic skills, so they can be
/// recomputed exactly for verification.
struct PlantedGroundTruth {
  std::vector<std::vector<double>> proficiency;  // per candidate, d_z
  std::vector<std::vector<double>> requirement;  // per job, d_z

  /// Fraction of the job's required atomic skills where the candidate's
  /// proficiency meets the requirement. 0 for jobs with no requirements.
  double coverage(int candidate, int job, const QMatrix& q) const;

  /// Behavior implied by a coverage value: Match >= 0.75, Chat >= 0.5,
  /// Click >= 0.25, else Browse.
  static int label_from_coverage(double coverage);

  int label(int candidate, int job, const QMatrix& q) const;

  void save(const std::string& proficiency_path,
            const std::string& requirement_path) const;
  static PlantedGroundTruth load(const std::string& proficiency_path,
                                 const std::string& requirement_path);
};

inline constexpr double kMatchCoverage = 0.75;
inline constexpr double kChatCoverage = 0.5;
inline constexpr double kClickCoverage = 0.25;

struct SyntheticData {
  std::vector<InteractionRecord> records;
  QMatrix qmatrix;
  PlantedGroundTruth truth;
};

/// Generates a planted-signal dataset: candidate proficiencies uniform in
/// [0,1]^d_z, jobs with 1-3 tagged skills per level and requirement vectors
/// centered on a per-job difficulty, and round(density*M) distinct jobs
/// sampled per candidate, labeled through the coverage rule.
SyntheticData generate_synthetic(int num_candidates, int num_jobs,
                                 const SkillTaxonomy& taxonomy, double density,
                                 Rng& rng);

}  // namespace skilldiag
