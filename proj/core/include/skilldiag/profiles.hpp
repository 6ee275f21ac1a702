#pragma once

#include <string>
#include <vector>

#include "skilldiag/model.hpp"
#include "skilldiag/taxonomy.hpp"

namespace skilldiag {

/// Per-level skill values in (0,1) for one entity: the sigmoid of each
/// attention-enhanced prototype, indexed by atomic skill.
struct SkillProfile {
  int entity = 0;
  Side side = Side::kCandidate;
  std::vector<std::vector<double>> values;  // levels × d_z
};

/// Reads the profile of one entity from a trained model. Pure read: runs
/// the forward pipeline without touching any state.
SkillProfile export_profile(const SkillDiagModel& model,
                            const PropagatedTables& tables, Side side, int id);

/// Writes a profile as delimited text with columns
/// entity_id side level skill_id skill_name value.
void write_profile(const std::string& path, const SkillProfile& profile,
                   const SkillTaxonomy& taxonomy);

/// Side-by-side bar chart of a candidate and a job profile per level,
/// emitted as a standalone SVG.
void write_profile_chart(const std::string& path,
                         const SkillProfile& candidate,
                         const SkillProfile& job,
                         const SkillTaxonomy& taxonomy);

}  // namespace skilldiag
