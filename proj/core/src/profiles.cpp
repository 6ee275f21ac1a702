#include "skilldiag/profiles.hpp"

#include <algorithm>
#include <fstream>

#include "skilldiag/error.hpp"

namespace skilldiag {

SkillProfile export_profile(const SkillDiagModel& model,
                            const PropagatedTables& tables, Side side,
                            int id) {
  const int limit = side == Side::kCandidate ? model.num_candidates()
                                             : model.num_jobs();
  if (id < 0 || id >= limit) {
    throw LookupError(msg("export_profile: unknown ", side_name(side), " id ",
                          id, " (valid range [0,", limit, "))"));
  }
  NoGradGuard no_grad;
  const std::vector<int> ids{id};
  std::vector<Tensor> enhanced = model.enhanced_prototypes(tables, side, ids);
  SkillProfile profile;
  profile.entity = id;
  profile.side = side;
  for (const Tensor& level : enhanced) {
    profile.values.push_back(sigmoid(level).values());
  }
  return profile;
}

void write_profile(const std::string& path, const SkillProfile& profile,
                   const SkillTaxonomy& taxonomy) {
  std::ofstream out(path);
  if (!out) throw IoError(msg("cannot write profile file ", path));
  out << "# entity_id side level skill_id skill_name value\n";
  out.precision(17);
  for (std::size_t l = 0; l < profile.values.size(); ++l) {
    for (std::size_t s = 0; s < profile.values[l].size(); ++s) {
      const int skill = taxonomy.atomic_skill(static_cast<int>(s));
      out << profile.entity << '\t' << side_name(profile.side) << '\t'
          << (l + 1) << '\t' << skill << '\t' << taxonomy.name(skill) << '\t'
          << profile.values[l][s] << '\n';
    }
  }
}

void write_profile_chart(const std::string& path,
                         const SkillProfile& candidate,
                         const SkillProfile& job,
                         const SkillTaxonomy& taxonomy) {
  if (candidate.values.size() != job.values.size()) {
    throw ContractError("write_profile_chart: level counts differ");
  }
  const std::size_t levels = candidate.values.size();
  const std::size_t d_z = levels ? candidate.values[0].size() : 0;
  const double bar_w = 8.0, gap = 4.0, group_gap = 10.0;
  const double plot_h = 80.0, level_h = plot_h + 40.0;
  const double width =
      40.0 + static_cast<double>(d_z) * (2.0 * bar_w + gap + group_gap);
  const double height = static_cast<double>(levels) * level_h + 30.0;

  std::ofstream out(path);
  if (!out) throw IoError(msg("cannot write chart file ", path));
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<text x='10' y='16' font-size='12'>candidate " << candidate.entity
      << " (dark) vs job " << job.entity << " (light)</text>\n";
  for (std::size_t l = 0; l < levels; ++l) {
    const double base = 30.0 + static_cast<double>(l) * level_h + plot_h;
    out << "<text x='10' y='" << base - plot_h - 6 << "' font-size='11'>level "
        << (l + 1) << "</text>\n";
    for (std::size_t s = 0; s < d_z; ++s) {
      const double x =
          30.0 + static_cast<double>(s) * (2.0 * bar_w + gap + group_gap);
      const double hc = candidate.values[l][s] * plot_h;
      const double hj = job.values[l][s] * plot_h;
      out << "<rect x='" << x << "' y='" << base - hc << "' width='" << bar_w
          << "' height='" << hc << "' fill='#2b5d8c'/>\n";
      out << "<rect x='" << x + bar_w + gap << "' y='" << base - hj
          << "' width='" << bar_w << "' height='" << hj
          << "' fill='#8cb7db'/>\n";
      out << "<text x='" << x << "' y='" << base + 12 << "' font-size='8'>"
          << taxonomy.name(taxonomy.atomic_skill(static_cast<int>(s)))
          << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace skilldiag
