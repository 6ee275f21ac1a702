#include "skilldiag/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "skilldiag/error.hpp"

namespace skilldiag {

SkillTaxonomy::SkillTaxonomy(std::vector<SkillRecord> records) {
  if (records.empty()) {
    throw ValidationError("taxonomy: no skills defined");
  }
  std::sort(records.begin(), records.end(),
            [](const SkillRecord& a, const SkillRecord& b) {
              return a.id < b.id;
            });
  const int total = static_cast<int>(records.size());
  for (int i = 0; i < total; ++i) {
    if (records[i].id != i) {
      if (i > 0 && records[i].id == records[i - 1].id) {
        throw ValidationError(
            msg("taxonomy: duplicate skill id ", records[i].id));
      }
      throw ValidationError(msg("taxonomy: skill ids must be dense 0..",
                                total - 1, "; missing id ", i));
    }
  }
  // Levels must form contiguous ascending blocks.
  int current_level = 0;
  for (const auto& rec : records) {
    if (rec.level < 1) {
      throw ValidationError(
          msg("taxonomy: skill ", rec.id, " has invalid level ", rec.level));
    }
    if (rec.level == current_level + 1) {
      level_offsets_.push_back(rec.id);
      level_sizes_.push_back(0);
      ++current_level;
    } else if (rec.level != current_level) {
      throw ValidationError(
          msg("taxonomy: skill ", rec.id, " at level ", rec.level,
              " breaks the contiguous per-level id blocks"));
    }
    ++level_sizes_.back();
  }
  records_ = std::move(records);

  for (const auto& rec : records_) {
    if (rec.level == 1) {
      if (rec.parent != -1) {
        throw ValidationError(
            msg("taxonomy: level-1 skill ", rec.id, " must have no parent"));
      }
      continue;
    }
    if (rec.parent < 0) {
      throw ValidationError(msg("taxonomy: level-", rec.level, " skill ",
                                rec.id, " has no parent"));
    }
    if (rec.parent >= total) {
      throw ValidationError(msg("taxonomy: skill ", rec.id,
                                " references unknown parent ", rec.parent));
    }
    if (records_[rec.parent].level != rec.level - 1) {
      throw ValidationError(
          msg("taxonomy: skill ", rec.id, " at level ", rec.level,
              " has parent ", rec.parent, " at level ",
              records_[rec.parent].level, "; parents must sit one level up"));
    }
  }

  // Atomic descendants, computed from the deepest level upward.
  atomic_desc_.assign(records_.size(), {});
  const int last = levels();
  for (int a = 0; a < level_size(last); ++a) {
    atomic_desc_[level_offset(last) + a] = {a};
  }
  for (int level = last - 1; level >= 1; --level) {
    for (int i = 0; i < level_size(level + 1); ++i) {
      const int child = level_offset(level + 1) + i;
      const auto& desc = atomic_desc_[child];
      auto& up = atomic_desc_[records_[child].parent];
      up.insert(up.end(), desc.begin(), desc.end());
    }
    for (int i = 0; i < level_size(level); ++i) {
      auto& desc = atomic_desc_[level_offset(level) + i];
      std::sort(desc.begin(), desc.end());
      desc.erase(std::unique(desc.begin(), desc.end()), desc.end());
      if (desc.empty()) {
        throw ValidationError(msg("taxonomy: skill ",
                                  level_offset(level) + i,
                                  " has no atomic descendants"));
      }
    }
  }
}

SkillTaxonomy SkillTaxonomy::balanced(const std::vector<int>& level_sizes) {
  if (level_sizes.empty()) {
    throw ValidationError("taxonomy: at least one level required");
  }
  std::vector<SkillRecord> records;
  int id = 0;
  int prev_offset = 0;
  for (std::size_t l = 0; l < level_sizes.size(); ++l) {
    const int size = level_sizes[l];
    if (size < 1) {
      throw ValidationError(
          msg("taxonomy: level ", l + 1, " has non-positive size ", size));
    }
    if (l > 0 && size < level_sizes[l - 1]) {
      throw ValidationError(
          msg("taxonomy: level sizes must be non-decreasing, got ",
              level_sizes[l - 1], " then ", size));
    }
    const int offset = id;
    for (int i = 0; i < size; ++i) {
      SkillRecord rec;
      rec.id = id++;
      rec.level = static_cast<int>(l + 1);
      rec.parent = l == 0 ? -1
                          : prev_offset + static_cast<int>(
                                              (static_cast<long long>(i) *
                                               level_sizes[l - 1]) /
                                              size);
      rec.name = msg("s", l + 1, "_", i);
      records.push_back(std::move(rec));
    }
    prev_offset = offset;
  }
  return SkillTaxonomy(std::move(records));
}

SkillTaxonomy SkillTaxonomy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(msg("cannot open taxonomy file ", path));
  std::vector<SkillRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    SkillRecord rec;
    std::string parent_field;
    if (!(fields >> rec.id >> rec.level >> parent_field)) {
      throw ValidationError(
          msg(path, ":", line_no, ": expected 'id level parent name'"));
    }
    if (parent_field == "-") {
      rec.parent = -1;
    } else {
      try {
        rec.parent = std::stoi(parent_field);
      } catch (const std::exception&) {
        throw ValidationError(
            msg(path, ":", line_no, ": bad parent id '", parent_field, "'"));
      }
    }
    std::getline(fields, rec.name);
    const auto start = rec.name.find_first_not_of(" \t");
    rec.name = start == std::string::npos ? "" : rec.name.substr(start);
    if (rec.name.empty()) {
      throw ValidationError(msg(path, ":", line_no, ": missing skill name"));
    }
    if (rec.id < 0) {
      throw ValidationError(
          msg(path, ":", line_no, ": negative skill id ", rec.id));
    }
    records.push_back(std::move(rec));
  }
  try {
    return SkillTaxonomy(std::move(records));
  } catch (const ValidationError& e) {
    throw ValidationError(msg(path, ": ", e.what()));
  }
}

void SkillTaxonomy::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError(msg("cannot write taxonomy file ", path));
  out << "# id level parent name\n";
  for (const auto& rec : records_) {
    out << rec.id << '\t' << rec.level << '\t';
    if (rec.parent < 0) {
      out << '-';
    } else {
      out << rec.parent;
    }
    out << '\t' << rec.name << '\n';
  }
}

int SkillTaxonomy::level_offset(int level) const {
  if (level < 1 || level > levels()) {
    throw LookupError(msg("taxonomy: level ", level, " out of range [1,",
                          levels(), "]"));
  }
  return level_offsets_[level - 1];
}

int SkillTaxonomy::level_size(int level) const {
  if (level < 1 || level > levels()) {
    throw LookupError(msg("taxonomy: level ", level, " out of range [1,",
                          levels(), "]"));
  }
  return level_sizes_[level - 1];
}

void SkillTaxonomy::check_skill(int skill) const {
  if (skill < 0 || skill >= total_skills()) {
    throw LookupError(msg("taxonomy: unknown skill id ", skill));
  }
}

int SkillTaxonomy::level_of(int skill) const {
  check_skill(skill);
  return records_[skill].level;
}

int SkillTaxonomy::parent(int skill) const {
  check_skill(skill);
  return records_[skill].parent;
}

const std::string& SkillTaxonomy::name(int skill) const {
  check_skill(skill);
  return records_[skill].name;
}

int SkillTaxonomy::atomic_index(int skill) const {
  check_skill(skill);
  if (!is_atomic(skill)) {
    throw LookupError(msg("taxonomy: skill ", skill, " is not atomic"));
  }
  return skill - level_offset(levels());
}

int SkillTaxonomy::atomic_skill(int atomic_idx) const {
  if (atomic_idx < 0 || atomic_idx >= atomic_count()) {
    throw LookupError(
        msg("taxonomy: atomic index ", atomic_idx, " out of range"));
  }
  return level_offset(levels()) + atomic_idx;
}

const std::vector<int>& SkillTaxonomy::atomic_descendants(int skill) const {
  check_skill(skill);
  return atomic_desc_[skill];
}

}  // namespace skilldiag
