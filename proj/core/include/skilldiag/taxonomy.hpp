#pragma once

#include <string>
#include <vector>

namespace skilldiag {

/// Multi-level skill hierarchy. Level 1 is the coarsest; the last level
/// holds the atomic skills whose count fixes the prototype width d_z.
///
/// Global skill ids are dense (0..K-1) and grouped by level in ascending
/// order: all level-1 ids, then level-2, and so on. Every skill above level 1
/// has exactly one parent on the previous level (forest structure).
class SkillTaxonomy {
 public:
  struct SkillRecord {
    int id = 0;
    int level = 0;       // 1-based
    int parent = -1;     // global id, -1 for level-1 skills
    std::string name;
  };

  /// Validates and indexes the given records. Throws ValidationError with a
  /// located message on orphaned skills, bad parent levels, duplicate or
  /// non-dense ids.
  explicit SkillTaxonomy(std::vector<SkillRecord> records);

  /// Balanced synthetic hierarchy with the given per-level sizes; level-l
  /// skill i gets parent i * |S_{l-1}| / |S_l| (contiguous blocks).
  static SkillTaxonomy balanced(const std::vector<int>& level_sizes);

  static SkillTaxonomy load(const std::string& path);
  void save(const std::string& path) const;

  int levels() const { return static_cast<int>(level_offsets_.size()); }
  int total_skills() const { return static_cast<int>(records_.size()); }
  int atomic_count() const { return level_size(levels()); }

  int level_offset(int level) const;  // first global id on `level` (1-based)
  int level_size(int level) const;

  int level_of(int skill) const;
  int parent(int skill) const;
  const std::string& name(int skill) const;
  bool is_atomic(int skill) const { return level_of(skill) == levels(); }

  /// Atomic index in [0, d_z) of an atomic skill.
  int atomic_index(int skill) const;
  /// Global id of the atomic skill with the given atomic index.
  int atomic_skill(int atomic_idx) const;

  /// Atomic indices covered by `skill` (itself if atomic). Never empty.
  const std::vector<int>& atomic_descendants(int skill) const;

  const std::vector<SkillRecord>& records() const { return records_; }

 private:
  void check_skill(int skill) const;

  std::vector<SkillRecord> records_;
  std::vector<int> level_offsets_;               // per level (0-based index)
  std::vector<int> level_sizes_;
  std::vector<std::vector<int>> atomic_desc_;    // per skill
};

}  // namespace skilldiag
