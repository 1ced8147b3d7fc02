#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sememe_kb/kdml.hpp"

namespace sememe_kb {

enum class Category { Thing, Part, Attribute, Time, Space, AttributeValue, Event };

inline constexpr std::array<Category, 7> kAllCategories = {
    Category::Thing, Category::Part,           Category::Attribute, Category::Time,
    Category::Space, Category::AttributeValue, Category::Event};

std::string_view to_string(Category category) noexcept;
/// Exact, case-sensitive inverse of `to_string`.
std::optional<Category> parse_category(std::string_view text) noexcept;

using SememeId = std::uint32_t;

struct Sememe {
  SememeId id = 0;
  SememeRef ref;
  Category category = Category::Thing;
  std::optional<SememeId> parent;

  friend bool operator==(const Sememe&, const Sememe&) = default;
};

/// A load-time record; identical to `Sememe` but kept separate so callers
/// never mistake an unvalidated record for a resolved taxonomy entry.
struct SememeRecord {
  SememeId id = 0;
  std::string english;
  std::string chinese;
  std::string category;
  std::optional<SememeId> parent;
};

/// Category-rooted forest of sememes. Immutable after `load`.
class Taxonomy {
 public:
  Taxonomy() = default;

  /// Validates the whole record set; throws KbError naming the first
  /// offending record (DuplicateId, DuplicateRef, DanglingParent,
  /// ParentCategoryMismatch, CycleDetected, BadRecord).
  static Taxonomy load(std::span<const SememeRecord> records);

  std::size_t size() const noexcept { return sememes_.size(); }
  bool contains(SememeId id) const noexcept { return index_.contains(id); }

  /// Throws KbError(UnknownSememe).
  const Sememe& get(SememeId id) const;
  const Sememe* find(SememeId id) const noexcept;
  const Sememe* find(const SememeRef& ref) const noexcept;

  /// `en|zh` is an exact ref lookup; anything else matches either label.
  /// Results ascend by id.
  std::vector<const Sememe*> resolve(std::string_view query) const;

  /// Parent chain, nearest first, self excluded.
  std::vector<const Sememe*> ancestors(SememeId id) const;
  std::size_t depth(SememeId id) const;
  SememeId root_of(SememeId id) const;

  /// Unit-weight path length through the lowest common ancestor; nullopt
  /// when the two sememes sit in different trees.
  std::optional<std::size_t> path_distance(SememeId a, SememeId b) const;

  std::span<const SememeId> roots(Category category) const noexcept;
  /// All sememes ordered by id.
  std::span<const Sememe> sememes() const noexcept { return sememes_; }

 private:
  std::size_t slot(SememeId id) const;

  std::vector<Sememe> sememes_;  // sorted by id
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> parent_slot_;  // self for roots
  std::unordered_map<SememeId, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> by_ref_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_english_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_chinese_;
  std::array<std::vector<SememeId>, kAllCategories.size()> roots_;
};

}  // namespace sememe_kb
