#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sememe_kb/error.hpp"
#include "sememe_kb/kdml.hpp"
#include "sememe_kb/taxonomy.hpp"

namespace sememe_kb {

using SenseId = std::uint64_t;

struct Sense {
  SenseId id = 0;
  std::string zh;
  std::string en;
  std::string pos;
  SememeTree def;
  std::optional<std::string> sentiment;
  std::vector<std::string> examples;
};

/// Raw sense record as it appears in the dataset; `def` is still text.
struct SenseRecord {
  SenseId id = 0;
  std::string zh;
  std::string en;
  std::string pos;
  std::string def;
  std::optional<std::string> sentiment;
  std::vector<std::string> examples;
};

enum class Lang { Zh, En, Auto };
enum class MatchMode { Exact, Prefix, Substring };

std::string_view to_string(Lang lang) noexcept;
std::string_view to_string(MatchMode mode) noexcept;
std::optional<Lang> parse_lang(std::string_view text) noexcept;
std::optional<MatchMode> parse_match_mode(std::string_view text) noexcept;

struct Stats {
  std::size_t sense_count = 0;
  std::size_t distinct_zh_words = 0;
  std::size_t distinct_en_words = 0;
  std::size_t sememe_count = 0;

  friend bool operator==(const Stats&, const Stats&) = default;
};

struct LoadOptions {
  /// Skip and report bad sense records instead of failing the whole load.
  bool lenient = false;
};

/// A sense record rejected during a lenient load.
struct LoadIssue {
  std::size_t record_index = 0;  // 0-based position in the record stream
  SenseId sense_id = 0;
  ErrorKind kind = ErrorKind::BadRecord;
  std::string message;
};

/// Immutable, indexed collection of senses over a shared taxonomy.
class Lexicon {
 public:
  /// Strict loads throw KbError (DuplicateSenseId, DefinitionParseError,
  /// UnknownSememeInDef) on the first bad record; lenient loads append to
  /// `skipped` and carry on.
  static Lexicon load(std::span<const SenseRecord> records, std::shared_ptr<const Taxonomy> taxonomy,
                      LoadOptions options = {}, std::vector<LoadIssue>* skipped = nullptr);

  const Taxonomy& taxonomy() const noexcept { return *taxonomy_; }
  std::shared_ptr<const Taxonomy> shared_taxonomy() const noexcept { return taxonomy_; }

  /// Throws KbError(UnknownSense).
  const Sense& get(SenseId id) const;
  const Sense* find(SenseId id) const noexcept;

  /// Exact matches, then prefix, then substring; ascending id within each
  /// band. `Prefix` mode includes exact hits and `Substring` includes both.
  std::vector<const Sense*> search(std::string_view query, Lang lang, MatchMode mode) const;

  /// Exact word lookup in one language (Auto merges both). Ascending id.
  std::vector<const Sense*> senses_for_word(std::string_view word, Lang lang) const;

  /// Senses whose definition mentions the sememe anywhere. Throws
  /// KbError(UnknownSememe).
  std::vector<const Sense*> senses_with_sememe(SememeId id) const;
  std::vector<const Sense*> senses_with_sememe(const SememeRef& ref) const;

  Stats stats() const;

  /// Senses ordered by id.
  std::span<const Sense> senses() const noexcept { return senses_; }
  std::size_t size() const noexcept { return senses_.size(); }

 private:
  using WordIndex = std::map<std::string, std::vector<std::uint32_t>, std::less<>>;

  std::vector<const Sense*> to_senses(std::span<const std::uint32_t> slots) const;

  std::shared_ptr<const Taxonomy> taxonomy_;
  std::vector<Sense> senses_;  // sorted by id
  std::unordered_map<SenseId, std::uint32_t> by_id_;
  WordIndex zh_index_;
  WordIndex en_index_;
  std::unordered_map<SememeId, std::vector<std::uint32_t>> by_sememe_;
};

}  // namespace sememe_kb
