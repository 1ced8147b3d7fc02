#pragma once

// JSON-producing query layer shared by the CLI (`--json`) and the HTTP
// service, so both front ends emit the same documents for the same request.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sememe_kb/error.hpp"
#include "sememe_kb/lexicon.hpp"
#include "sememe_kb/similarity.hpp"
#include "sememe_kb/tree_render.hpp"

namespace sememe_kb {

inline constexpr std::size_t kDefaultLimit = 50;
inline constexpr std::size_t kMaxLimit = 500;
inline constexpr std::size_t kDefaultK = 5;
inline constexpr std::size_t kMaxK = 100;

Json to_json(const Stats& stats);
Json to_json(const Sememe& sememe);
Json sense_summary(const Sense& sense);
Json scored_senses(std::span<const ScoredSense> scored);
Json error_body(ErrorKind kind, std::string_view message);
Json error_body(std::string_view kind, std::string_view message);

/// HTTP status class for a domain error: 400, 404, or 500.
int http_status(ErrorKind kind) noexcept;

class Queries {
 public:
  Queries(std::shared_ptr<const Lexicon> lexicon, SimilarityConfig config = {}, std::size_t k_default = kDefaultK);

  const Lexicon& lexicon() const noexcept { return *lexicon_; }
  const SimilarityEngine& engine() const noexcept { return engine_; }
  std::size_t k_default() const noexcept { return k_default_; }

  Json stats() const;
  /// `limit` is capped at kMaxLimit.
  Json search(std::string_view query, Lang lang, MatchMode mode, std::size_t limit) const;
  /// Sense card: every sense field plus canonical and tree forms of the
  /// definition and the `k_default` nearest senses.
  Json sense_card(SenseId id) const;
  Json tree(SenseId id, RenderFormat format, bool ascii_only) const;
  /// `k` is capped at kMaxK; k == 0 throws KbError(InvalidK).
  Json nearest(SenseId id, std::size_t k) const;
  Json similarity(std::string_view a, std::string_view b, Lang lang) const;
  Json sememes(std::string_view query) const;
  Json sememe_senses(SememeId id) const;

 private:
  std::shared_ptr<const Lexicon> lexicon_;
  SimilarityEngine engine_;
  std::size_t k_default_;
};

// Parameter parsing shared by both front ends; each throws
// KbError(InvalidArgument) naming the parameter.
Lang require_lang(std::string_view name, std::string_view value);
/// zh or en only; word similarity compares within one language.
Lang require_word_lang(std::string_view name, std::string_view value);
MatchMode require_mode(std::string_view name, std::string_view value);
RenderFormat require_format(std::string_view name, std::string_view value);
/// Decimal integer without sign or whitespace.
std::uint64_t require_uint(std::string_view name, std::string_view value);

}  // namespace sememe_kb
