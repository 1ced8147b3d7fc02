#pragma once

// Sememe-tree similarity.
//
// Atomic sememe similarity is alpha / (alpha + d), d being the taxonomy path
// distance, or `cross_tree_sim` for sememes in different trees. Two tree
// nodes score
//
//   beta_root * head + (1 - beta_root) * children
//
// where `children` averages, over the union of role names, the greedy
// best-pair matching of that role's subtrees divided by the larger side
// (1.0 when both nodes are leaves, 0.0 for a role only one side has).

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sememe_kb/kdml.hpp"
#include "sememe_kb/lexicon.hpp"
#include "sememe_kb/taxonomy.hpp"

namespace sememe_kb {

struct SimilarityConfig {
  double alpha = 1.6;
  double beta_root = 0.5;
  double cross_tree_sim = 0.1;
  double placeholder_match = 1.0;

  /// Throws KbError(InvalidArgument) when a field is out of range.
  void validate() const;

  /// Absent fields keep their defaults; unknown fields are rejected.
  static SimilarityConfig from_json(std::string_view text);
  static SimilarityConfig from_file(const std::filesystem::path& file);
};

double sememe_similarity(SememeId a, SememeId b, const Taxonomy& taxonomy, const SimilarityConfig& config);

/// Throws KbError(UnknownSememe) when a sememe head is not in the taxonomy.
double tree_similarity(const SememeTree& a, const SememeTree& b, const Taxonomy& taxonomy,
                       const SimilarityConfig& config);

struct ScoredSense {
  const Sense* sense = nullptr;
  double score = 0.0;
};

struct WordSimilarity {
  double score = 0.0;
  SenseId best_a = 0;
  SenseId best_b = 0;
  std::size_t pairs_evaluated = 0;
};

namespace detail {
struct CompiledForest;
}

/// Similarity over a loaded lexicon. Definitions are compiled once at
/// construction; every query is const and safe to run concurrently.
class SimilarityEngine {
 public:
  explicit SimilarityEngine(std::shared_ptr<const Lexicon> lexicon, SimilarityConfig config = {});
  ~SimilarityEngine();
  SimilarityEngine(SimilarityEngine&&) noexcept;
  SimilarityEngine& operator=(SimilarityEngine&&) noexcept;

  const Lexicon& lexicon() const noexcept { return *lexicon_; }
  const SimilarityConfig& config() const noexcept { return config_; }

  double sememe_similarity(SememeId a, SememeId b) const;
  /// Throws KbError(UnknownSense).
  double sense_similarity(SenseId a, SenseId b) const;
  /// Maximum over every sense pair of the two words. Throws
  /// KbError(NoSuchWord) naming the first word without senses.
  WordSimilarity word_similarity(std::string_view a, std::string_view b, Lang lang) const;
  /// Top-k by similarity to `target`, excluding it; descending score, then
  /// ascending id. Throws KbError(UnknownSense) or KbError(InvalidK).
  std::vector<ScoredSense> nearest_senses(SenseId target, std::size_t k) const;

  /// Worker threads used by `nearest_senses`; 0 picks the hardware count.
  void set_threads(unsigned threads) noexcept { threads_ = threads; }

 private:
  double slot_similarity(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t slot_of(SenseId id) const;

  std::shared_ptr<const Lexicon> lexicon_;
  SimilarityConfig config_;
  std::unique_ptr<detail::CompiledForest> forest_;
  unsigned threads_ = 0;
};

}  // namespace sememe_kb
