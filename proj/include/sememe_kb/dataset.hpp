#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sememe_kb/lexicon.hpp"
#include "sememe_kb/taxonomy.hpp"

namespace sememe_kb {

inline constexpr const char* kTaxonomyFile = "taxonomy.jsonl";
inline constexpr const char* kSensesFile = "senses.jsonl";
inline constexpr const char* kDataEnvVar = "SEMEME_KB_DATA";

// JSON Lines readers. Blank lines are skipped; malformed lines throw
// KbError(BadRecord) with the 1-based line number.
std::vector<SememeRecord> read_sememe_records(std::istream& in);
std::vector<SenseRecord> read_sense_records(std::istream& in);

std::vector<SememeRecord> read_sememe_records(const std::filesystem::path& file);
std::vector<SenseRecord> read_sense_records(const std::filesystem::path& file);

struct Dataset {
  std::shared_ptr<const Lexicon> lexicon;
  std::vector<LoadIssue> skipped;  // populated by lenient loads only
};

/// Loads `<dir>/taxonomy.jsonl` and `<dir>/senses.jsonl`.
Dataset load_dataset(const std::filesystem::path& dir, LoadOptions options = {});

/// The explicit flag wins; otherwise SEMEME_KB_DATA; otherwise nullopt.
std::optional<std::filesystem::path> resolve_data_dir(const std::optional<std::string>& flag);

}  // namespace sememe_kb
