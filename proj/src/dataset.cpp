#include "sememe_kb/dataset.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "sememe_kb/error.hpp"

namespace sememe_kb {

namespace {

using nlohmann::json;

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw KbError(ErrorKind::BadRecord, "line " + std::to_string(line) + ": " + what);
}

template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      bad_line(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) bad_line(line, "expected a JSON object");
    try {
      fn(obj);
    } catch (const json::exception& e) {
      bad_line(line, e.what());
    } catch (const KbError& e) {
      bad_line(line, e.what());
    }
  }
}

std::string required_string(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw KbError(ErrorKind::BadRecord, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

template <typename Int>
Int required_id(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_unsigned()) {
    throw KbError(ErrorKind::BadRecord, std::string("field '") + key + "' must be a non-negative integer");
  }
  return it->get<Int>();
}

std::ifstream open(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw KbError(ErrorKind::Io, "cannot open " + file.string());
  return in;
}

template <typename Fn>
auto with_file_context(const std::filesystem::path& file, Fn&& fn) {
  try {
    return fn();
  } catch (const KbError& e) {
    if (e.kind() == ErrorKind::BadRecord) throw KbError(e.kind(), file.string() + ": " + e.what());
    throw;
  }
}

}  // namespace

std::vector<SememeRecord> read_sememe_records(std::istream& in) {
  std::vector<SememeRecord> out;
  for_each_record(in, [&](const json& obj) {
    SememeRecord r;
    r.id = required_id<SememeId>(obj, "id");
    r.english = required_string(obj, "en");
    r.chinese = required_string(obj, "zh");
    r.category = required_string(obj, "category");
    if (const auto it = obj.find("parent"); it != obj.end() && !it->is_null()) {
      r.parent = required_id<SememeId>(obj, "parent");
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<SenseRecord> read_sense_records(std::istream& in) {
  std::vector<SenseRecord> out;
  for_each_record(in, [&](const json& obj) {
    SenseRecord r;
    r.id = required_id<SenseId>(obj, "id");
    r.zh = required_string(obj, "zh");
    r.en = required_string(obj, "en");
    r.pos = required_string(obj, "pos");
    r.def = required_string(obj, "def");
    if (const auto it = obj.find("sentiment"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw KbError(ErrorKind::BadRecord, "field 'sentiment' must be a string or null");
      r.sentiment = it->get<std::string>();
    }
    if (const auto it = obj.find("examples"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) throw KbError(ErrorKind::BadRecord, "field 'examples' must be an array");
      for (const auto& ex : *it) {
        if (!ex.is_string()) throw KbError(ErrorKind::BadRecord, "field 'examples' must hold strings");
        r.examples.push_back(ex.get<std::string>());
      }
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<SememeRecord> read_sememe_records(const std::filesystem::path& file) {
  return with_file_context(file, [&] {
    auto in = open(file);
    return read_sememe_records(in);
  });
}

std::vector<SenseRecord> read_sense_records(const std::filesystem::path& file) {
  return with_file_context(file, [&] {
    auto in = open(file);
    return read_sense_records(in);
  });
}

Dataset load_dataset(const std::filesystem::path& dir, LoadOptions options) {
  if (!std::filesystem::is_directory(dir)) throw KbError(ErrorKind::Io, "data directory not found: " + dir.string());
  const auto sememes = read_sememe_records(dir / kTaxonomyFile);
  auto taxonomy = std::make_shared<const Taxonomy>(Taxonomy::load(sememes));
  const auto senses = read_sense_records(dir / kSensesFile);
  Dataset ds;
  ds.lexicon = std::make_shared<const Lexicon>(Lexicon::load(senses, std::move(taxonomy), options, &ds.skipped));
  return ds;
}

std::optional<std::filesystem::path> resolve_data_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  if (const char* env = std::getenv(kDataEnvVar); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

}  // namespace sememe_kb
