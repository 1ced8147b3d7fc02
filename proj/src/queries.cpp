#include "sememe_kb/queries.hpp"

#include <algorithm>
#include <charconv>

namespace sememe_kb {

namespace {

Json sense_list(const std::vector<const Sense*>& senses, std::size_t limit) {
  Json out = Json::array();
  for (std::size_t i = 0; i < senses.size() && i < limit; ++i) out.push_back(sense_summary(*senses[i]));
  return out;
}

Json optional_string(const std::optional<std::string>& value) { return value ? Json(*value) : Json(nullptr); }

[[noreturn]] void invalid(std::string_view name, std::string_view value, std::string_view expected) {
  throw KbError(ErrorKind::InvalidArgument, "invalid value '" + std::string(value) + "' for " + std::string(name) +
                                                " (expected " + std::string(expected) + ")");
}

}  // namespace

Json to_json(const Stats& stats) {
  Json j = Json::object();
  j["sense_count"] = stats.sense_count;
  j["distinct_zh_words"] = stats.distinct_zh_words;
  j["distinct_en_words"] = stats.distinct_en_words;
  j["sememe_count"] = stats.sememe_count;
  return j;
}

Json to_json(const Sememe& sememe) {
  Json j = Json::object();
  j["id"] = sememe.id;
  j["en"] = sememe.ref.english;
  j["zh"] = sememe.ref.chinese;
  j["ref"] = sememe.ref.str();
  j["category"] = std::string(to_string(sememe.category));
  j["parent"] = sememe.parent ? Json(*sememe.parent) : Json(nullptr);
  return j;
}

Json sense_summary(const Sense& sense) {
  Json j = Json::object();
  j["id"] = sense.id;
  j["zh"] = sense.zh;
  j["en"] = sense.en;
  j["pos"] = sense.pos;
  j["def"] = render_def(sense.def);
  return j;
}

Json scored_senses(std::span<const ScoredSense> scored) {
  Json out = Json::array();
  for (const ScoredSense& s : scored) {
    Json item = Json::object();
    item["sense"] = sense_summary(*s.sense);
    item["score"] = s.score;
    out.push_back(std::move(item));
  }
  return out;
}

Json error_body(std::string_view kind, std::string_view message) {
  Json inner = Json::object();
  inner["kind"] = std::string(kind);
  inner["message"] = std::string(message);
  Json j = Json::object();
  j["error"] = std::move(inner);
  return j;
}

Json error_body(ErrorKind kind, std::string_view message) { return error_body(to_string(kind), message); }

int http_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidK: return 400;
    case ErrorKind::UnknownSense:
    case ErrorKind::UnknownSememe:
    case ErrorKind::NoSuchWord: return 404;
    default: return 500;
  }
}

Queries::Queries(std::shared_ptr<const Lexicon> lexicon, SimilarityConfig config, std::size_t k_default)
    : lexicon_(lexicon), engine_(std::move(lexicon), config), k_default_(std::clamp<std::size_t>(k_default, 1, kMaxK)) {}

Json Queries::stats() const { return to_json(lexicon_->stats()); }

Json Queries::search(std::string_view query, Lang lang, MatchMode mode, std::size_t limit) const {
  return sense_list(lexicon_->search(query, lang, mode), std::min(limit, kMaxLimit));
}

Json Queries::sense_card(SenseId id) const {
  const Sense& s = lexicon_->get(id);
  Json j = Json::object();
  j["id"] = s.id;
  j["zh"] = s.zh;
  j["en"] = s.en;
  j["pos"] = s.pos;
  j["def_text"] = render_def(s.def);
  j["def_tree"] = tree_to_json(s.def);
  j["sentiment"] = optional_string(s.sentiment);
  j["examples"] = s.examples;
  j["near"] = scored_senses(engine_.nearest_senses(id, k_default_));
  return j;
}

Json Queries::tree(SenseId id, RenderFormat format, bool ascii_only) const {
  const Sense& s = lexicon_->get(id);
  Json j = Json::object();
  j["id"] = s.id;
  j["format"] = std::string(to_string(format));
  if (format == RenderFormat::Json) {
    j["tree"] = tree_to_json(s.def);
  } else {
    j["text"] = render_tree(s.def, format, RenderOptions{ascii_only});
  }
  return j;
}

Json Queries::nearest(SenseId id, std::size_t k) const {
  return scored_senses(engine_.nearest_senses(id, std::min(k, kMaxK)));
}

Json Queries::similarity(std::string_view a, std::string_view b, Lang lang) const {
  const WordSimilarity r = engine_.word_similarity(a, b, lang);
  Json j = Json::object();
  j["a"] = std::string(a);
  j["b"] = std::string(b);
  j["lang"] = std::string(to_string(lang));
  j["score"] = r.score;
  j["best_pair"] = Json::array({r.best_a, r.best_b});
  j["pairs_evaluated"] = r.pairs_evaluated;
  return j;
}

Json Queries::sememes(std::string_view query) const {
  Json out = Json::array();
  for (const Sememe* s : lexicon_->taxonomy().resolve(query)) out.push_back(to_json(*s));
  return out;
}

Json Queries::sememe_senses(SememeId id) const {
  return sense_list(lexicon_->senses_with_sememe(id), SIZE_MAX);
}

Lang require_lang(std::string_view name, std::string_view value) {
  if (auto lang = parse_lang(value)) return *lang;
  invalid(name, value, "zh, en or auto");
}

Lang require_word_lang(std::string_view name, std::string_view value) {
  if (value == "zh") return Lang::Zh;
  if (value == "en") return Lang::En;
  invalid(name, value, "zh or en");
}

MatchMode require_mode(std::string_view name, std::string_view value) {
  if (auto mode = parse_match_mode(value)) return *mode;
  invalid(name, value, "exact, prefix or substring");
}

RenderFormat require_format(std::string_view name, std::string_view value) {
  if (auto format = parse_render_format(value)) return *format;
  invalid(name, value, "ascii, dot or json");
}

std::uint64_t require_uint(std::string_view name, std::string_view value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc() || ptr != end) invalid(name, value, "a non-negative integer");
  return out;
}

}  // namespace sememe_kb
