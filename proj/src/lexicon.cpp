#include "sememe_kb/lexicon.hpp"

#include <algorithm>
#include <numeric>

namespace sememe_kb {

namespace {

void collect_sememes(const SememeTree& tree, const Taxonomy& taxonomy, std::vector<SememeId>& out) {
  if (const auto* ref = std::get_if<SememeRef>(&tree.head)) {
    if (const Sememe* s = taxonomy.find(*ref)) out.push_back(s->id);
  }
  for (const auto& child : tree.children) collect_sememes(child.tree, taxonomy, out);
}

struct Rejected {
  ErrorKind kind;
  std::string message;
};

}  // namespace

std::string_view to_string(Lang lang) noexcept {
  switch (lang) {
    case Lang::Zh: return "zh";
    case Lang::En: return "en";
    case Lang::Auto: return "auto";
  }
  return "auto";
}

std::string_view to_string(MatchMode mode) noexcept {
  switch (mode) {
    case MatchMode::Exact: return "exact";
    case MatchMode::Prefix: return "prefix";
    case MatchMode::Substring: return "substring";
  }
  return "exact";
}

std::optional<Lang> parse_lang(std::string_view text) noexcept {
  if (text == "zh") return Lang::Zh;
  if (text == "en") return Lang::En;
  if (text == "auto") return Lang::Auto;
  return std::nullopt;
}

std::optional<MatchMode> parse_match_mode(std::string_view text) noexcept {
  if (text == "exact") return MatchMode::Exact;
  if (text == "prefix") return MatchMode::Prefix;
  if (text == "substring") return MatchMode::Substring;
  return std::nullopt;
}

Lexicon Lexicon::load(std::span<const SenseRecord> records, std::shared_ptr<const Taxonomy> taxonomy,
                      LoadOptions options, std::vector<LoadIssue>* skipped) {
  Lexicon lex;
  lex.taxonomy_ = std::move(taxonomy);
  const Taxonomy& tax = *lex.taxonomy_;

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return records[a].id < records[b].id; });

  auto reject = [&](std::size_t index, Rejected r) {
    if (!options.lenient) throw KbError(r.kind, r.message);
    if (skipped) skipped->push_back(LoadIssue{index, records[index].id, r.kind, std::move(r.message)});
  };

  const std::size_t first_issue = skipped ? skipped->size() : 0;
  lex.senses_.reserve(records.size());
  std::vector<bool> accepted(records.size(), false);
  // Walk records in input order so "first offender" means first in the file.
  std::vector<SememeTree> parsed(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SenseRecord& r = records[i];
    const std::string who = "sense " + std::to_string(r.id);
    if (r.zh.empty() || r.en.empty()) {
      reject(i, {ErrorKind::BadRecord, who + ": word forms must be non-empty"});
      continue;
    }
    ParseResult result = parse_def(r.def);
    if (!result) {
      const ParseError& e = result.error();
      reject(i, {ErrorKind::DefinitionParseError, who + ": " + std::string(to_string(e.kind)) + " at offset " +
                                                      std::to_string(e.offset) + ": " + e.message});
      continue;
    }
    const auto issues = validate_def(result.tree(), tax);
    if (!issues.empty()) {
      reject(i, {ErrorKind::UnknownSememeInDef, who + ": unknown sememe " + issues.front().ref.str()});
      continue;
    }
    parsed[i] = std::move(result).tree();
    accepted[i] = true;
  }

  // Duplicate ids: the earliest record in the stream keeps the id.
  std::vector<std::size_t> kept;
  kept.reserve(records.size());
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end < order.size() && records[order[end]].id == records[order[k]].id) ++end;
    std::vector<std::size_t> group(order.begin() + static_cast<std::ptrdiff_t>(k),
                                   order.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(group.begin(), group.end());
    bool have = false;
    for (std::size_t idx : group) {
      if (!accepted[idx]) continue;
      if (have) {
        reject(idx, {ErrorKind::DuplicateSenseId, "sense " + std::to_string(records[idx].id) + ": duplicate sense id"});
        continue;
      }
      have = true;
      kept.push_back(idx);
    }
    k = end;
  }

  if (skipped) {
    std::stable_sort(skipped->begin() + static_cast<std::ptrdiff_t>(first_issue), skipped->end(),
                     [](const LoadIssue& a, const LoadIssue& b) { return a.record_index < b.record_index; });
  }

  for (std::size_t idx : kept) {
    const SenseRecord& r = records[idx];
    lex.senses_.push_back(Sense{r.id, r.zh, r.en, r.pos, std::move(parsed[idx]), r.sentiment, r.examples});
  }

  std::vector<SememeId> mentioned;
  for (std::uint32_t slot = 0; slot < lex.senses_.size(); ++slot) {
    const Sense& s = lex.senses_[slot];
    lex.by_id_.emplace(s.id, slot);
    lex.zh_index_[s.zh].push_back(slot);
    lex.en_index_[s.en].push_back(slot);
    mentioned.clear();
    collect_sememes(s.def, tax, mentioned);
    std::sort(mentioned.begin(), mentioned.end());
    mentioned.erase(std::unique(mentioned.begin(), mentioned.end()), mentioned.end());
    for (SememeId m : mentioned) lex.by_sememe_[m].push_back(slot);
  }
  return lex;
}

const Sense& Lexicon::get(SenseId id) const {
  if (const Sense* s = find(id)) return *s;
  throw KbError(ErrorKind::UnknownSense, "unknown sense " + std::to_string(id));
}

const Sense* Lexicon::find(SenseId id) const noexcept {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &senses_[it->second];
}

std::vector<const Sense*> Lexicon::to_senses(std::span<const std::uint32_t> slots) const {
  std::vector<const Sense*> out;
  out.reserve(slots.size());
  for (std::uint32_t s : slots) out.push_back(&senses_[s]);
  return out;
}

std::vector<const Sense*> Lexicon::search(std::string_view query, Lang lang, MatchMode mode) const {
  if (query.empty()) return {};

  // (band, slot); band 0 exact, 1 prefix, 2 substring.
  std::vector<std::pair<int, std::uint32_t>> hits;
  auto scan = [&](const WordIndex& index) {
    if (const auto it = index.find(query); it != index.end()) {
      for (std::uint32_t s : it->second) hits.emplace_back(0, s);
    }
    if (mode == MatchMode::Exact) return;
    for (auto it = index.upper_bound(query); it != index.end() && it->first.starts_with(query); ++it) {
      for (std::uint32_t s : it->second) hits.emplace_back(1, s);
    }
    if (mode == MatchMode::Prefix) return;
    for (const auto& [key, slots] : index) {
      if (key.starts_with(query) || key.find(query) == std::string::npos) continue;
      for (std::uint32_t s : slots) hits.emplace_back(2, s);
    }
  };
  if (lang != Lang::En) scan(zh_index_);
  if (lang != Lang::Zh) scan(en_index_);

  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  hits.erase(std::unique(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.second == b.second; }),
             hits.end());
  std::sort(hits.begin(), hits.end());

  std::vector<const Sense*> out;
  out.reserve(hits.size());
  for (const auto& [band, slot] : hits) out.push_back(&senses_[slot]);
  return out;
}

std::vector<const Sense*> Lexicon::senses_for_word(std::string_view word, Lang lang) const {
  return search(word, lang, MatchMode::Exact);
}

std::vector<const Sense*> Lexicon::senses_with_sememe(SememeId id) const {
  taxonomy_->get(id);
  const auto it = by_sememe_.find(id);
  if (it == by_sememe_.end()) return {};
  return to_senses(it->second);
}

std::vector<const Sense*> Lexicon::senses_with_sememe(const SememeRef& ref) const {
  const Sememe* s = taxonomy_->find(ref);
  if (!s) throw KbError(ErrorKind::UnknownSememe, "unknown sememe " + ref.str());
  return senses_with_sememe(s->id);
}

Stats Lexicon::stats() const {
  return Stats{senses_.size(), zh_index_.size(), en_index_.size(), taxonomy_->size()};
}

}  // namespace sememe_kb
