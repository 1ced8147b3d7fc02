#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sememe_kb/dataset.hpp"
#include "sememe_kb/error.hpp"
#include "sememe_kb/lexicon.hpp"
#include "test_support.hpp"

using namespace sememe_kb;
namespace t = sememe_kb::testing;

namespace {

nlohmann::json manifest() {
  std::ifstream in(t::fixture_dir() / "manifest.json");
  return nlohmann::json::parse(in);
}

std::shared_ptr<const Taxonomy> fixture_taxonomy() {
  return std::make_shared<const Taxonomy>(Taxonomy::load(read_sememe_records(t::fixture_dir() / kTaxonomyFile)));
}

std::vector<SenseId> ids(const std::vector<const Sense*>& senses) {
  std::vector<SenseId> out;
  for (const Sense* s : senses) out.push_back(s->id);
  return out;
}

SenseRecord record(SenseId id, std::string def, std::string en = "w", std::string zh = "词") {
  return SenseRecord{id, std::move(zh), std::move(en), "noun", std::move(def), std::nullopt, {}};
}

ErrorKind strict_error(const std::vector<SenseRecord>& recs) {
  try {
    Lexicon::load(recs, fixture_taxonomy());
  } catch (const KbError& e) {
    return e.kind();
  }
  FAIL("load unexpectedly succeeded");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("fixture loads and matches the manifest") {
  const auto ds = load_dataset(t::fixture_dir());
  const Lexicon& lex = *ds.lexicon;
  const auto m = manifest();

  const Stats expected{m["stats"]["sense_count"], m["stats"]["distinct_zh_words"], m["stats"]["distinct_en_words"],
                       m["stats"]["sememe_count"]};
  CHECK(lex.stats() == expected);

  for (SenseId id : m["sense_ids"].get<std::vector<SenseId>>()) CHECK(lex.get(id).id == id);
  for (const auto& [id, def] : m["canonical_defs"].items()) {
    const Sense& s = lex.get(std::stoull(id));
    CHECK(render_def(s.def) == def.get<std::string>());
    CHECK(s.def.size() == m["node_counts"][id].get<std::size_t>());
  }
  CHECK_THROWS_AS(lex.get(999999), KbError);
  CHECK(lex.find(999999) == nullptr);
}

TEST_CASE("search bands") {
  const auto ds = load_dataset(t::fixture_dir());
  const Lexicon& lex = *ds.lexicon;
  const auto q = manifest()["queries"];

  const auto apple = ids(lex.search("apple", Lang::En, MatchMode::Exact));
  CHECK(apple == q["search_en_exact_apple"].get<std::vector<SenseId>>());
  CHECK(apple.size() == 4);
  CHECK(ids(lex.search("苹果", Lang::Zh, MatchMode::Exact)) == q["search_zh_exact_苹果"].get<std::vector<SenseId>>());
  CHECK(ids(lex.search("app", Lang::En, MatchMode::Prefix)) == q["search_en_prefix_app"].get<std::vector<SenseId>>());

  const auto prefix = ids(lex.search("apple", Lang::En, MatchMode::Prefix));
  REQUIRE(prefix.size() >= apple.size());
  CHECK(std::equal(apple.begin(), apple.end(), prefix.begin()));

  for (auto mode : {MatchMode::Exact, MatchMode::Prefix, MatchMode::Substring}) {
    for (auto lang : {Lang::Zh, Lang::En, Lang::Auto}) CHECK(lex.search("", lang, mode).empty());
  }

  // Brute-force band assignment over every sense.
  for (std::string query : {"a", "pp", "tree", "果", "人"}) {
    for (auto lang : {Lang::Zh, Lang::En, Lang::Auto}) {
      std::vector<std::pair<int, SenseId>> expected;
      for (const Sense& s : lex.senses()) {
        int band = 3;
        for (const std::string* w : {&s.zh, &s.en}) {
          if ((w == &s.zh && lang == Lang::En) || (w == &s.en && lang == Lang::Zh)) continue;
          if (*w == query) band = std::min(band, 0);
          else if (w->starts_with(query)) band = std::min(band, 1);
          else if (w->find(query) != std::string::npos) band = std::min(band, 2);
        }
        if (band < 3) expected.emplace_back(band, s.id);
      }
      std::sort(expected.begin(), expected.end());
      std::vector<SenseId> want;
      for (const auto& e : expected) want.push_back(e.second);
      CAPTURE(query);
      CHECK(ids(lex.search(query, lang, MatchMode::Substring)) == want);
    }
  }
}

TEST_CASE("every sense is retrievable by its words") {
  const auto ds = load_dataset(t::fixture_dir());
  for (const Sense& s : ds.lexicon->senses()) {
    const auto en = ids(ds.lexicon->search(s.en, Lang::En, MatchMode::Exact));
    const auto zh = ids(ds.lexicon->search(s.zh, Lang::Zh, MatchMode::Exact));
    CHECK(std::find(en.begin(), en.end(), s.id) != en.end());
    CHECK(std::find(zh.begin(), zh.end(), s.id) != zh.end());
  }
}

TEST_CASE("sememe index equals a definition walk") {
  const auto ds = load_dataset(t::fixture_dir());
  const Lexicon& lex = *ds.lexicon;
  const auto q = manifest()["queries"];
  for (const Sememe& m : lex.taxonomy().sememes()) {
    std::vector<SenseId> walk;
    for (const Sense& s : lex.senses()) {
      const auto used = t::sememes_in(s.def, lex.taxonomy());
      if (std::binary_search(used.begin(), used.end(), m.id)) walk.push_back(s.id);
    }
    CHECK(ids(lex.senses_with_sememe(m.id)) == walk);
    CHECK(ids(lex.senses_with_sememe(m.ref)) == walk);
  }
  for (const auto& [id, senses] : q["sememe_single_use"].items()) {
    CHECK(ids(lex.senses_with_sememe(static_cast<SememeId>(std::stoul(id)))) == senses.get<std::vector<SenseId>>());
  }
  for (SememeId id : q["sememe_unused"].get<std::vector<SememeId>>()) CHECK(lex.senses_with_sememe(id).empty());
  CHECK_THROWS_AS(lex.senses_with_sememe(SememeId{9999}), KbError);
}

TEST_CASE("strict load errors") {
  CHECK(strict_error({record(1, "{human|人}"), record(1, "{human|人}")}) == ErrorKind::DuplicateSenseId);
  CHECK(strict_error({record(1, "{fruit|水果")}) == ErrorKind::DefinitionParseError);
  CHECK(strict_error({record(1, "{unicorn|独角兽}")}) == ErrorKind::UnknownSememeInDef);
}

TEST_CASE("lenient load skips and reports") {
  const std::vector<SenseRecord> recs = {record(1, "{human|人}", "a"), record(2, "{fruit|水果"),
                                         record(1, "{fruit|水果}", "b"), record(3, "{unicorn|独角兽}"),
                                         record(4, "{fruit|水果}", "c")};
  std::vector<LoadIssue> skipped;
  const auto lex = Lexicon::load(recs, fixture_taxonomy(), LoadOptions{true}, &skipped);
  CHECK(lex.size() == 2);
  CHECK(lex.get(1).en == "a");
  REQUIRE(skipped.size() == 3);
  CHECK(skipped[0].record_index == 1);
  CHECK(skipped[0].kind == ErrorKind::DefinitionParseError);
  CHECK(skipped[1].kind == ErrorKind::DuplicateSenseId);
  CHECK(skipped[2].kind == ErrorKind::UnknownSememeInDef);
}

TEST_CASE("empty and single-record lexicons") {
  const auto tax = fixture_taxonomy();
  const auto empty = Lexicon::load({}, tax);
  CHECK(empty.stats() == Stats{0, 0, 0, tax->size()});
  const std::vector<SenseRecord> one = {record(0, "{human|人}")};
  CHECK(Lexicon::load(one, tax).get(0).en == "w");
}

TEST_CASE("record reader reports line numbers") {
  std::istringstream in("{\"id\":1,\"zh\":\"a\",\"en\":\"a\",\"pos\":\"n\",\"def\":\"{human|人}\"}\n\n{bad json\n");
  try {
    read_sense_records(in);
    FAIL("expected BadRecord");
  } catch (const KbError& e) {
    CHECK(e.kind() == ErrorKind::BadRecord);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("data dir resolution") {
  ::setenv(kDataEnvVar, "/from/env", 1);
  CHECK(resolve_data_dir(std::string("/from/flag")) == std::filesystem::path("/from/flag"));
  CHECK(resolve_data_dir(std::nullopt) == std::filesystem::path("/from/env"));
  ::unsetenv(kDataEnvVar);
  CHECK_FALSE(resolve_data_dir(std::nullopt).has_value());
}
