#include <doctest.h>

#include <random>

#include "sememe_kb/dataset.hpp"
#include "sememe_kb/kdml.hpp"
#include "sememe_kb/taxonomy.hpp"
#include "test_support.hpp"

using namespace sememe_kb;
namespace t = sememe_kb::testing;

namespace {

SememeTree leaf(std::string en, std::string zh) { return SememeTree(SememeRef{std::move(en), std::move(zh)}); }

ParseError error_of(std::string_view text) {
  const auto r = parse_def(text);
  REQUIRE_FALSE(r.ok());
  return r.error();
}

}  // namespace

TEST_CASE("smallest definition") {
  const auto r = parse_def("{human|人}");
  REQUIRE(r.ok());
  CHECK(r.tree() == leaf("human", "人"));
  CHECK(r.tree().is_leaf());
}

TEST_CASE("one labelled child") {
  const auto r = parse_def("{human|人:modifier={child|儿童}}");
  REQUIRE(r.ok());
  SememeTree expected = leaf("human", "人");
  expected.add("modifier", leaf("child", "儿童"));
  CHECK(identical(r.tree(), expected));
}

TEST_CASE("whitespace normalizes away") {
  const auto r = parse_def("{ human|人 : modifier = {child|儿童} }");
  REQUIRE(r.ok());
  CHECK(render_def(r.tree()) == "{human|人:modifier={child|儿童}}");
  CHECK(render_def(leaf("human", "人")) == "{human|人}");
}

TEST_CASE("placeholders and literals") {
  const auto r = parse_def(R"({own|有:possessor={?},possession={$},self={~},name={"say \"hi\" \\ {x}"}})");
  REQUIRE(r.ok());
  const auto& c = r.tree().children;
  REQUIRE(c.size() == 4);
  CHECK(std::get<Placeholder>(c[0].tree.head) == Placeholder::Query);
  CHECK(std::get<Placeholder>(c[1].tree.head) == Placeholder::Dollar);
  CHECK(std::get<Placeholder>(c[2].tree.head) == Placeholder::Self);
  CHECK(std::get<Literal>(c[3].tree.head).text == R"(say "hi" \ {x})");
  CHECK(parse_def(render_def(r.tree())).tree() == r.tree());
}

TEST_CASE("error kinds and offsets") {
  CHECK(error_of("{fruit|水果") == ParseError{ParseErrorKind::UnbalancedBraces, 9, error_of("{fruit|水果").message});

  struct Case {
    const char* text;
    ParseErrorKind kind;
    std::size_t offset;
  };
  const Case cases[] = {
      {"", ParseErrorKind::UnbalancedBraces, 0},
      {"human|人}", ParseErrorKind::UnbalancedBraces, 0},
      {"{human|人}}", ParseErrorKind::UnbalancedBraces, 9},
      {"{}", ParseErrorKind::EmptyHead, 1},
      {"{:a={b|c}}", ParseErrorKind::EmptyHead, 1},
      {"{\"\"}", ParseErrorKind::EmptyHead, 1},
      {"{a|b:9x={c|d}}", ParseErrorKind::BadRoleName, 5},
      {"{a|b:={c|d}}", ParseErrorKind::BadRoleName, 5},
      {"{a|b} x", ParseErrorKind::TrailingInput, 6},
      {"{a|b:r=c|d}", ParseErrorKind::UnbalancedBraces, 7},
      {"{ab}", ParseErrorKind::UnexpectedToken, 3},
      {"{a|b:r}", ParseErrorKind::UnexpectedToken, 6},
  };
  for (const auto& c : cases) {
    CAPTURE(std::string(c.text));
    const auto e = error_of(c.text);
    CHECK(e.kind == c.kind);
    CHECK(e.offset == c.offset);
    CHECK_FALSE(e.message.empty());
  }
}

TEST_CASE("depth limit") {
  std::string ok;
  std::string deep;
  for (int i = 0; i < kMaxDefDepth; ++i) ok += i == 0 ? "{a|b" : ":r={a|b";
  ok += std::string(kMaxDefDepth, '}');
  CHECK(parse_def(ok).ok());

  for (int i = 0; i <= kMaxDefDepth; ++i) deep += i == 0 ? "{a|b" : ":r={a|b";
  deep += std::string(kMaxDefDepth + 1, '}');
  CHECK(error_of(deep).kind == ParseErrorKind::UnexpectedToken);
}

TEST_CASE("equality is a multiset per role") {
  const auto a = parse_def("{x|y:r={a|b},r={c|d},s={e|f}}").tree();
  const auto b = parse_def("{x|y:s={e|f},r={c|d},r={a|b}}").tree();
  const auto c = parse_def("{x|y:r={a|b},s={c|d},r={e|f}}").tree();
  CHECK(a == b);
  CHECK_FALSE(identical(a, b));
  CHECK(canonical_key(a) == canonical_key(b));
  CHECK_FALSE(a == c);
}

TEST_CASE("fixture definitions parse, round-trip and validate") {
  const auto sememes = read_sememe_records(t::fixture_dir() / kTaxonomyFile);
  const auto taxonomy = Taxonomy::load(sememes);
  for (const auto& rec : read_sense_records(t::fixture_dir() / kSensesFile)) {
    CAPTURE(rec.id);
    const auto r = parse_def(rec.def);
    REQUIRE(r.ok());
    CHECK(parse_def(render_def(r.tree())).tree() == r.tree());
    CHECK(validate_def(r.tree(), taxonomy).empty());
  }
  const auto unicorn = validate_def(leaf("unicorn", "独角兽"), taxonomy);
  REQUIRE(unicorn.size() == 1);
  CHECK(unicorn[0].ref == SememeRef{"unicorn", "独角兽"});
}

TEST_CASE("random trees round-trip and errors stay in bounds") {
  std::mt19937_64 rng(7);
  t::RandomTreeOptions opts;
  for (int i = 0; i < 500; ++i) {
    const auto tree = t::random_tree(rng, opts);
    const auto text = render_def(tree);
    const auto r = parse_def(text);
    REQUIRE(r.ok());
    CHECK(identical(r.tree(), tree));
    CHECK(render_def(r.tree()) == text);

    for (auto m : {t::Mutation::DeleteOpenBrace, t::Mutation::DeleteCloseBrace, t::Mutation::EmptyHead,
                   t::Mutation::BadRoleName}) {
      const std::size_t target = std::uniform_int_distribution<std::size_t>(0, tree.size() - 1)(rng);
      if (m == t::Mutation::BadRoleName && target == 0) continue;
      const auto bad = t::render_mutated(tree, target, m);
      const auto e = parse_def(bad);
      REQUIRE_FALSE(e.ok());
      CHECK(e.error().offset <= bad.size());
      CHECK(parse_def(bad).error() == e.error());
    }
  }
}

TEST_CASE("garbage never aborts") {
  std::mt19937_64 rng(11);
  const std::string alphabet = "{}|:,=\"\\ab $~?人";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = std::uniform_int_distribution<int>(0, 20)(rng);
    for (int j = 0; j < n; ++j) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    const auto r = parse_def(s);
    if (!r.ok()) CHECK(r.error().offset <= s.size());
  }
}

TEST_CASE("label rules") {
  CHECK(is_valid_label("ProperName"));
  CHECK(is_valid_label("专"));
  CHECK_FALSE(is_valid_label(""));
  CHECK_FALSE(is_valid_label("a b"));
  CHECK_FALSE(is_valid_label("$x"));
  CHECK(is_valid_role_name("PatientProduct"));
  CHECK_FALSE(is_valid_role_name("_x"));
  CHECK(SememeRef::from_string("ProperName|专") == SememeRef{"ProperName", "专"});
  CHECK_FALSE(SememeRef::from_string("nobar").has_value());
}
