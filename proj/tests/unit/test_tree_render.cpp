#include <doctest.h>

#include <algorithm>
#include <random>

#include "sememe_kb/dataset.hpp"
#include "sememe_kb/error.hpp"
#include "sememe_kb/tree_render.hpp"
#include "test_support.hpp"

using namespace sememe_kb;
namespace t = sememe_kb::testing;

namespace {

SememeTree def(std::string_view text) {
  auto r = parse_def(text);
  REQUIRE(r.ok());
  return std::move(r).tree();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("json form") {
  CHECK(render_tree(def("{human|人:modifier={child|儿童}}"), RenderFormat::Json) ==
        R"({"head":{"sememe":"human|人"},"children":[{"role":"modifier","tree":{"head":{"sememe":"child|儿童"},"children":[]}}]})");
  const auto mixed = def(R"({own|有:possessor={?},name={"A \"b\""}})");
  CHECK(identical(tree_from_json(tree_to_json(mixed)), mixed));
  CHECK_THROWS_AS(tree_from_json(Json::parse(R"({"head":{"sememe":"nobar"},"children":[]})")), KbError);
  CHECK_THROWS_AS(tree_from_json(Json::parse(R"({"head":{"placeholder":"!"},"children":[]})")), KbError);
  CHECK_THROWS_AS(tree_from_json(Json::parse(R"([])")), KbError);
}

TEST_CASE("ascii form") {
  CHECK(render_tree(def("{human|人}"), RenderFormat::Ascii) == "human|人\n");
  const auto tree = def("{human|人:modifier={young|幼:scope={red|红}},modifier={male|男}}");
  CHECK(render_tree(tree, RenderFormat::Ascii) ==
        "human|人\n"
        "├── [modifier] young|幼\n"
        "│   └── [scope] red|红\n"
        "└── [modifier] male|男\n");
  CHECK(render_tree(tree, RenderFormat::Ascii, {.ascii_only = true}) ==
        "human|人\n"
        "|- [modifier] young|幼\n"
        "|  `- [scope] red|红\n"
        "`- [modifier] male|男\n");
  CHECK(lines(render_tree(def("{\"two\nlines\"}"), RenderFormat::Ascii)) == 1);
}

TEST_CASE("dot form") {
  CHECK(render_tree(def("{human|人:modifier={child|儿童}}"), RenderFormat::Dot) ==
        "digraph sememe_tree {\n"
        "  n0 [label=\"human|人\"];\n"
        "  n1 [label=\"child|儿童\"];\n"
        "  n0 -> n1 [label=\"modifier\"];\n"
        "}\n");
  const auto shape = t::parse_dot(render_tree(def(R"({a|b:r={"q\"uote"}})"), RenderFormat::Dot));
  REQUIRE(shape.has_value());
  CHECK(shape->nodes == 2);
}

TEST_CASE("every format covers every node") {
  std::vector<SememeTree> trees;
  for (const auto& rec : read_sense_records(t::fixture_dir() / kSensesFile)) trees.push_back(def(rec.def));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) trees.push_back(t::random_tree(rng, {}));

  for (const auto& tree : trees) {
    CHECK(lines(render_tree(tree, RenderFormat::Ascii)) == tree.size());
    const auto ascii_only = render_tree(tree, RenderFormat::Ascii, {.ascii_only = true});
    CHECK(lines(ascii_only) == tree.size());
    const auto shape = t::parse_dot(render_tree(tree, RenderFormat::Dot));
    REQUIRE(shape.has_value());
    CHECK(shape->nodes == tree.size());
    CHECK(shape->edges == tree.size() - 1);
    const auto json = render_tree(tree, RenderFormat::Json);
    CHECK(identical(tree_from_json(Json::parse(json)), tree));
    CHECK(render_tree(tree, RenderFormat::Json) == json);
  }
}

TEST_CASE("format names") {
  for (auto f : {RenderFormat::Ascii, RenderFormat::Dot, RenderFormat::Json}) CHECK(parse_render_format(to_string(f)) == f);
  CHECK_FALSE(parse_render_format("svg").has_value());
}
