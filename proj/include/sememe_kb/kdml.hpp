#pragma once

// Sememe definition expressions: the text form of sememe trees.
//
//   def       := '{' head ( ':' role ( ',' role )* )? '}'
//   head      := sememeRef | '$' | '~' | '?' | '"' chars '"'
//   role      := roleName '=' def
//   sememeRef := english '|' chinese
//
// Whitespace between tokens is ignored. Literal heads accept `\"` and `\\`
// escapes.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sememe_kb {

class Taxonomy;

/// Bilingual sememe label, written `english|chinese`.
struct SememeRef {
  std::string english;
  std::string chinese;

  std::string str() const { return english + "|" + chinese; }

  /// Splits `en|zh`; nullopt unless both halves are valid label text.
  static std::optional<SememeRef> from_string(std::string_view text);

  friend bool operator==(const SememeRef&, const SememeRef&) = default;
  friend auto operator<=>(const SememeRef&, const SememeRef&) = default;
};

/// True when `label` may be used as either half of a SememeRef.
bool is_valid_label(std::string_view label) noexcept;
/// True when `name` matches `[A-Za-z][A-Za-z0-9_]*`.
bool is_valid_role_name(std::string_view name) noexcept;

enum class Placeholder : char { Self = '~', Dollar = '$', Query = '?' };

struct Literal {
  std::string text;
  friend bool operator==(const Literal&, const Literal&) = default;
};

using NodeHead = std::variant<SememeRef, Placeholder, Literal>;

/// One node of a sememe tree. Children keep their annotation order, but
/// `operator==` treats the children of each role as a multiset.
struct SememeTree {
  struct Child;

  NodeHead head;
  std::vector<Child> children;

  SememeTree() = default;
  explicit SememeTree(NodeHead h) : head(std::move(h)) {}

  SememeTree& add(std::string role, SememeTree child);

  bool is_leaf() const noexcept { return children.empty(); }
  std::size_t size() const noexcept;
  std::size_t depth() const noexcept;

  friend bool operator==(const SememeTree& a, const SememeTree& b);
};

struct SememeTree::Child {
  std::string role;
  SememeTree tree;
};

inline SememeTree& SememeTree::add(std::string role, SememeTree child) {
  children.push_back(Child{std::move(role), std::move(child)});
  return *this;
}

/// Order-sensitive structural comparison (stricter than `==`).
bool identical(const SememeTree& a, const SememeTree& b);

/// Canonical text with every child list sorted; two trees compare equal
/// under `==` exactly when their keys match.
std::string canonical_key(const SememeTree& tree);

std::string render_head(const NodeHead& head);

enum class ParseErrorKind { UnexpectedToken, UnbalancedBraces, EmptyHead, BadRoleName, TrailingInput };

std::string_view to_string(ParseErrorKind kind) noexcept;

struct ParseError {
  ParseErrorKind kind;
  std::size_t offset;  // code points from the start of the input
  std::string message;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

inline constexpr int kMaxDefDepth = 64;

class ParseResult {
 public:
  ParseResult(SememeTree tree) : value_(std::move(tree)) {}
  ParseResult(ParseError error) : value_(std::move(error)) {}

  bool ok() const noexcept { return value_.index() == 0; }
  explicit operator bool() const noexcept { return ok(); }

  const SememeTree& tree() const& { return std::get<SememeTree>(value_); }
  SememeTree&& tree() && { return std::get<SememeTree>(std::move(value_)); }
  const ParseError& error() const { return std::get<ParseError>(value_); }

 private:
  std::variant<SememeTree, ParseError> value_;
};

ParseResult parse_def(std::string_view text);

/// Canonical serialization: no whitespace, children in stored order.
std::string render_def(const SememeTree& tree);

struct DefIssue {
  enum class Kind { UnknownSememe } kind = Kind::UnknownSememe;
  SememeRef ref;

  friend bool operator==(const DefIssue&, const DefIssue&) = default;
};

/// One issue per sememe head (preorder) that the taxonomy cannot resolve.
std::vector<DefIssue> validate_def(const SememeTree& tree, const Taxonomy& taxonomy);

}  // namespace sememe_kb
