#include "sememe_kb/kdml.hpp"

#include <algorithm>

#include "sememe_kb/taxonomy.hpp"

namespace sememe_kb {

namespace {

constexpr std::string_view kReserved = "|{}:,=\"";

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_label_char(char c) noexcept {
  return !is_space(c) && kReserved.find(c) == std::string_view::npos;
}

bool is_placeholder_char(char c) noexcept { return c == '$' || c == '~' || c == '?'; }

bool is_ascii_alpha(char c) noexcept { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }

std::size_t code_points_before(std::string_view text, std::size_t byte_offset) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < byte_offset && i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++n;
  }
  return n;
}

struct Failure {
  ParseErrorKind kind;
  std::size_t byte_offset;
  std::string message;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  SememeTree parse() {
    SememeTree tree = node(1);
    skip_ws();
    if (!eof()) {
      if (peek() == '}') fail(ParseErrorKind::UnbalancedBraces, "unmatched '}'");
      fail(ParseErrorKind::TrailingInput, "unexpected input after definition");
    }
    return tree;
  }

 private:
  bool eof() const noexcept { return pos_ >= text_.size(); }
  char peek() const noexcept { return text_[pos_]; }

  void skip_ws() noexcept {
    while (!eof() && is_space(peek())) ++pos_;
  }

  [[noreturn]] void fail(ParseErrorKind kind, std::string message) const {
    throw Failure{kind, pos_, std::move(message)};
  }

  [[noreturn]] void fail_at(std::size_t at, ParseErrorKind kind, std::string message) const {
    throw Failure{kind, at, std::move(message)};
  }

  void need_more(const char* what) const {
    if (eof()) fail(ParseErrorKind::UnbalancedBraces, std::string("input ends while expecting ") + what);
  }

  std::string_view label() {
    const std::size_t start = pos_;
    while (!eof() && is_label_char(peek())) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  NodeHead head() {
    need_more("a head");
    const char c = peek();
    if (c == '}' || c == ':' || c == ',') fail(ParseErrorKind::EmptyHead, "definition has no head");
    if (is_placeholder_char(c)) {
      ++pos_;
      return static_cast<Placeholder>(c);
    }
    if (c == '"') return literal();

    const std::string_view english = label();
    if (english.empty()) {
      fail(ParseErrorKind::UnexpectedToken, std::string("unexpected '") + c + "' in head");
    }
    skip_ws();
    need_more("'|'");
    if (peek() != '|') fail(ParseErrorKind::UnexpectedToken, "expected '|' between sememe labels");
    ++pos_;
    skip_ws();
    need_more("a Chinese label");
    const std::string_view chinese = label();
    if (chinese.empty()) fail(ParseErrorKind::UnexpectedToken, "expected a Chinese label after '|'");
    return SememeRef{std::string(english), std::string(chinese)};
  }

  Literal literal() {
    const std::size_t quote = pos_;
    ++pos_;
    std::string out;
    for (;;) {
      need_more("closing '\"'");
      const char c = peek();
      if (c == '"') break;
      if (c == '\\') {
        ++pos_;
        need_more("an escaped character");
        if (peek() != '"' && peek() != '\\') fail(ParseErrorKind::UnexpectedToken, "unknown escape in literal");
      }
      out.push_back(peek());
      ++pos_;
    }
    if (out.empty()) fail_at(quote, ParseErrorKind::EmptyHead, "empty literal head");
    ++pos_;
    return Literal{std::move(out)};
  }

  SememeTree node(int depth) {
    skip_ws();
    need_more("'{'");
    if (peek() != '{') fail(ParseErrorKind::UnbalancedBraces, "expected '{'");
    if (depth > kMaxDefDepth) fail(ParseErrorKind::UnexpectedToken, "definition nested deeper than 64 levels");
    ++pos_;
    skip_ws();

    SememeTree tree(head());
    skip_ws();
    need_more("':' or '}'");
    if (peek() == '}') {
      ++pos_;
      return tree;
    }
    if (peek() != ':') fail(ParseErrorKind::UnexpectedToken, "expected ':' or '}' after head");
    ++pos_;
    for (;;) {
      role(tree, depth);
      skip_ws();
      need_more("',' or '}'");
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == '}') {
        ++pos_;
        return tree;
      }
      fail(ParseErrorKind::UnexpectedToken, "expected ',' or '}' after role");
    }
  }

  void role(SememeTree& parent, int depth) {
    skip_ws();
    need_more("a role name");
    const std::size_t start = pos_;
    const std::string_view name = label();
    if (!is_valid_role_name(name)) {
      fail_at(start, ParseErrorKind::BadRoleName,
              name.empty() ? std::string("missing role name") : "invalid role name '" + std::string(name) + "'");
    }
    skip_ws();
    need_more("'='");
    if (peek() != '=') fail(ParseErrorKind::UnexpectedToken, "expected '=' after role name");
    ++pos_;
    parent.add(std::string(name), node(depth + 1));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void append_canonical(const SememeTree& tree, std::string& out) {
  out += '{';
  out += render_head(tree.head);
  if (!tree.children.empty()) {
    std::vector<std::string> parts;
    parts.reserve(tree.children.size());
    for (const auto& child : tree.children) {
      std::string part = child.role + "=";
      append_canonical(child.tree, part);
      parts.push_back(std::move(part));
    }
    std::sort(parts.begin(), parts.end());
    out += ':';
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ',';
      out += parts[i];
    }
  }
  out += '}';
}

void append_def(const SememeTree& tree, std::string& out) {
  out += '{';
  out += render_head(tree.head);
  for (std::size_t i = 0; i < tree.children.size(); ++i) {
    out += i == 0 ? ':' : ',';
    out += tree.children[i].role;
    out += '=';
    append_def(tree.children[i].tree, out);
  }
  out += '}';
}

void collect_issues(const SememeTree& tree, const Taxonomy& taxonomy, std::vector<DefIssue>& out) {
  if (const auto* ref = std::get_if<SememeRef>(&tree.head); ref && taxonomy.find(*ref) == nullptr) {
    out.push_back(DefIssue{DefIssue::Kind::UnknownSememe, *ref});
  }
  for (const auto& child : tree.children) collect_issues(child.tree, taxonomy, out);
}

}  // namespace

bool is_valid_label(std::string_view label) noexcept {
  if (label.empty() || is_placeholder_char(label.front())) return false;
  return std::all_of(label.begin(), label.end(), is_label_char);
}

bool is_valid_role_name(std::string_view name) noexcept {
  if (name.empty() || !is_ascii_alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return is_ascii_alpha(c) || (c >= '0' && c <= '9') || c == '_'; });
}

std::optional<SememeRef> SememeRef::from_string(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) return std::nullopt;
  SememeRef ref{std::string(text.substr(0, bar)), std::string(text.substr(bar + 1))};
  if (!is_valid_label(ref.english) || !is_valid_label(ref.chinese)) return std::nullopt;
  return ref;
}

std::size_t SememeTree::size() const noexcept {
  std::size_t n = 1;
  for (const auto& child : children) n += child.tree.size();
  return n;
}

std::size_t SememeTree::depth() const noexcept {
  std::size_t deepest = 0;
  for (const auto& child : children) deepest = std::max(deepest, child.tree.depth());
  return deepest + 1;
}

bool operator==(const SememeTree& a, const SememeTree& b) {
  if (a.head != b.head || a.children.size() != b.children.size()) return false;
  if (identical(a, b)) return true;
  return canonical_key(a) == canonical_key(b);
}

bool identical(const SememeTree& a, const SememeTree& b) {
  if (a.head != b.head || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (a.children[i].role != b.children[i].role) return false;
    if (!identical(a.children[i].tree, b.children[i].tree)) return false;
  }
  return true;
}

std::string canonical_key(const SememeTree& tree) {
  std::string out;
  append_canonical(tree, out);
  return out;
}

std::string render_head(const NodeHead& head) {
  struct Visitor {
    std::string operator()(const SememeRef& ref) const { return ref.str(); }
    std::string operator()(Placeholder p) const { return std::string(1, static_cast<char>(p)); }
    std::string operator()(const Literal& lit) const {
      std::string out = "\"";
      for (char c : lit.text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      out += '"';
      return out;
    }
  };
  return std::visit(Visitor{}, head);
}

std::string_view to_string(ParseErrorKind kind) noexcept {
  switch (kind) {
    case ParseErrorKind::UnexpectedToken: return "UnexpectedToken";
    case ParseErrorKind::UnbalancedBraces: return "UnbalancedBraces";
    case ParseErrorKind::EmptyHead: return "EmptyHead";
    case ParseErrorKind::BadRoleName: return "BadRoleName";
    case ParseErrorKind::TrailingInput: return "TrailingInput";
  }
  return "UnexpectedToken";
}

ParseResult parse_def(std::string_view text) {
  try {
    return Parser(text).parse();
  } catch (const Failure& f) {
    return ParseError{f.kind, code_points_before(text, f.byte_offset), f.message};
  }
}

std::string render_def(const SememeTree& tree) {
  std::string out;
  append_def(tree, out);
  return out;
}

std::vector<DefIssue> validate_def(const SememeTree& tree, const Taxonomy& taxonomy) {
  std::vector<DefIssue> issues;
  collect_issues(tree, taxonomy, issues);
  return issues;
}

}  // namespace sememe_kb
