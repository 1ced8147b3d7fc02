#include "sememe_kb/tree_render.hpp"

#include "sememe_kb/error.hpp"

namespace sememe_kb {

namespace {

struct Connectors {
  const char* branch;
  const char* last;
  const char* pipe;
  const char* blank;
};

constexpr Connectors kBoxDrawing{"├── ", "└── ", "│   ", "    "};
constexpr Connectors kPlain{"|- ", "`- ", "|  ", "   "};

std::string ascii_head(const NodeHead& head) {
  std::string out;
  for (char ch : render_head(head)) {
    if (ch == '\n') {
      out += "\\n";
    } else {
      out += ch;
    }
  }
  return out;
}

void ascii_children(const SememeTree& tree, const std::string& prefix, const Connectors& c, std::string& out) {
  for (std::size_t i = 0; i < tree.children.size(); ++i) {
    const bool last = i + 1 == tree.children.size();
    const auto& child = tree.children[i];
    out += prefix;
    out += last ? c.last : c.branch;
    out += "[" + child.role + "] " + ascii_head(child.tree.head) + "\n";
    ascii_children(child.tree, prefix + (last ? c.blank : c.pipe), c, out);
  }
}

std::string dot_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out;
}

void dot_nodes(const SememeTree& tree, std::size_t& next, std::string& out) {
  const std::size_t self = next++;
  out += "  n" + std::to_string(self) + " [label=\"" + dot_escape(render_head(tree.head)) + "\"];\n";
  for (const auto& child : tree.children) {
    const std::size_t id = next;
    dot_nodes(child.tree, next, out);
    out += "  n" + std::to_string(self) + " -> n" + std::to_string(id) + " [label=\"" + dot_escape(child.role) +
           "\"];\n";
  }
}

Json head_to_json(const NodeHead& head) {
  Json j = Json::object();
  if (const auto* ref = std::get_if<SememeRef>(&head)) {
    j["sememe"] = ref->str();
  } else if (const auto* p = std::get_if<Placeholder>(&head)) {
    j["placeholder"] = std::string(1, static_cast<char>(*p));
  } else {
    j["literal"] = std::get<Literal>(head).text;
  }
  return j;
}

[[noreturn]] void malformed(const std::string& what) {
  throw KbError(ErrorKind::InvalidArgument, "malformed tree JSON: " + what);
}

NodeHead head_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1) malformed("head must be an object with one field");
  const auto it = j.begin();
  const std::string& key = it.key();
  const Json& value = it.value();
  if (!value.is_string()) malformed("head value must be a string");
  const auto text = value.get<std::string>();
  if (key == "sememe") {
    auto ref = SememeRef::from_string(text);
    if (!ref) malformed("invalid sememe '" + text + "'");
    return *ref;
  }
  if (key == "placeholder") {
    if (text != "$" && text != "~" && text != "?") malformed("invalid placeholder '" + text + "'");
    return static_cast<Placeholder>(text[0]);
  }
  if (key == "literal") {
    if (text.empty()) malformed("empty literal");
    return Literal{text};
  }
  malformed("unknown head kind '" + key + "'");
}

}  // namespace

std::string_view to_string(RenderFormat format) noexcept {
  switch (format) {
    case RenderFormat::Ascii: return "ascii";
    case RenderFormat::Dot: return "dot";
    case RenderFormat::Json: return "json";
  }
  return "ascii";
}

std::optional<RenderFormat> parse_render_format(std::string_view text) noexcept {
  if (text == "ascii") return RenderFormat::Ascii;
  if (text == "dot") return RenderFormat::Dot;
  if (text == "json") return RenderFormat::Json;
  return std::nullopt;
}

std::string render_tree(const SememeTree& tree, RenderFormat format, RenderOptions options) {
  std::string out;
  switch (format) {
    case RenderFormat::Ascii:
      out = ascii_head(tree.head) + "\n";
      ascii_children(tree, "", options.ascii_only ? kPlain : kBoxDrawing, out);
      break;
    case RenderFormat::Dot: {
      out = "digraph sememe_tree {\n";
      std::size_t next = 0;
      dot_nodes(tree, next, out);
      out += "}\n";
      break;
    }
    case RenderFormat::Json:
      out = tree_to_json(tree).dump();
      break;
  }
  return out;
}

Json tree_to_json(const SememeTree& tree) {
  Json children = Json::array();
  for (const auto& child : tree.children) {
    Json edge = Json::object();
    edge["role"] = child.role;
    edge["tree"] = tree_to_json(child.tree);
    children.push_back(std::move(edge));
  }
  Json j = Json::object();
  j["head"] = head_to_json(tree.head);
  j["children"] = std::move(children);
  return j;
}

SememeTree tree_from_json(const Json& json) {
  if (!json.is_object() || !json.contains("head") || !json.contains("children")) {
    malformed("node needs 'head' and 'children'");
  }
  SememeTree tree(head_from_json(json.at("head")));
  const Json& children = json.at("children");
  if (!children.is_array()) malformed("'children' must be an array");
  for (const Json& edge : children) {
    if (!edge.is_object() || !edge.contains("role") || !edge.contains("tree") || !edge.at("role").is_string()) {
      malformed("child needs string 'role' and 'tree'");
    }
    auto role = edge.at("role").get<std::string>();
    if (!is_valid_role_name(role)) malformed("invalid role name '" + role + "'");
    tree.add(std::move(role), tree_from_json(edge.at("tree")));
  }
  return tree;
}

}  // namespace sememe_kb
