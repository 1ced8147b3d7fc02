#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sememe_kb/kdml.hpp"

namespace sememe_kb {

using Json = nlohmann::ordered_json;

enum class RenderFormat { Ascii, Dot, Json };

std::string_view to_string(RenderFormat format) noexcept;
std::optional<RenderFormat> parse_render_format(std::string_view text) noexcept;

struct RenderOptions {
  /// Ascii only: use `|-` / `` `- `` connectors instead of box drawing.
  bool ascii_only = false;
};

/// Ascii: one node per line, `[role]` before each child head.
/// Dot: `digraph`, nodes numbered in preorder, edges labelled with roles.
/// Json: compact `{"head":...,"children":[{"role":...,"tree":...}]}`.
std::string render_tree(const SememeTree& tree, RenderFormat format, RenderOptions options = {});

Json tree_to_json(const SememeTree& tree);
/// Inverse of `tree_to_json`; throws KbError(InvalidArgument) on malformed
/// input.
SememeTree tree_from_json(const Json& json);

}  // namespace sememe_kb
