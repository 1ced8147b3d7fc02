#include "sememe_kb/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sememe_kb/error.hpp"

namespace sememe_kb {

namespace detail {

// Flattened definition trees. Role names, literal texts and subtree
// canonical keys are replaced by their rank in lexicographic order, so the
// greedy tie-break depends only on tree content, never on which trees
// happen to share a forest.
struct CompiledForest {
  enum class Kind : std::uint8_t { Sememe, Placeholder, Literal };

  struct Node {
    Kind kind = Kind::Sememe;
    std::uint32_t value = 0;  // sememe id, placeholder char, or literal rank
    std::uint32_t role = 0;   // role of the edge from the parent
    std::uint32_t key = 0;    // canonical-key rank of the subtree
    std::uint32_t first = 0;  // first child slot
    std::uint32_t count = 0;
  };

  std::vector<Node> nodes;
  std::vector<std::uint32_t> roots;

  std::uint32_t add(const SememeTree& tree, const Taxonomy& taxonomy) {
    const auto root = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    fill(root, tree, taxonomy);
    roots.push_back(root);
    return root;
  }

  void finalize() {
    const auto roles = ranks(role_ids_);
    const auto keys = ranks(key_ids_);
    const auto literals = ranks(literal_ids_);
    for (Node& n : nodes) {
      n.role = roles.empty() ? 0 : roles[n.role];
      n.key = keys[n.key];
      if (n.kind == Kind::Literal) n.value = literals[n.value];
    }
    for (const Node& n : nodes) {
      std::sort(nodes.begin() + n.first, nodes.begin() + n.first + n.count, [](const Node& a, const Node& b) {
        return a.role != b.role ? a.role < b.role : a.key < b.key;
      });
    }
    role_ids_.clear();
    key_ids_.clear();
    literal_ids_.clear();
  }

 private:
  using Interner = std::map<std::string, std::uint32_t, std::less<>>;

  static std::uint32_t intern(Interner& table, std::string_view text) {
    const auto it = table.find(text);
    if (it != table.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(table.size());
    table.emplace(std::string(text), id);
    return id;
  }

  static std::vector<std::uint32_t> ranks(const Interner& table) {
    std::vector<std::uint32_t> out(table.size());
    std::uint32_t rank = 0;
    for (const auto& [text, id] : table) out[id] = rank++;
    return out;
  }

  std::string fill(std::uint32_t slot, const SememeTree& tree, const Taxonomy& taxonomy) {
    {
      Node& n = nodes[slot];
      if (const auto* ref = std::get_if<SememeRef>(&tree.head)) {
        const Sememe* s = taxonomy.find(*ref);
        if (!s) throw KbError(ErrorKind::UnknownSememe, "unknown sememe " + ref->str());
        n.kind = Kind::Sememe;
        n.value = s->id;
      } else if (const auto* p = std::get_if<Placeholder>(&tree.head)) {
        n.kind = Kind::Placeholder;
        n.value = static_cast<unsigned char>(*p);
      } else {
        n.kind = Kind::Literal;
        n.value = intern(literal_ids_, std::get<Literal>(tree.head).text);
      }
    }

    const auto first = static_cast<std::uint32_t>(nodes.size());
    const auto count = static_cast<std::uint32_t>(tree.children.size());
    nodes[slot].first = first;
    nodes[slot].count = count;
    nodes.resize(nodes.size() + count);

    std::vector<std::string> parts;
    parts.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto& child = tree.children[i];
      nodes[first + i].role = intern(role_ids_, child.role);
      parts.push_back(child.role + "=" + fill(first + i, child.tree, taxonomy));
    }
    std::sort(parts.begin(), parts.end());

    std::string key = "{" + render_head(tree.head);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      key += i == 0 ? ':' : ',';
      key += parts[i];
    }
    key += '}';
    nodes[slot].key = intern(key_ids_, key);
    return key;
  }

  Interner role_ids_;
  Interner key_ids_;
  Interner literal_ids_;
};

}  // namespace detail

namespace {

using Forest = detail::CompiledForest;

class Scorer {
 public:
  Scorer(const Forest& forest, const Taxonomy& taxonomy, const SimilarityConfig& config)
      : forest_(forest), taxonomy_(taxonomy), config_(config) {}

  double nodes(std::uint32_t x, std::uint32_t y) const {
    const Forest::Node& a = forest_.nodes[x];
    const Forest::Node& b = forest_.nodes[y];
    const double head = heads(a, b);
    double children = 1.0;
    if (a.count != 0 || b.count != 0) {
      std::uint32_t i = a.first;
      std::uint32_t j = b.first;
      const std::uint32_t i_end = a.first + a.count;
      const std::uint32_t j_end = b.first + b.count;
      std::size_t roles = 0;
      double total = 0.0;
      while (i < i_end || j < j_end) {
        std::uint32_t role = UINT32_MAX;
        if (i < i_end) role = forest_.nodes[i].role;
        if (j < j_end) role = std::min(role, forest_.nodes[j].role);
        const std::uint32_t i0 = i;
        const std::uint32_t j0 = j;
        while (i < i_end && forest_.nodes[i].role == role) ++i;
        while (j < j_end && forest_.nodes[j].role == role) ++j;
        ++roles;
        if (i != i0 && j != j0) total += match(i0, i, j0, j) / static_cast<double>(std::max(i - i0, j - j0));
      }
      children = total / static_cast<double>(roles);
    }
    return config_.beta_root * head + (1.0 - config_.beta_root) * children;
  }

  double sememes(SememeId a, SememeId b) const {
    if (a == b) return 1.0;
    const auto d = taxonomy_.path_distance(a, b);
    if (!d) return config_.cross_tree_sim;
    return config_.alpha / (config_.alpha + static_cast<double>(*d));
  }

 private:
  double heads(const Forest::Node& a, const Forest::Node& b) const {
    if (a.kind != b.kind) return 0.0;
    switch (a.kind) {
      case Forest::Kind::Sememe: return sememes(a.value, b.value);
      case Forest::Kind::Placeholder: return a.value == b.value ? config_.placeholder_match : 0.0;
      case Forest::Kind::Literal: return a.value == b.value ? 1.0 : 0.0;
    }
    return 0.0;
  }

  // Sum of greedily matched pair scores between two same-role child runs.
  double match(std::uint32_t i0, std::uint32_t i1, std::uint32_t j0, std::uint32_t j1) const {
    if (i1 - i0 == 1 && j1 - j0 == 1) return nodes(i0, j0);

    struct Candidate {
      double score;
      std::uint32_t key_lo, key_hi;
      std::uint32_t i, j;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<std::size_t>(i1 - i0) * (j1 - j0));
    for (std::uint32_t i = i0; i < i1; ++i) {
      for (std::uint32_t j = j0; j < j1; ++j) {
        const std::uint32_t ki = forest_.nodes[i].key;
        const std::uint32_t kj = forest_.nodes[j].key;
        candidates.push_back({nodes(i, j), std::min(ki, kj), std::max(ki, kj), i - i0, j - j0});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.key_lo != b.key_lo) return a.key_lo < b.key_lo;
      if (a.key_hi != b.key_hi) return a.key_hi < b.key_hi;
      return a.i != b.i ? a.i < b.i : a.j < b.j;
    });

    std::vector<bool> used_i(i1 - i0, false);
    std::vector<bool> used_j(j1 - j0, false);
    std::size_t remaining = std::min(i1 - i0, j1 - j0);
    double sum = 0.0;
    for (const Candidate& c : candidates) {
      if (remaining == 0) break;
      if (used_i[c.i] || used_j[c.j]) continue;
      used_i[c.i] = used_j[c.j] = true;
      sum += c.score;
      --remaining;
    }
    return sum;
  }

  const Forest& forest_;
  const Taxonomy& taxonomy_;
  const SimilarityConfig& config_;
};

bool in_unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

void SimilarityConfig::validate() const {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw KbError(ErrorKind::InvalidArgument, "alpha must be positive");
  if (!in_unit_interval(beta_root)) throw KbError(ErrorKind::InvalidArgument, "beta_root must be within [0, 1]");
  if (!in_unit_interval(cross_tree_sim)) {
    throw KbError(ErrorKind::InvalidArgument, "cross_tree_sim must be within [0, 1]");
  }
  if (!in_unit_interval(placeholder_match)) {
    throw KbError(ErrorKind::InvalidArgument, "placeholder_match must be within [0, 1]");
  }
}

SimilarityConfig SimilarityConfig::from_json(std::string_view text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw KbError(ErrorKind::InvalidArgument, std::string("similarity config: ") + e.what());
  }
  if (!obj.is_object()) throw KbError(ErrorKind::InvalidArgument, "similarity config must be a JSON object");

  SimilarityConfig config;
  const std::pair<const char*, double*> fields[] = {{"alpha", &config.alpha},
                                                    {"beta_root", &config.beta_root},
                                                    {"cross_tree_sim", &config.cross_tree_sim},
                                                    {"placeholder_match", &config.placeholder_match}};
  for (const auto& [key, value] : obj.items()) {
    const auto field = std::find_if(std::begin(fields), std::end(fields),
                                    [&](const auto& f) { return key == f.first; });
    if (field == std::end(fields)) {
      throw KbError(ErrorKind::InvalidArgument, "similarity config: unknown field '" + key + "'");
    }
    if (!value.is_number()) {
      throw KbError(ErrorKind::InvalidArgument, "similarity config: field '" + key + "' must be a number");
    }
    *field->second = value.get<double>();
  }
  config.validate();
  return config;
}

SimilarityConfig SimilarityConfig::from_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw KbError(ErrorKind::Io, "cannot open " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

double sememe_similarity(SememeId a, SememeId b, const Taxonomy& taxonomy, const SimilarityConfig& config) {
  taxonomy.get(a);
  taxonomy.get(b);
  Forest empty;
  return Scorer(empty, taxonomy, config).sememes(a, b);
}

double tree_similarity(const SememeTree& a, const SememeTree& b, const Taxonomy& taxonomy,
                       const SimilarityConfig& config) {
  Forest forest;
  const std::uint32_t ra = forest.add(a, taxonomy);
  const std::uint32_t rb = forest.add(b, taxonomy);
  forest.finalize();
  return Scorer(forest, taxonomy, config).nodes(ra, rb);
}

SimilarityEngine::SimilarityEngine(std::shared_ptr<const Lexicon> lexicon, SimilarityConfig config)
    : lexicon_(std::move(lexicon)), config_(config), forest_(std::make_unique<detail::CompiledForest>()) {
  config_.validate();
  const auto senses = lexicon_->senses();
  forest_->nodes.reserve(senses.size() * 4);
  for (const Sense& s : senses) forest_->add(s.def, lexicon_->taxonomy());
  forest_->finalize();
}

SimilarityEngine::~SimilarityEngine() = default;
SimilarityEngine::SimilarityEngine(SimilarityEngine&&) noexcept = default;
SimilarityEngine& SimilarityEngine::operator=(SimilarityEngine&&) noexcept = default;

std::uint32_t SimilarityEngine::slot_of(SenseId id) const {
  const Sense& s = lexicon_->get(id);
  return static_cast<std::uint32_t>(&s - lexicon_->senses().data());
}

double SimilarityEngine::slot_similarity(std::uint32_t a, std::uint32_t b) const {
  return Scorer(*forest_, lexicon_->taxonomy(), config_).nodes(forest_->roots[a], forest_->roots[b]);
}

double SimilarityEngine::sememe_similarity(SememeId a, SememeId b) const {
  return sememe_kb::sememe_similarity(a, b, lexicon_->taxonomy(), config_);
}

double SimilarityEngine::sense_similarity(SenseId a, SenseId b) const {
  return slot_similarity(slot_of(a), slot_of(b));
}

WordSimilarity SimilarityEngine::word_similarity(std::string_view a, std::string_view b, Lang lang) const {
  const auto senses_a = lexicon_->senses_for_word(a, lang);
  if (senses_a.empty()) throw KbError(ErrorKind::NoSuchWord, "no such word '" + std::string(a) + "'");
  const auto senses_b = lexicon_->senses_for_word(b, lang);
  if (senses_b.empty()) throw KbError(ErrorKind::NoSuchWord, "no such word '" + std::string(b) + "'");

  const Sense* base = lexicon_->senses().data();
  WordSimilarity best{-1.0, 0, 0, 0};
  for (const Sense* sa : senses_a) {
    for (const Sense* sb : senses_b) {
      const double score =
          slot_similarity(static_cast<std::uint32_t>(sa - base), static_cast<std::uint32_t>(sb - base));
      ++best.pairs_evaluated;
      if (score > best.score) {
        best.score = score;
        best.best_a = sa->id;
        best.best_b = sb->id;
      }
    }
  }
  return best;
}

std::vector<ScoredSense> SimilarityEngine::nearest_senses(SenseId target, std::size_t k) const {
  const std::uint32_t t = slot_of(target);
  if (k == 0) throw KbError(ErrorKind::InvalidK, "k must be at least 1");

  const auto senses = lexicon_->senses();
  const std::size_t n = senses.size();
  std::vector<double> scores(n, 0.0);
  auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (i != t) scores[i] = slot_similarity(t, static_cast<std::uint32_t>(i));
    }
  };

  unsigned workers = threads_ ? threads_ : std::max(1u, std::thread::hardware_concurrency());
  if (n < 4096) workers = 1;
  if (workers == 1) {
    score_range(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back(score_range, begin, end);
    }
  }

  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (i != t) order.push_back(i);
  }
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::uint32_t a, std::uint32_t b) { return scores[a] != scores[b] ? scores[a] > scores[b] : a < b; });

  std::vector<ScoredSense> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({&senses[order[i]], scores[order[i]]});
  return out;
}

}  // namespace sememe_kb
