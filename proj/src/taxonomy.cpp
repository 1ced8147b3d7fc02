#include "sememe_kb/taxonomy.hpp"

#include <algorithm>

#include "sememe_kb/error.hpp"

namespace sememe_kb {

namespace {

constexpr std::array<std::string_view, kAllCategories.size()> kCategoryNames = {
    "Thing", "Part", "Attribute", "Time", "Space", "AttributeValue", "Event"};

std::string describe(const SememeRecord& r) {
  return "sememe " + std::to_string(r.id) + " (" + r.english + "|" + r.chinese + ")";
}

}  // namespace

std::string_view to_string(Category category) noexcept {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

std::optional<Category> parse_category(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == text) return kAllCategories[i];
  }
  return std::nullopt;
}

Taxonomy Taxonomy::load(std::span<const SememeRecord> records) {
  Taxonomy tax;
  std::vector<const SememeRecord*> ordered;
  ordered.reserve(records.size());

  for (const auto& r : records) {
    if (!is_valid_label(r.english) || !is_valid_label(r.chinese)) {
      throw KbError(ErrorKind::BadRecord, describe(r) + ": labels must be non-empty and free of reserved characters");
    }
    if (!parse_category(r.category)) {
      throw KbError(ErrorKind::BadRecord, describe(r) + ": unknown category '" + r.category + "'");
    }
    ordered.push_back(&r);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SememeRecord* a, const SememeRecord* b) { return a->id < b->id; });

  tax.sememes_.reserve(ordered.size());
  for (const SememeRecord* r : ordered) {
    if (!tax.sememes_.empty() && tax.sememes_.back().id == r->id) {
      throw KbError(ErrorKind::DuplicateId, describe(*r) + ": duplicate sememe id " + std::to_string(r->id));
    }
    Sememe s{r->id, SememeRef{r->english, r->chinese}, *parse_category(r->category), r->parent};
    const std::size_t slot = tax.sememes_.size();
    if (!tax.by_ref_.emplace(s.ref.str(), slot).second) {
      throw KbError(ErrorKind::DuplicateRef, describe(*r) + ": duplicate sememe label " + s.ref.str());
    }
    tax.index_.emplace(s.id, slot);
    tax.by_english_[s.ref.english].push_back(slot);
    tax.by_chinese_[s.ref.chinese].push_back(slot);
    tax.sememes_.push_back(std::move(s));
  }

  const std::size_t n = tax.sememes_.size();
  tax.parent_slot_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Sememe& s = tax.sememes_[i];
    if (!s.parent) {
      tax.parent_slot_[i] = static_cast<std::uint32_t>(i);
      continue;
    }
    if (*s.parent == s.id) {
      throw KbError(ErrorKind::CycleDetected,
                    "sememe " + std::to_string(s.id) + " (" + s.ref.str() + "): parent chain forms a cycle");
    }
    const auto it = tax.index_.find(*s.parent);
    if (it == tax.index_.end()) {
      throw KbError(ErrorKind::DanglingParent, "sememe " + std::to_string(s.id) + " (" + s.ref.str() +
                                                   "): parent " + std::to_string(*s.parent) + " does not exist");
    }
    if (tax.sememes_[it->second].category != s.category) {
      throw KbError(ErrorKind::ParentCategoryMismatch,
                    "sememe " + std::to_string(s.id) + " (" + s.ref.str() + "): category " +
                        std::string(to_string(s.category)) + " differs from parent category " +
                        std::string(to_string(tax.sememes_[it->second].category)));
    }
    tax.parent_slot_[i] = static_cast<std::uint32_t>(it->second);
  }

  // Depths double as cycle detection: a walk that revisits a node on the
  // current path never reaches a root.
  constexpr std::uint32_t kUnknown = UINT32_MAX;
  tax.depth_.assign(n, kUnknown);
  std::vector<std::uint32_t> visit_mark(n, kUnknown);
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < n; ++start) {
    if (tax.depth_[start] != kUnknown) continue;
    path.clear();
    std::size_t cur = start;
    while (tax.depth_[cur] == kUnknown && tax.parent_slot_[cur] != cur) {
      if (visit_mark[cur] == start) {
        throw KbError(ErrorKind::CycleDetected, "sememe " + std::to_string(tax.sememes_[cur].id) + " (" +
                                                    tax.sememes_[cur].ref.str() + "): parent chain forms a cycle");
      }
      visit_mark[cur] = static_cast<std::uint32_t>(start);
      path.push_back(cur);
      cur = tax.parent_slot_[cur];
    }
    if (tax.depth_[cur] == kUnknown) tax.depth_[cur] = 0;  // root
    std::uint32_t d = tax.depth_[cur];
    for (auto it = path.rbegin(); it != path.rend(); ++it) tax.depth_[*it] = ++d;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!tax.sememes_[i].parent) {
      tax.roots_[static_cast<std::size_t>(tax.sememes_[i].category)].push_back(tax.sememes_[i].id);
    }
  }
  return tax;
}

std::size_t Taxonomy::slot(SememeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw KbError(ErrorKind::UnknownSememe, "unknown sememe " + std::to_string(id));
  return it->second;
}

const Sememe& Taxonomy::get(SememeId id) const { return sememes_[slot(id)]; }

const Sememe* Taxonomy::find(SememeId id) const noexcept {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &sememes_[it->second];
}

const Sememe* Taxonomy::find(const SememeRef& ref) const noexcept {
  const auto it = by_ref_.find(ref.str());
  return it == by_ref_.end() ? nullptr : &sememes_[it->second];
}

std::vector<const Sememe*> Taxonomy::resolve(std::string_view query) const {
  std::vector<const Sememe*> out;
  if (query.find('|') != std::string_view::npos) {
    const auto it = by_ref_.find(std::string(query));
    if (it != by_ref_.end()) out.push_back(&sememes_[it->second]);
    return out;
  }
  std::vector<std::size_t> slots;
  const std::string key(query);
  if (const auto it = by_english_.find(key); it != by_english_.end()) slots = it->second;
  if (const auto it = by_chinese_.find(key); it != by_chinese_.end()) {
    slots.insert(slots.end(), it->second.begin(), it->second.end());
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  out.reserve(slots.size());
  for (std::size_t s : slots) out.push_back(&sememes_[s]);
  return out;
}

std::vector<const Sememe*> Taxonomy::ancestors(SememeId id) const {
  std::vector<const Sememe*> out;
  std::size_t cur = slot(id);
  out.reserve(depth_[cur]);
  while (parent_slot_[cur] != cur) {
    cur = parent_slot_[cur];
    out.push_back(&sememes_[cur]);
  }
  return out;
}

std::size_t Taxonomy::depth(SememeId id) const { return depth_[slot(id)]; }

SememeId Taxonomy::root_of(SememeId id) const {
  std::size_t cur = slot(id);
  while (parent_slot_[cur] != cur) cur = parent_slot_[cur];
  return sememes_[cur].id;
}

std::optional<std::size_t> Taxonomy::path_distance(SememeId a, SememeId b) const {
  std::size_t x = slot(a);
  std::size_t y = slot(b);
  std::size_t steps = 0;
  while (depth_[x] > depth_[y]) {
    x = parent_slot_[x];
    ++steps;
  }
  while (depth_[y] > depth_[x]) {
    y = parent_slot_[y];
    ++steps;
  }
  while (x != y) {
    if (parent_slot_[x] == x) return std::nullopt;  // both at distinct roots
    x = parent_slot_[x];
    y = parent_slot_[y];
    steps += 2;
  }
  return steps;
}

std::span<const SememeId> Taxonomy::roots(Category category) const noexcept {
  return roots_[static_cast<std::size_t>(category)];
}

}  // namespace sememe_kb
