#include "fragalign/multiset.hpp"

#include <algorithm>

#include "fragalign/errors.hpp"

namespace fragalign {

Multiset Multiset::single(uint32_t id, uint32_t count) {
  Multiset m;
  m.add(id, count);
  return m;
}

Multiset Multiset::from_ids(std::initializer_list<uint32_t> ids) {
  Multiset m;
  for (uint32_t id : ids) m.add(id);
  return m;
}

Multiset Multiset::from_ids(const std::vector<uint32_t>& ids) {
  Multiset m;
  for (uint32_t id : ids) m.add(id);
  return m;
}

uint32_t Multiset::count(uint32_t id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, uint32_t v) { return e.first < v; });
  if (it == entries_.end() || it->first != id) return 0;
  return it->second;
}

std::size_t Multiset::total() const {
  std::size_t n = 0;
  for (const auto& [id, count] : entries_) n += count;
  return n;
}

void Multiset::add(uint32_t id, uint32_t k) {
  if (k == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, uint32_t v) { return e.first < v; });
  if (it != entries_.end() && it->first == id) {
    it->second += k;
  } else {
    entries_.insert(it, {id, k});
  }
}

void Multiset::remove(uint32_t id, uint32_t k) {
  if (k == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, uint32_t v) { return e.first < v; });
  if (it == entries_.end() || it->first != id || it->second < k) {
    throw Error(ErrorCode::invalid_argument, "multiset remove below zero");
  }
  it->second -= k;
  if (it->second == 0) entries_.erase(it);
}

std::size_t Multiset::Hash::operator()(const Multiset& m) const {
  // FNV-1a over the entry values.
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](uint32_t v) {
    for (int i = 0; i < 4; i++) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [id, count] : m.entries()) {
    mix(id);
    mix(count);
  }
  return h;
}

Multiset multiset_union(const Multiset& a, const Multiset& b) {
  Multiset out = a;
  for (const auto& [id, count] : b.entries()) out.add(id, count);
  return out;
}

MarkingSet marking_set_product(const MarkingSet& a, const MarkingSet& b) {
  MarkingSet out;
  for (const auto& ma : a) {
    for (const auto& mb : b) out.insert(multiset_union(ma, mb));
  }
  return out;
}

}  // namespace fragalign
