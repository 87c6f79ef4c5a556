#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <utility>
#include <vector>

namespace fragalign {

// Multiset over dense element ids (places, in practice). Entries are kept
// sorted by id with strictly positive counts, so equality, ordering and
// hashing all agree on a canonical form.
class Multiset {
public:
  using Entry = std::pair<uint32_t, uint32_t>;  // (id, count)

  Multiset() = default;

  static Multiset single(uint32_t id, uint32_t count = 1);
  static Multiset from_ids(std::initializer_list<uint32_t> ids);
  static Multiset from_ids(const std::vector<uint32_t>& ids);

  uint32_t count(uint32_t id) const;
  bool contains(uint32_t id) const { return count(id) > 0; }
  bool empty() const { return entries_.empty(); }
  std::size_t total() const;
  std::size_t distinct() const { return entries_.size(); }

  void add(uint32_t id, uint32_t k = 1);
  // Throws Error(invalid_argument) if fewer than k copies are present.
  void remove(uint32_t id, uint32_t k = 1);

  const std::vector<Entry>& entries() const { return entries_; }

  bool operator==(const Multiset&) const = default;
  auto operator<=>(const Multiset&) const = default;

  struct Hash {
    std::size_t operator()(const Multiset& m) const;
  };

private:
  std::vector<Entry> entries_;
};

Multiset multiset_union(const Multiset& a, const Multiset& b);

using Marking = Multiset;
using MarkingSet = std::set<Marking>;

// Pairwise multiset union of two sets of markings. Empty operand gives the
// empty set.
MarkingSet marking_set_product(const MarkingSet& a, const MarkingSet& b);

}  // namespace fragalign
