#pragma once

#include <cstdint>
#include <random>

namespace fragalign {

// Unbiased draw from [0, n) via rejection sampling. std::uniform_int_distribution
// is implementation defined, so sampled traces would differ across standard
// libraries; the raw mt19937_64 stream is fully specified and this keeps
// results bit-identical everywhere.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
  if (n <= 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

}  // namespace fragalign
