#include "lvbmt/rng.hpp"

#include <algorithm>

namespace lvbmt {

std::vector<size_t> sample_indices(size_t n, size_t k, uint64_t seed) {
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  deterministic_shuffle(idx, rng);
  if (k < n) idx.resize(k);
  return idx;
}

}  // namespace lvbmt
