#ifndef LVBMT_RNG_HPP
#define LVBMT_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace lvbmt {

// Fisher-Yates with an explicit draw sequence; std::shuffle is not
// specified byte-for-byte across standard libraries, this is.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

// First k indices of a seeded shuffle of 0..n-1.
std::vector<size_t> sample_indices(size_t n, size_t k, uint64_t seed);

}  // namespace lvbmt

#endif
