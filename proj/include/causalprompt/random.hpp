#pragma once

// Deterministic randomness helpers. std::mt19937_64 output is fully specified
// by the standard, but the <random> distributions and std::shuffle are not,
// so bounded draws and shuffles are spelled out here to keep a given seed
// reproducible across compilers and standard libraries.

#include <cstdint>
#include <random>
#include <vector>

namespace causalprompt {

// Unbiased draw from [0, n) via rejection sampling; n must be > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates; identical results for identical seeds everywhere.
template <typename T>
void shuffle_deterministic(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

inline std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  shuffle_deterministic(p, rng);
  return p;
}

}  // namespace causalprompt
