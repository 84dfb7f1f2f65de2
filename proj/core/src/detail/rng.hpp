#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace genreforge::detail {

// std::uniform_*_distribution is implementation-defined, so every random
// draw in the library goes through these to keep seeded runs reproducible
// across compilers.

inline std::size_t rng_index(std::mt19937& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

// Uniform in (0, 1).
inline double rng_unit(std::mt19937& rng) {
  return (static_cast<double>(rng()) + 0.5) / 4294967296.0;
}

inline double rng_uniform(std::mt19937& rng, double lo, double hi) {
  return lo + (hi - lo) * rng_unit(rng);
}

// In-place Fisher-Yates.
template <typename T>
void rng_shuffle(std::mt19937& rng, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng_index(rng, i)]);
  }
}

// k distinct indices from [0, n), in draw order.
inline std::vector<std::size_t> rng_sample_without_replacement(
    std::mt19937& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t i = 0; i < k && i < n; ++i) {
    std::size_t j = i + rng_index(rng, n - i);
    std::swap(pool[i], pool[j]);
    picked.push_back(pool[i]);
  }
  return picked;
}

}  // namespace genreforge::detail
