#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace brt {

// Portable seeded stream. std::mt19937_64's output sequence is fixed by the
// standard; the distribution adaptors are not, so bounded draws are done here.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// floor(fraction * n), at least 2 and at most n.
inline std::size_t subsample_size(std::size_t n, double fraction) {
  const auto k = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n) * (1.0 + 1e-12)));
  return std::min(n, std::max<std::size_t>(k, 2));
}

// Draws `k` of `population` without replacement with a partial Fisher-Yates
// shuffle, returned in ascending order. Drawing the whole population consumes
// no randomness.
inline std::vector<std::size_t> draw_without_replacement(const std::vector<std::size_t>& population,
                                                         std::size_t k, RandomStream& rng) {
  std::vector<std::size_t> pool = population;
  if (k >= pool.size()) return pool;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace brt
