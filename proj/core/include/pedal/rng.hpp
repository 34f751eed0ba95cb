#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pedal {

/// Deterministic seeded generator. mt19937_64 output is fully specified by
/// the standard, and bounded draws use rejection sampling rather than
/// std::uniform_int_distribution, so sequences are identical across
/// platforms and standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Unbiased draw in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::mt19937_64 gen_;
};

/// First `count` indices of a seeded partial Fisher-Yates shuffle of
/// [0, n). Order is draw order.
inline std::vector<std::size_t> draw_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  SeededRng rng(seed);
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace pedal
