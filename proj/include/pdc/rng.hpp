#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pdc/errors.hpp"

namespace pdc {

// All randomness flows through mt19937_64 plus the hand-rolled draws below.
// std::uniform_int_distribution and friends are implementation-defined, so
// using them would tie results to a particular standard library.
using Rng = std::mt19937_64;

inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer; decorrelates consecutive seeds.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

// Uniform draw from [0, n). Modulo bias is irrelevant at the sizes used here
// and keeps the mapping portable.
inline std::size_t draw_index(Rng& rng, std::size_t n) {
  if (n == 0) throw InvalidArgument("draw_index: empty range");
  return std::size_t(rng() % n);
}

// Uniform double in [0, 1) with 53 random bits.
inline double draw_unit(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// Poisson by inversion. Large means are split into chunks so the running
// product stays away from underflow.
inline long draw_poisson(Rng& rng, double mean) {
  if (mean < 0) throw InvalidArgument("draw_poisson: negative mean");
  long total = 0;
  while (mean > 0) {
    double lambda = mean > 30.0 ? 30.0 : mean;
    mean -= lambda;
    double limit = std::exp(-lambda);
    double prod = draw_unit(rng);
    long k = 0;
    while (prod > limit) {
      ++k;
      prod *= draw_unit(rng);
    }
    total += k;
  }
  return total;
}

// First k entries of a seeded partial Fisher-Yates shuffle of [0, n).
inline std::vector<int> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) throw InvalidArgument("sample_without_replacement: k > n");
  std::vector<int> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = int(i);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + draw_index(rng, n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace pdc
