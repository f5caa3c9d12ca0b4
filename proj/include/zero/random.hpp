#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace zero {

// The standard distributions are implementation-defined, so everything that
// must reproduce bit-for-bit goes through these helpers on top of mt19937_64.
using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

double uniform(Rng& rng, double lo, double hi);

/// Uniform integer in [0, n). Requires n > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Standard normal via Box-Muller.
double standard_normal(Rng& rng);

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
  }
}

}  // namespace zero
