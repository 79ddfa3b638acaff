#pragma once

#include <cstdint>
#include <random>

namespace oneshot {

/// Random source used across the pipeline. A fixed engine keeps results
/// reproducible for a given seed.
using Rng = std::mt19937_64;

/// Independent sub-streams derived from one experiment seed.
enum class SeedStream : std::uint64_t {
  split = 1,
  pairs = 2,
  init = 3,
  evaluation = 4,
  epoch_pairs = 5,
};

/// SplitMix64 finalizer.
std::uint64_t mix_seed(std::uint64_t value);

std::uint64_t derive_seed(std::uint64_t base, SeedStream stream);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace oneshot
