#include "oneshot/rng.hpp"

namespace oneshot {

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, SeedStream stream) {
  return mix_seed(base ^ mix_seed(static_cast<std::uint64_t>(stream)));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t h = mix_seed(base);
  h = mix_seed(h ^ a);
  h = mix_seed(h ^ b);
  return mix_seed(h ^ c);
}

}  // namespace oneshot
