#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace hybridpir {

// Every random draw in the library goes through this engine, so a seed fully
// determines a run. mt19937_64 output is fixed by the standard; the helpers
// below avoid the implementation-defined std distributions.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound). bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace hybridpir
