#pragma once

#include <cstdint>
#include <random>

namespace atr {

// Uniform draw in [0, n). Avoids std::uniform_int_distribution, whose
// output sequence is implementation-defined; the slight modulo bias is
// irrelevant at our scales and the sequence is stable across platforms.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

}  // namespace atr
