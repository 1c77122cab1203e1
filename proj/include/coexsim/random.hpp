#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace coexsim {

/// mt19937_64 output is fully specified by the standard, unlike the
/// std distributions, so draws below are identical on every platform.
using Rng = std::mt19937_64;

/// Independent random streams derived from one run seed.
enum class Stream : std::uint64_t {
  Layout = 1,
  Mobility = 2,
  Mac = 3,
};

/// Folds a list of words into one 64-bit key with the splitmix64 finalizer.
std::uint64_t mix_key(std::initializer_list<std::uint64_t> words);

inline Rng make_rng(std::uint64_t key) { return Rng{key}; }

/// Uniform integer in [0, n). Requires n > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace coexsim
