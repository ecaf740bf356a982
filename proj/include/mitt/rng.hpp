#pragma once

#include <cstdint>
#include <random>

namespace mitt {

/// All randomness in the library flows through this engine type. Results are
/// deterministic for a fixed seed within one build; bit-exact reproducibility
/// across standard libraries is not promised.
using Rng = std::mt19937_64;

/// Canonical SplitMix64 step: advances `state` by the golden-gamma increment
/// and returns the finalized output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for Monte Carlo replication `replication_index` (0-based): the
/// (index+1)-th output of the SplitMix64 sequence started at `master_seed`.
/// This mixing is part of the stable interface; replication streams are
/// independent of execution order and worker count.
inline std::uint64_t replication_seed(std::uint64_t master_seed,
                                      std::uint64_t replication_index) {
  std::uint64_t state = master_seed + replication_index * 0x9E3779B97F4A7C15ULL;
  return splitmix64_next(state);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace mitt
