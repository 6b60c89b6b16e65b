#ifndef ORDRANK_RANDOM_HPP
#define ORDRANK_RANDOM_HPP

#include <cstdint>
#include <random>

namespace ordrank {

/// Engine used throughout; one instance per worker, never shared.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer, used to derive independent seeds from a lineage.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for replication `rep` of grid point `grid_id` under `base_seed`.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t grid_id, std::uint64_t rep) {
  return mix64(mix64(mix64(base_seed) ^ grid_id) ^ rep);
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) for bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(bound)) % bound;
}

}  // namespace ordrank

#endif  // ORDRANK_RANDOM_HPP
