#pragma once

#include <cstdint>
#include <random>

namespace ecga {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer, used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic seed schedule: a (master, stream, counter) triple always maps
/// to the same seed, so any experiment replays exactly from its master seed
/// regardless of execution order or thread count.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t counter) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + counter);
}

/// Folds one more component (phase id, repeat index, probe size, ...) into a
/// stream id. Chaining compose_stream builds hierarchical, collision-resistant
/// stream ids for derive_seed.
constexpr std::uint64_t compose_stream(std::uint64_t stream,
                                       std::uint64_t component) {
  return splitmix64(stream ^ splitmix64(component));
}

}  // namespace ecga
