#pragma once

#include <cstdint>
#include <random>

namespace aicmab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the independent stream for episode `run_index` under `master_seed`.
/// Streams are indexed, never chained, so results do not depend on the order
/// or thread in which episodes execute.
constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    return mix64(mix64(master_seed) ^ mix64(run_index + 0x632be59bd9b4e019ULL));
}

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t run_index) {
    return Rng(stream_seed(master_seed, run_index));
}

}  // namespace aicmab
