#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace megt {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for the stream identified by `path` under `master`. Streams with
/// different paths are independent for all practical purposes, and the
/// result does not depend on the order in which streams are created.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t s = splitmix64(master);
    for (auto p : path) {
        s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    }
    return s;
}

// Stream tags.
inline constexpr std::uint64_t kStreamTopology = 0x746f706fULL;
inline constexpr std::uint64_t kStreamHomophily = 0x686f6d6fULL;
inline constexpr std::uint64_t kStreamNetwork = 0x6e657477ULL;
inline constexpr std::uint64_t kStreamDynamics = 0x64796e61ULL;
inline constexpr std::uint64_t kStreamCorpus = 0x636f7270ULL;

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool bernoulli(Rng& rng, double p) {
    return std::bernoulli_distribution(p)(rng);
}

} // namespace megt
