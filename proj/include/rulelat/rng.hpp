#pragma once

#include <cstdint>
#include <random>

namespace rulelat {

// SplitMix64 output function (Steele/Lea/Vigna). Fixed identity: every seed
// derived from it is reproducible across platforms and builds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of substream `stream` under `master`. A pure function of its inputs,
// so serial and parallel schedules derive identical generators.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, std::uint64_t stream) {
    return Engine{substream_seed(master, stream)};
}

// 53-bit uniform in [0,1).
inline double uniform_unit(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in the open interval (0,1); exact zeros are redrawn.
inline double uniform_open_unit(Engine& rng) {
    double u = uniform_unit(rng);
    while (u == 0.0) {
        u = uniform_unit(rng);
    }
    return u;
}

} // namespace rulelat
