#pragma once

#include <cstdint>
#include <random>

namespace hypermap {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and a stream tag,
// so refactoring one consumer never perturbs the draws of another.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t tag) {
    return splitmix64(master ^ splitmix64(tag));
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t tag) {
    return std::mt19937_64(substream_seed(master, tag));
}

// Counter-based uniform draw in [0,1) keyed by (seed, i, j). Stateless, so
// pair-indexed consumers (edge sampling) stay deterministic under any
// parallel partitioning of the pair loop.
inline double pair_uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(i * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ splitmix64(j + 0xd1b54a32d192ed03ULL));
    return (h >> 11) * 0x1.0p-53;
}

} // namespace hypermap
