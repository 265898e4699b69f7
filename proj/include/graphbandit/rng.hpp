#pragma once

#include <cstdint>

namespace graphbandit::rng {

// Counter-based randomness: every draw is a pure function of the key words,
// so streams can be split by (seed, stream, counter) without shared state and
// results never depend on evaluation order or thread count.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t k0, std::uint64_t k1) {
    return splitmix64(splitmix64(k0) ^ k1);
}

inline std::uint64_t mix(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2) {
    return splitmix64(mix(k0, k1) ^ k2);
}

// Uniform double in [0, 1).
inline double uniform01(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2 = 0) {
    return static_cast<double>(mix(k0, k1, k2) >> 11) * 0x1.0p-53;
}

} // namespace graphbandit::rng
