#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace depthcur {

// mt19937_64 has a fully specified output sequence, so draws are identical on
// every platform as long as we avoid the implementation-defined std
// distributions. All sampling goes through the helpers below.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n). n must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

/// Uniform integer in [lo, hi], inclusive.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_index(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed for one (entry, variant) work item. Independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view id,
                                 std::uint64_t variant) {
    std::uint64_t h = splitmix64(global_seed);
    h = splitmix64(h ^ fnv1a64(id));
    h = splitmix64(h ^ variant);
    return h;
}

}  // namespace depthcur
