#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace shadowlab {

// Deterministic helpers on top of mt19937_64. std::uniform_real_distribution
// is implementation-defined; these are not, so seeded runs reproduce bitwise.
inline double rand_u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double rand_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * rand_u01(rng);
}

inline int rand_index(std::mt19937_64& rng, int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

// Log-uniform draw, handy for radii spanning decades.
inline double rand_log(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(rand_in(rng, std::log(lo), std::log(hi)));
}

} // namespace shadowlab
