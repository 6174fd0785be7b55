#ifndef ALTCLUST_DETAIL_RNG_HPP
#define ALTCLUST_DETAIL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace altclust::detail {

// Fixed bit-level constructions; the std:: distributions are not guaranteed
// identical across standard libraries.

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline double gauss01(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 1e-300) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace altclust::detail

#endif
