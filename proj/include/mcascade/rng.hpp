#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mcas {

// Counter-based randomness: every draw is a pure function of
// (seed, level, index, lane, draw). No state, so a realization can be
// deepened or re-queried in any order without resampling earlier levels.
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Keyed hash over the full node coordinate. Two rounds of the splitmix
// finalizer between words keeps the lanes decorrelated.
inline std::uint64_t hash(std::uint64_t seed, std::uint64_t level,
                          std::uint64_t index, std::uint64_t lane,
                          std::uint64_t draw = 0) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ level);
    h = mix64(h ^ index);
    h = mix64(h ^ (lane | (draw << 32)));
    return mix64(h);
}

// Uniform on (0,1); offset keeps the value strictly positive so logs are safe.
inline double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t level,
                      std::uint64_t index, std::uint64_t lane,
                      std::uint64_t draw = 0) {
    return uniform01(hash(seed, level, index, lane, draw));
}

// Standard normal via Box-Muller on two counter draws.
inline double normal(std::uint64_t seed, std::uint64_t level,
                     std::uint64_t index, std::uint64_t lane) {
    const double u1 = uniform(seed, level, index, lane, 0);
    const double u2 = uniform(seed, level, index, lane, 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rng
}  // namespace mcas
