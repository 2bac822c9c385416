// Counter-based random number generation.
//
// Every draw is a pure function of a key tuple, so simulations replay
// bit-exactly from a seed and ensembles can be evaluated in any order or
// from any number of workers. Brownian increments are produced by a
// root-plus-bridge scheme over fixed "cells" of width 1/q (q the odd part
// of 1/dt), which makes two grids with the same seed agree on shared
// increments: a path restricted to a sub-window reuses the identical
// values, and halving dt splits each increment into two that sum back to
// the original (up to one rounding in the addition).

#pragma once

#include <cstdint>
#include <initializer_list>

namespace monodrift::rng {

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Combine a key tuple into one 64-bit word.
inline std::uint64_t hash_key(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x8f5e2b4a01c3d6ffULL;
    for (std::uint64_t w : words)
        h = mix64(h ^ (w + 0x9e3779b97f4a7c15ULL));
    return h;
}

/// Uniform draw in (0,1], 53-bit resolution.
inline double uniform01(std::uint64_t key) {
    return (static_cast<double>(key >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal from a key (Box-Muller, cosine branch).
double normal(std::uint64_t key);

/// Independent sub-seed for ensemble member `index`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return hash_key({seed, 0x5eedULL, index});
}

/// Decomposition 1/dt = q * 2^level with q odd. Rejects dt whose inverse
/// is not an integer to within 1e-6.
struct StepScheme {
    std::int64_t q = 1;  // odd cell count per unit time
    int level = 0;       // dyadic depth below the cell

    static StepScheme from_dt(double dt);
};

/// Brownian increment over grid step `index` (global index: step start
/// time = index * dt). N(0, dt), reproducible from (seed, col, index).
double brownian_increment(std::uint64_t seed, int col, const StepScheme& s,
                          std::int64_t index);

}  // namespace monodrift::rng
