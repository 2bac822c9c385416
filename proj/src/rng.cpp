#include "monodrift/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace monodrift::rng {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double normal(std::uint64_t key) {
    const double u1 = uniform01(mix64(key ^ 0x517cc1b727220a95ULL));
    const double u2 = uniform01(mix64(key ^ 0x2545f4914f6cdd1dULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

StepScheme StepScheme::from_dt(double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("StepScheme: dt must be positive");
    const double inv = 1.0 / dt;
    const auto n = static_cast<std::int64_t>(std::llround(inv));
    if (n < 1 || std::abs(inv - static_cast<double>(n)) > 1e-6 * static_cast<double>(n))
        throw std::invalid_argument("StepScheme: 1/dt must be an integer, got dt=" +
                                    std::to_string(dt));
    StepScheme s;
    s.q = n;
    s.level = 0;
    while (s.q % 2 == 0) {
        s.q /= 2;
        ++s.level;
    }
    return s;
}

namespace {

// Increment of W over dyadic interval `index` at depth r below the 1/q
// cells. Depth 0 is a root cell draw; deeper intervals halve the parent
// by a shared bridge displacement, so sibling increments sum to the
// parent's value.
double dyadic_increment(std::uint64_t seed, int col, std::int64_t q, int r,
                        std::int64_t index) {
    const double width = 1.0 / (static_cast<double>(q) * std::ldexp(1.0, r));
    if (r == 0)
        return std::sqrt(width) *
               normal(hash_key({seed, static_cast<std::uint64_t>(col), 0ULL,
                                static_cast<std::uint64_t>(index)}));
    const double parent = dyadic_increment(seed, col, q, r - 1, index >> 1);
    const double eta =
        0.5 * std::sqrt(2.0 * width) *
        normal(hash_key({seed, static_cast<std::uint64_t>(col),
                         static_cast<std::uint64_t>(r),
                         static_cast<std::uint64_t>(index >> 1)}));
    return (index & 1) ? 0.5 * parent - eta : 0.5 * parent + eta;
}

}  // namespace

double brownian_increment(std::uint64_t seed, int col, const StepScheme& s,
                          std::int64_t index) {
    return dyadic_increment(seed, col, s.q, s.level, index);
}

}  // namespace monodrift::rng
