// Monte Carlo rare-event probes of the invariant law and epsilon-scaling
// fits of -eps log p against computed rate values.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monodrift/models.hpp"
#include "monodrift/stationary.hpp"

namespace monodrift {

struct EventSpec {
    enum class Kind { HBallComplement, ModeThreshold } kind = Kind::HBallComplement;
    double radius_or_level = 1.0;
    int mode_index = 0;  // ModeThreshold only

    bool contains(const GalerkinSpace& space, const StateVec& v) const;

    static EventSpec h_ball_complement(double radius);
    static EventSpec mode_threshold(int mode, double level);
};

struct ProbeResult {
    std::vector<double> eps_list;        // decreasing
    std::vector<double> p_hat;
    std::vector<double> stderr_;
    std::vector<double> neg_eps_log_p;   // NaN where p_hat = 0
    double fitted_limit = 0.0;
    std::optional<double> rate_reference;
};

/// Fraction of invariant-law draws inside the event, with binomial
/// standard error. p_hat = 0 is a valid flagged outcome.
std::pair<double, double> estimate_probability(const ModelSpec& model, double eps,
                                               const EventSpec& event, int n_draws,
                                               const PullbackOptions& opts,
                                               std::uint64_t seed, int workers = 1);

/// Affine extrapolation of -eps log p_hat to eps -> 0 over the entries
/// with p_hat > 0 (at least 3 required).
ProbeResult slope_fit(const std::vector<double>& eps_list, const std::vector<double>& p_hat,
                      const std::vector<double>& stderr_,
                      std::optional<double> rate_reference = std::nullopt);

}  // namespace monodrift
