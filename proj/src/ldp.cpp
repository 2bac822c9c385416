#include "monodrift/ldp.hpp"

#include <cmath>
#include <limits>

#include "monodrift/errors.hpp"

namespace monodrift {

EventSpec EventSpec::h_ball_complement(double radius) {
    if (!(radius > 0.0)) throw ConfigError("event: radius must be positive");
    return EventSpec{Kind::HBallComplement, radius, 0};
}

EventSpec EventSpec::mode_threshold(int mode, double level) {
    if (!(level > 0.0)) throw ConfigError("event: level must be positive");
    if (mode < 0) throw ConfigError("event: mode index must be nonnegative");
    return EventSpec{Kind::ModeThreshold, level, mode};
}

bool EventSpec::contains(const GalerkinSpace& space, const StateVec& v) const {
    switch (kind) {
        case Kind::HBallComplement:
            return std::sqrt(h_norm_sq(space, v)) >= radius_or_level;
        case Kind::ModeThreshold:
            if (mode_index >= static_cast<int>(v.size()))
                throw ConfigError("event: mode index out of range");
            return std::abs(v[mode_index]) >= radius_or_level;
    }
    return false;
}

std::pair<double, double> estimate_probability(const ModelSpec& model, double eps,
                                               const EventSpec& event, int n_draws,
                                               const PullbackOptions& opts,
                                               std::uint64_t seed, int workers) {
    if (n_draws < 1) throw ConfigError("estimate_probability: n_draws >= 1 required");
    const SampleSet set = invariant_samples(model, eps, n_draws, opts, seed, workers);
    std::int64_t hits = 0;
    for (const auto& v : set.values)
        if (event.contains(model.space, v)) ++hits;
    const double p = static_cast<double>(hits) / static_cast<double>(n_draws);
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_draws));
    return {p, se};
}

ProbeResult slope_fit(const std::vector<double>& eps_list, const std::vector<double>& p_hat,
                      const std::vector<double>& stderr_,
                      std::optional<double> rate_reference) {
    if (eps_list.size() != p_hat.size() || eps_list.size() != stderr_.size())
        throw ConfigError("slope_fit: input lengths differ");
    ProbeResult res;
    res.eps_list = eps_list;
    res.p_hat = p_hat;
    res.stderr_ = stderr_;
    res.rate_reference = rate_reference;
    res.neg_eps_log_p.resize(eps_list.size());

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n_pos = 0;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (p_hat[i] > 0.0) {
            const double y = -eps_list[i] * std::log(p_hat[i]);
            res.neg_eps_log_p[i] = y;
            sx += eps_list[i];
            sy += y;
            sxx += eps_list[i] * eps_list[i];
            sxy += eps_list[i] * y;
            ++n_pos;
        } else {
            res.neg_eps_log_p[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    if (n_pos < 3)
        throw std::runtime_error("slope_fit: need at least 3 positive estimates, got " +
                                 std::to_string(n_pos));
    const double denom = static_cast<double>(n_pos) * sxx - sx * sx;
    const double slope = (static_cast<double>(n_pos) * sxy - sx * sy) / denom;
    res.fitted_limit = (sy - slope * sx) / static_cast<double>(n_pos);
    return res;
}

}  // namespace monodrift
