#include "monodrift/framework.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monodrift/errors.hpp"
#include "monodrift/rng.hpp"

namespace monodrift {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative-for-large, absolute-for-small slack normalization shared by all
// audit lines: positive means the inequality holds.
double margin(double lhs, double rhs) { return (rhs - lhs) / std::max(1.0, std::abs(rhs)); }
}  // namespace

std::string condition_name(Condition c) {
    switch (c) {
        case Condition::A2: return "A2";
        case Condition::A3: return "A3";
        case Condition::A4: return "A4";
    }
    return "?";
}

double eps_admissible_bound(const FrameworkConstants& c) {
    return (c.lambda1 * c.gamma0 - c.c_rho2) / (2.0 * c.c_b + c.lambda1 * c.l_b);
}

double delta_eps(const FrameworkConstants& c, double eps) {
    if (eps < 0.0) throw InadmissibleEpsError("delta_eps: eps must be nonnegative");
    const double d =
        (c.lambda1 * c.gamma0 - c.c_rho2 - 2.0 * eps * c.c_b - eps * c.lambda1 * c.l_b) /
        (2.0 * c.lambda1);
    if (!(d > 0.0))
        throw InadmissibleEpsError("delta_eps: eps >= (lambda1 gamma0 - C_rho2)/(2 C_B + "
                                   "lambda1 L_B) = " +
                                   std::to_string(eps_admissible_bound(c)));
    return d;
}

double c_a_rho_eps(const FrameworkConstants& c, double eps) {
    const double d = delta_eps(c, eps);
    const double c_beta =
        (c.beta > 0.0)
            ? (2.0 / (2.0 + c.beta)) *
                  std::pow(c.beta / (c.lambda1 * (2.0 + c.beta)), c.beta / 2.0)
            : 1.0;
    const double a0_sq = c.a0_dual_norm * c.a0_dual_norm;
    const double branch1 = a0_sq / (4.0 * d);
    const double branch2 =
        c_beta * d * std::pow(a0_sq / (4.0 * d * d), 1.0 + c.beta / 2.0);
    return std::max(branch1, branch2) + eps * c.c_b;
}

ConstantsReport thresholds(const FrameworkConstants& c, double eps0) {
    ConstantsReport r;
    r.eps0 = eps0;
    r.delta_eps =
        (c.lambda1 * c.gamma0 - c.c_rho2 - 2.0 * eps0 * c.c_b - eps0 * c.lambda1 * c.l_b) /
        (2.0 * c.lambda1);
    if (r.delta_eps > 0.0) {
        r.c_a_rho_eps = c_a_rho_eps(c, eps0);
    } else if (c.a0_dual_norm == 0.0) {
        // boundary case: both delta branches vanish with the drift origin
        r.c_a_rho_eps = eps0 * c.c_b;
    } else {
        delta_eps(c, eps0);  // raise the inadmissibility error
    }
    r.c_a_rho = r.c_a_rho_eps;
    r.c_rho1_used = c.c_rho1;

    const double root_arg = (4.0 + c.beta) * c.c_rho1 * r.c_a_rho / c.lambda1;
    r.gamma_tilde0 = std::max(c.c_rho2 / c.lambda1, std::sqrt(std::max(0.0, root_arg)));

    const double first =
        (c.c_rho1 > 0.0)
            ? (1.0 + c.beta) * c.lambda1 * c.gamma0 * c.gamma0 /
                  (8.0 * (2.0 + c.beta) * (2.0 + c.beta) * c.c_rho1 * c.c_b)
            : kInf;
    const double second =
        c.gamma0 / ((18.0 * c.gamma0 + c.beta * (2.0 + c.beta) * c.c_rho1) * c.c_b) *
        (2.0 * c.lambda1 * c.gamma0 - (4.0 + c.beta) * c.c_rho1 * r.c_a_rho / c.gamma0 -
         c.c_rho2);
    r.eps_tilde = std::min(first, second);
    r.eps_tilde_ns_remark = c.lambda1 * c.gamma0 / 18.0;

    r.d1 = c.lambda1 * c.gamma0 > c.c_rho2;
    r.d2 = c.lambda1 * c.gamma0 * c.gamma0 > (4.0 + c.beta) * c.c_rho1 * r.c_a_rho_eps;
    return r;
}

namespace {

FrameworkConstants raw_constants(const ModelSpec& model) {
    FrameworkConstants c;
    c.lambda1 = model.space.lambda1();
    c.gamma0 = model.mono.gamma0;
    c.beta = model.mono.beta;
    c.c_rho1 = model.mono.c_rho1.value_or(0.0);
    c.c_rho2 = model.mono.c_rho2;
    c.c_a = model.growth.c_a;
    c.kappa = model.growth.kappa;
    c.c_b = model.noise_consts.c_b;
    c.l_b = model.noise_consts.l_b;
    c.a0_dual_norm = model.a0_dual_norm;
    return c;
}

struct SamplePair {
    StateVec v1, v2;
};

// Alternate isotropic draws with low-mode-concentrated ones: isotropic
// directions carry most of their weight in high modes, where the V-norm
// slack makes [A2] loose, so the binding region would go unsampled.
SamplePair draw_pair(const ModelSpec& model, double radius_h, std::uint64_t seed, int i) {
    SamplePair pair{
        sample_state(model.space, radius_h, rng::hash_key({seed, 0xa2ULL, (std::uint64_t)(2 * i)})),
        sample_state(model.space, radius_h,
                     rng::hash_key({seed, 0xa2ULL, (std::uint64_t)(2 * i + 1)}))};
    if (i % 2 == 1) {
        const int keep = std::min(4, model.dim());
        for (int k = keep; k < model.dim(); ++k) {
            pair.v1[k] = 0.0;
            pair.v2[k] = 0.0;
        }
    }
    return pair;
}

double frob_diff_sq(const NoiseMatrix& a, const NoiseMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) {
        const double d = a.a[i] - b.a[i];
        s += d * d;
    }
    return s;
}

}  // namespace

double fit_c_rho1(const ModelSpec& model, double eps, int n_samples, double radius_h,
                  std::uint64_t seed) {
    const auto& space = model.space;
    const double gamma0 = model.mono.gamma0;
    const double c_rho2 = model.mono.c_rho2;
    const double beta = model.mono.beta;
    double fitted = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const auto [v1, v2] = draw_pair(model, radius_h, seed, i);
        StateVec diff = StateVec::zeros(space.dim());
        for (int k = 0; k < space.dim(); ++k) diff[k] = v1[k] - v2[k];
        const DualVec a1 = model.drift(eps, v1);
        const DualVec a2 = model.drift(eps, v2);
        DualVec da = DualVec::zeros(space.dim());
        for (int k = 0; k < space.dim(); ++k) da[k] = a1[k] - a2[k];
        double lhs = 2.0 * dual_pair(space, da, diff);
        if (eps > 0.0) lhs += eps * frob_diff_sq(model.noise(v1), model.noise(v2));
        const double dv = v_norm_sq(space, diff);
        const double dh = h_norm_sq(space, diff);
        const double deficit = lhs + 2.0 * gamma0 * dv - c_rho2 * dh;
        const double scale = std::abs(lhs) + 2.0 * gamma0 * dv + 1.0;
        if (deficit <= 1e-12 * scale) continue;
        const double h1 = h_norm_sq(space, v1);
        const double denom =
            (1.0 + std::pow(h1, beta / 2.0)) * v_norm_sq(space, v1) * dh;
        if (denom <= 1e-14 * scale) continue;
        fitted = std::max(fitted, deficit / denom);
    }
    return fitted;
}

FrameworkConstants effective_constants(const ModelSpec& model, double eps) {
    FrameworkConstants c = raw_constants(model);
    if (!model.mono.c_rho1.has_value())
        c.c_rho1 = fit_c_rho1(model, eps, 4000, 2.0, 0x5eedc0deULL);
    return c;
}

double delta_eps(const ModelSpec& model, double eps) {
    return delta_eps(raw_constants(model), eps);
}

double c_a_rho_eps(const ModelSpec& model, double eps) {
    return c_a_rho_eps(raw_constants(model), eps);
}

ConstantsReport thresholds(const ModelSpec& model, double eps0) {
    return thresholds(effective_constants(model, eps0), eps0);
}

AuditReport audit_condition(const ModelSpec& model, double eps, Condition condition,
                            int n_samples, double radius_h, std::uint64_t seed) {
    if (n_samples < 1) throw ConfigError("audit_condition: n_samples >= 1 required");
    const auto& space = model.space;
    FrameworkConstants c = raw_constants(model);
    if (condition == Condition::A2 && !model.mono.c_rho1.has_value())
        c.c_rho1 = fit_c_rho1(model, eps, n_samples, radius_h, seed);

    AuditReport rep;
    rep.condition = condition;
    rep.samples = n_samples;
    rep.seed = seed;
    rep.worst_margin = kInf;
    rep.c_rho1_used = c.c_rho1;

    auto consider = [&](double m, const std::string& line, int i, const StateVec& v1,
                        const StateVec& v2) {
        if (m < rep.worst_margin) {
            rep.worst_margin = m;
            rep.worst_line = line;
            rep.worst_index = i;
            rep.witness_v1 = v1;
            rep.witness_v2 = v2;
        }
    };

    for (int i = 0; i < n_samples; ++i) {
        const auto [v1, v2] = draw_pair(model, radius_h, seed, i);
        StateVec diff = StateVec::zeros(space.dim());
        for (int k = 0; k < space.dim(); ++k) diff[k] = v1[k] - v2[k];
        const double dh = h_norm_sq(space, diff);
        const double dv = v_norm_sq(space, diff);
        const double h1 = h_norm_sq(space, v1);

        switch (condition) {
            case Condition::A2: {
                const DualVec a1 = model.drift(eps, v1);
                const DualVec a2 = model.drift(eps, v2);
                DualVec da = DualVec::zeros(space.dim());
                for (int k = 0; k < space.dim(); ++k) da[k] = a1[k] - a2[k];
                double lhs = 2.0 * dual_pair(space, da, diff);
                if (eps > 0.0) lhs += eps * frob_diff_sq(model.noise(v1), model.noise(v2));
                const double rho =
                    c.c_rho1 * (1.0 + std::pow(h1, c.beta / 2.0)) * v_norm_sq(space, v1) +
                    c.c_rho2;
                consider(margin(lhs, -2.0 * c.gamma0 * dv + rho * dh), "A2", i, v1, v2);
                break;
            }
            case Condition::A3: {
                const NoiseMatrix b1 = model.noise(v1);
                const double vv = v_norm_sq(space, v1);
                consider(margin(b1.frobenius_sq(), c.c_b * (1.0 + h1) + c.l_b * vv),
                         "A3:noise-growth", i, v1, v2);
                consider(margin(frob_diff_sq(b1, model.noise(v2)), c.c_b * dh + c.l_b * dv),
                         "A3:noise-lipschitz", i, v1, v2);
                const DualVec a_eps = model.drift(eps, v1);
                const double growth_rhs =
                    c.c_a * (1.0 + vv) * (1.0 + std::pow(h1, c.kappa / 2.0));
                consider(margin(dual_norm_sq(space, a_eps), growth_rhs), "A3:drift-growth",
                         i, v1, v2);
                const DualVec a_zero = model.drift(0.0, v1);
                DualVec da = DualVec::zeros(space.dim());
                for (int k = 0; k < space.dim(); ++k) da[k] = a_eps[k] - a_zero[k];
                consider(margin(dual_norm_sq(space, da), c.c_a * eps * eps * growth_rhs),
                         "A3:eps-consistency", i, v1, v2);
                break;
            }
            case Condition::A4: {
                const NoiseMatrix b1 = model.noise(v1);
                double proj = 0.0;
                for (int col = 0; col < b1.cols; ++col) {
                    double s = 0.0;
                    for (int r = 0; r < b1.rows; ++r) s += v1[r] * b1.at(r, col);
                    proj += s * s;
                }
                const double weight = std::max(1.0, std::pow(h1, c.beta / 2.0));
                consider(margin(weight * proj, c.c_b * h1), "A4:projection", i, v1, v2);
                const NoiseMatrix b2 = model.noise(v2);
                double proj_d = 0.0;
                for (int col = 0; col < b1.cols; ++col) {
                    double s = 0.0;
                    for (int r = 0; r < b1.rows; ++r)
                        s += diff[r] * (b1.at(r, col) - b2.at(r, col));
                    proj_d += s * s;
                }
                consider(margin(proj_d, c.c_b * dh * dh), "A4:difference", i, v1, v2);
                break;
            }
        }
    }
    return rep;
}

std::vector<double> hemicontinuity_probe(const ModelSpec& model, double eps,
                                         const StateVec& v1, const StateVec& v2,
                                         const StateVec& v,
                                         const std::vector<double>& s_grid) {
    std::vector<double> out;
    out.reserve(s_grid.size());
    StateVec probe = StateVec::zeros(model.dim());
    for (double s : s_grid) {
        for (int k = 0; k < model.dim(); ++k) probe[k] = v1[k] + s * v2[k];
        out.push_back(dual_pair(model.space, model.drift(eps, probe), v));
    }
    return out;
}

}  // namespace monodrift
