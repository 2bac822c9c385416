#include "monodrift/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <utility>

#include "monodrift/errors.hpp"
#include "monodrift/sine_basis.hpp"

namespace monodrift {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::array<double, 2> eperp(const std::array<int, 2>& k) {
    const double norm = std::sqrt(static_cast<double>(k[0]) * k[0] +
                                  static_cast<double>(k[1]) * k[1]);
    return {-k[1] / norm, k[0] / norm};
}

// ---------------------------------------------------------------------------
// Noise specs and evaluators
// ---------------------------------------------------------------------------

NoiseSpec build_noise(NoiseKind kind, std::vector<double> amplitudes, double sigma0) {
    if (amplitudes.empty())
        throw ConfigError("build_noise: need at least one column amplitude");
    NoiseSpec spec;
    spec.kind = kind;
    spec.amplitudes = std::move(amplitudes);
    spec.sigma0 = sigma0;
    double amp_sq = 0.0;
    for (double a : spec.amplitudes) amp_sq += a * a;
    switch (kind) {
        case NoiseKind::Additive:
            spec.beta = 0.0;
            spec.c_b = amp_sq;
            spec.l_b = 0.0;
            break;
        case NoiseKind::BoundedMult:
            // scalar factor (1+|v|^2)^{-1/2}; Lipschitz constant below 1
            spec.beta = 0.0;
            spec.c_b = amp_sq;
            spec.l_b = 0.0;
            break;
        case NoiseKind::DecayingMult:
            if (!(sigma0 > 0.0)) throw ConfigError("decaying_mult: sigma0 must be > 0");
            spec.beta = 2.0;
            spec.c_b = sigma0 * sigma0 * amp_sq;
            spec.l_b = 0.0;
            break;
    }
    return spec;
}

NoiseSpec build_noise(const std::string& kind, std::vector<double> amplitudes, double sigma0) {
    if (kind == "additive") return build_noise(NoiseKind::Additive, std::move(amplitudes), sigma0);
    if (kind == "bounded_mult")
        return build_noise(NoiseKind::BoundedMult, std::move(amplitudes), sigma0);
    if (kind == "decaying_mult")
        return build_noise(NoiseKind::DecayingMult, std::move(amplitudes), sigma0);
    throw ConfigError("build_noise: unknown kind '" + kind + "'");
}

namespace {

double noise_scalar(const NoiseSpec& spec, double h_sq) {
    switch (spec.kind) {
        case NoiseKind::Additive: return 1.0;
        case NoiseKind::BoundedMult: return 1.0 / std::sqrt(1.0 + h_sq);
        case NoiseKind::DecayingMult: return spec.sigma0 / (1.0 + h_sq);
    }
    return 1.0;
}

// d(scalar)/d(h_sq)
double noise_scalar_deriv(const NoiseSpec& spec, double h_sq) {
    switch (spec.kind) {
        case NoiseKind::Additive: return 0.0;
        case NoiseKind::BoundedMult: return -0.5 * std::pow(1.0 + h_sq, -1.5);
        case NoiseKind::DecayingMult:
            return -spec.sigma0 / ((1.0 + h_sq) * (1.0 + h_sq));
    }
    return 0.0;
}

void fill_base_noise(const NoiseSpec& spec, const StateVec& x, NoiseMatrix& out) {
    double h_sq = 0.0;
    for (double c : x.coeffs) h_sq += c * c;
    const double s = noise_scalar(spec, h_sq);
    const int k_base = static_cast<int>(spec.amplitudes.size());
    for (int j = 0; j < k_base; ++j) out.at(j, j) = s * spec.amplitudes[j];
}

StateVec base_noise_vjp(const NoiseSpec& spec, const StateVec& x,
                        const std::vector<double>& v, const StateVec& lam) {
    StateVec grad = StateVec::zeros(x.size());
    if (spec.kind == NoiseKind::Additive) return grad;
    double h_sq = 0.0;
    for (double c : x.coeffs) h_sq += c * c;
    const int k_base = static_cast<int>(spec.amplitudes.size());
    double t = 0.0;
    for (int j = 0; j < k_base; ++j) t += spec.amplitudes[j] * v[j] * lam[j];
    const double f = 2.0 * t * noise_scalar_deriv(spec, h_sq);
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = f * x[i];
    return grad;
}

void validate_noise_fits(const GalerkinSpace& space, const NoiseSpec& spec) {
    if (static_cast<int>(spec.amplitudes.size()) > space.dim())
        throw ConfigError("noise: more columns than retained modes");
}

// ---------------------------------------------------------------------------
// 1D semilinear family (linear / Burgers / Ginzburg-Landau)
// ---------------------------------------------------------------------------

void validate_sine_space(const GalerkinSpace& space) {
    const auto& labels = space.mode_labels();
    for (int i = 0; i < space.dim(); ++i) {
        const double k = static_cast<double>(i + 1);
        if (labels[i].k1 != i + 1 || std::abs(space.v_weight(i) - k * k) > 1e-9 * k * k)
            throw ConfigError("semilinear: space must use 1D sine weights w_k = k^2");
    }
}

struct SemilinearTerms {
    int n = 0;
    bool convection = false;
    double alpha = 0.0;
    double cubic_c = 0.0;

    // u du/dx as exact Galerkin projection
    std::vector<double> conv(const std::vector<double>& u) const {
        return sine_basis::cos_sine_product(sine_basis::sine_deriv_to_cos(u), u, n);
    }
    std::vector<double> conv_vjp(const std::vector<double>& u,
                                 const std::vector<double>& lam) const {
        auto grad = sine_basis::sine_deriv_to_cos_adj(
            sine_basis::cos_sine_product_adj_cos(u, lam, n), n);
        auto g2 = sine_basis::cos_sine_product_adj_sine(sine_basis::sine_deriv_to_cos(u),
                                                        lam, n);
        for (int i = 0; i < n; ++i) grad[i] += g2[i];
        return grad;
    }

    std::vector<double> cubic(const std::vector<double>& u) const {
        return sine_basis::cos_sine_product(sine_basis::sine_product_to_cos(u, u), u, n);
    }
    std::vector<double> cubic_vjp(const std::vector<double>& u,
                                  const std::vector<double>& lam) const {
        const auto usq_cos = sine_basis::sine_product_to_cos(u, u);
        auto grad = sine_basis::cos_sine_product_adj_sine(usq_cos, lam, n);
        const auto lam_cos = sine_basis::cos_sine_product_adj_cos(u, lam, 2 * n);
        const auto g_pair = sine_basis::sine_product_to_cos_adj(u, lam_cos);
        for (int i = 0; i < n; ++i) grad[i] += 2.0 * g_pair[i];
        return grad;
    }
};

}  // namespace

ModelSpec build_linear_1d(const GalerkinSpace& space, double chi, const NoiseSpec& noise,
                          std::optional<double> declared_gamma0) {
    if (!(chi > 0.0)) throw ConfigError("linear: chi must be positive");
    validate_noise_fits(space, noise);
    const int n = space.dim();
    const int k_base = static_cast<int>(noise.amplitudes.size());

    ModelSpec m{space, "linear1d", {}, {}, {}, 0.0, {}, false,
                nullptr, nullptr, nullptr, nullptr};
    m.noise_state_independent = noise.kind == NoiseKind::Additive;
    const double true_rate = (noise.kind == NoiseKind::Additive) ? chi : chi / 2.0;
    m.mono = MonotonicityConstants{declared_gamma0.value_or(true_rate), 0.0, 0.0, noise.beta};
    if (!(m.mono.gamma0 > 0.0) || m.mono.gamma0 > true_rate + 1e-12)
        throw ConfigError("linear: declared gamma0 must lie in (0, true rate]");
    m.growth = GrowthConstants{chi * chi, 0.0};
    m.noise_consts = NoiseConstants{noise.c_b, noise.l_b, k_base};
    m.implicit_diag.resize(n);
    for (int i = 0; i < n; ++i) m.implicit_diag[i] = chi * space.v_weight(i);

    const auto diag = std::make_shared<std::vector<double>>(m.implicit_diag);
    m.drift = [diag](double, const StateVec& x) {
        DualVec out = DualVec::zeros(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = -(*diag)[i] * x[i];
        return out;
    };
    m.drift_vjp = [diag](double, const StateVec& x, const DualVec& lam) {
        StateVec g = StateVec::zeros(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = -(*diag)[i] * lam[i];
        return g;
    };
    const auto nspec = std::make_shared<NoiseSpec>(noise);
    m.noise = [nspec, n, k_base](const StateVec& x) {
        NoiseMatrix b = NoiseMatrix::zeros(n, k_base);
        fill_base_noise(*nspec, x, b);
        return b;
    };
    m.noise_vjp = [nspec](const StateVec& x, const std::vector<double>& v, const StateVec& lam) {
        return base_noise_vjp(*nspec, x, v, lam);
    };
    return m;
}

ModelSpec build_semilinear_1d(const GalerkinSpace& space, double chi, const ReactionSpec& g,
                              const NoiseSpec& noise, bool with_convection) {
    if (!(chi > 0.0)) throw ConfigError("semilinear: chi must be positive");
    validate_sine_space(space);
    validate_noise_fits(space, noise);
    if (noise.beta != 0.0)
        throw ConfigError("semilinear: noise must satisfy [A3]-[A4] with beta = 0");
    if (g.growth_r > 3)
        throw ConfigError("semilinear: reaction growth exponent r > 3 is unsupported");
    if (g.alpha < 0.0 || g.cubic_c < 0.0)
        throw ConfigError("semilinear: reaction coefficients must be nonnegative");

    const int n = space.dim();
    const int k_base = static_cast<int>(noise.amplitudes.size());
    const double lam1 = space.lambda1();

    ModelSpec m{space, with_convection ? "burgers1d" : "gl1d", {}, {}, {}, 0.0, {}, false,
                nullptr, nullptr, nullptr, nullptr};
    m.noise_state_independent = noise.kind == NoiseKind::Additive;
    m.mono = MonotonicityConstants{chi / 2.0, std::nullopt, 2.0 * g.c_g, 0.0};
    // closed-form growth constant: chi-Laplacian, Agmon bound for the
    // convection, and the cubic reaction, each absorbed with kappa = 4
    const double c_a = 4.0 * chi * chi +
                       (with_convection ? 2.0 * std::max(1.0, 1.0 / lam1) : 0.0) +
                       4.0 * g.alpha * g.alpha / (lam1 * lam1) +
                       16.0 * g.cubic_c * g.cubic_c / lam1;
    m.growth = GrowthConstants{c_a, 4.0};
    m.noise_consts = NoiseConstants{noise.c_b, noise.l_b, k_base};
    m.implicit_diag.resize(n);
    for (int i = 0; i < n; ++i) m.implicit_diag[i] = chi * space.v_weight(i) + g.alpha;

    auto terms = std::make_shared<SemilinearTerms>();
    terms->n = n;
    terms->convection = with_convection;
    terms->alpha = g.alpha;
    terms->cubic_c = g.cubic_c;
    const auto diag = std::make_shared<std::vector<double>>(m.implicit_diag);

    m.drift = [terms, diag](double, const StateVec& x) {
        DualVec out = DualVec::zeros(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = -(*diag)[i] * x[i];
        if (terms->convection) {
            const auto nl = terms->conv(x.coeffs);
            for (int i = 0; i < terms->n; ++i) out[i] += nl[i];
        }
        if (terms->cubic_c != 0.0) {
            const auto cu = terms->cubic(x.coeffs);
            for (int i = 0; i < terms->n; ++i) out[i] -= terms->cubic_c * cu[i];
        }
        return out;
    };
    m.drift_vjp = [terms, diag](double, const StateVec& x, const DualVec& lam) {
        StateVec grad = StateVec::zeros(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) grad[i] = -(*diag)[i] * lam[i];
        if (terms->convection) {
            const auto gc = terms->conv_vjp(x.coeffs, lam.coeffs);
            for (int i = 0; i < terms->n; ++i) grad[i] += gc[i];
        }
        if (terms->cubic_c != 0.0) {
            const auto gc = terms->cubic_vjp(x.coeffs, lam.coeffs);
            for (int i = 0; i < terms->n; ++i) grad[i] -= terms->cubic_c * gc[i];
        }
        return grad;
    };
    const auto nspec = std::make_shared<NoiseSpec>(noise);
    m.noise = [nspec, n, k_base](const StateVec& x) {
        NoiseMatrix b = NoiseMatrix::zeros(n, k_base);
        fill_base_noise(*nspec, x, b);
        return b;
    };
    m.noise_vjp = [nspec](const StateVec& x, const std::vector<double>& v, const StateVec& lam) {
        return base_noise_vjp(*nspec, x, v, lam);
    };
    return m;
}

ModelSpec build_burgers_1d(const GalerkinSpace& space, double chi, const NoiseSpec& noise) {
    return build_semilinear_1d(space, chi, ReactionSpec{}, noise, true);
}

ModelSpec build_gl_1d(const GalerkinSpace& space, double chi, double alpha, double c,
                      const NoiseSpec& noise) {
    if (!(alpha > 0.0) || !(c > 0.0))
        throw ConfigError("gl1d: alpha and c must be positive");
    return build_semilinear_1d(space, chi, ReactionSpec{alpha, c, 3, 0.0}, noise, false);
}

// ---------------------------------------------------------------------------
// 2D Navier-Stokes on the torus
// ---------------------------------------------------------------------------

namespace {

bool canonical_wavevector(const std::array<int, 2>& k) {
    return k[0] > 0 || (k[0] == 0 && k[1] > 0);
}

struct NsBasis {
    std::vector<std::array<int, 2>> wavevectors;  // canonical k per trig pair
    std::map<std::pair<int, int>, int> index;     // canonical k -> pair index

    // mode index = 2*pair + trig (0 cos, 1 sin)
    static NsBasis from_space(const GalerkinSpace& space) {
        NsBasis b;
        const auto& labels = space.mode_labels();
        const int n = space.dim();
        if (n % 2 != 0) throw ConfigError("ns2d: mode count must be even");
        for (int p = 0; p < n / 2; ++p) {
            const auto& lc = labels[2 * p];
            const auto& ls = labels[2 * p + 1];
            std::array<int, 2> k{lc.k1, lc.k2};
            if (!canonical_wavevector(k) || lc.trig != 0 || ls.trig != 1 ||
                ls.k1 != lc.k1 || ls.k2 != lc.k2)
                throw ConfigError("ns2d: space is not a divergence-free cos/sin pair basis");
            const double ksq = static_cast<double>(k[0]) * k[0] +
                               static_cast<double>(k[1]) * k[1];
            if (std::abs(space.v_weight(2 * p) - ksq) > 1e-9 * ksq ||
                std::abs(space.v_weight(2 * p + 1) - ksq) > 1e-9 * ksq)
                throw ConfigError("ns2d: V-weights must be |k|^2");
            b.wavevectors.push_back(k);
            b.index[{k[0], k[1]}] = p;
        }
        return b;
    }
};

struct Trip {
    int m, a, b;
    double c;
};

// Accumulate the projection of (field_a . grad) phi_b onto the basis, where
// field_a = scale_a * eperp(ka) * trig_a(ka.x) and phi_b is basis mode b.
template <typename Sink>
void accumulate_advection(const NsBasis& basis, const std::array<int, 2>& ka, int trig_a,
                          double scale_a, int pair_b, int trig_b, double norm,
                          Sink&& sink) {
    const auto& kb = basis.wavevectors[pair_b];
    const auto pa = eperp(ka);
    const double adv = pa[0] * kb[0] + pa[1] * kb[1];
    if (adv == 0.0) return;
    const auto pb = eperp(kb);

    // t_a(A) * t_b'(B) expanded into trig((ka+kb).x) and trig((ka-kb).x)
    struct Term {
        std::array<int, 2> q;
        int trig;  // 0 cos, 1 sin
        double coef;
    };
    const std::array<int, 2> q_sum{ka[0] + kb[0], ka[1] + kb[1]};
    const std::array<int, 2> q_dif{ka[0] - kb[0], ka[1] - kb[1]};
    Term t[2];
    if (trig_a == 0 && trig_b == 0) {        // cos * (-sin)
        t[0] = {q_sum, 1, -0.5};
        t[1] = {q_dif, 1, 0.5};
    } else if (trig_a == 0 && trig_b == 1) { // cos * cos
        t[0] = {q_sum, 0, 0.5};
        t[1] = {q_dif, 0, 0.5};
    } else if (trig_a == 1 && trig_b == 0) { // sin * (-sin)
        t[0] = {q_sum, 0, 0.5};
        t[1] = {q_dif, 0, -0.5};
    } else {                                 // sin * cos
        t[0] = {q_sum, 1, 0.5};
        t[1] = {q_dif, 1, 0.5};
    }

    constexpr double kTwoPiSq = 2.0 * kPi * kPi;
    for (const Term& term : t) {
        if (term.q[0] == 0 && term.q[1] == 0) continue;
        std::array<int, 2> qc = term.q;
        double sgn = 1.0;
        if (!canonical_wavevector(qc)) {
            qc = {-qc[0], -qc[1]};
            sgn = -1.0;
        }
        const auto it = basis.index.find({qc[0], qc[1]});
        if (it == basis.index.end()) continue;
        const int pair_m = it->second;
        // cos is even, sin flips sign under q -> -q
        const double parity = (term.trig == 1) ? sgn : 1.0;
        const int mode_m = 2 * pair_m + term.trig;
        const auto pm = eperp(basis.wavevectors[pair_m]);
        const double pbm = pb[0] * pm[0] + pb[1] * pm[1];
        if (pbm == 0.0) continue;
        const double value = scale_a * norm * norm * adv * pbm * term.coef * parity * kTwoPiSq;
        if (value != 0.0) sink(mode_m, value);
    }
}

struct NsTensors {
    int n = 0;
    std::vector<Trip> conv;                      // F(u,u)_m = sum c * u_a * u_b
    std::vector<std::vector<double>> transport;  // per-field dense N x N maps
    std::vector<double> strat;                   // sum_j M_j^2, dense N x N
    bool has_transport = false;

    void apply_conv(const std::vector<double>& u, std::vector<double>& out) const {
        for (const Trip& t : conv) out[t.m] += t.c * u[t.a] * u[t.b];
    }
    void conv_vjp(const std::vector<double>& u, const std::vector<double>& lam,
                  std::vector<double>& grad) const {
        for (const Trip& t : conv) {
            grad[t.a] += t.c * lam[t.m] * u[t.b];
            grad[t.b] += t.c * lam[t.m] * u[t.a];
        }
    }
    static void apply_dense(const std::vector<double>& mat, int n,
                            const std::vector<double>& x, std::vector<double>& out) {
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            const double* row = mat.data() + static_cast<std::size_t>(r) * n;
            for (int c = 0; c < n; ++c) s += row[c] * x[c];
            out[r] += s;
        }
    }
    static void apply_dense_t(const std::vector<double>& mat, int n,
                              const std::vector<double>& x, std::vector<double>& out) {
        for (int r = 0; r < n; ++r) {
            const double xr = x[r];
            if (xr == 0.0) continue;
            const double* row = mat.data() + static_cast<std::size_t>(r) * n;
            for (int c = 0; c < n; ++c) out[c] += row[c] * xr;
        }
    }
};

// spectral norm of W^{-1/2} M (H -> V* operator norm) by power iteration
double dual_op_norm(const std::vector<double>& mat, const GalerkinSpace& space) {
    const int n = space.dim();
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n))), w(n), z(n);
    double s = 0.0;
    for (int it = 0; it < 200; ++it) {
        std::fill(w.begin(), w.end(), 0.0);
        NsTensors::apply_dense(mat, n, v, w);
        for (int i = 0; i < n; ++i) w[i] /= space.v_weight(i);
        std::fill(z.begin(), z.end(), 0.0);
        NsTensors::apply_dense_t(mat, n, w, z);
        double norm = 0.0;
        for (double x : z) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (int i = 0; i < n; ++i) v[i] = z[i] / norm;
        s = norm;
    }
    return std::sqrt(s);
}

}  // namespace

GalerkinSpace make_ns_space_2d(int k_max, double frac_alpha) {
    if (k_max < 1) throw ConfigError("make_ns_space_2d: k_max >= 1 required");
    std::vector<std::array<int, 2>> ks;
    for (int k1 = -k_max; k1 <= k_max; ++k1)
        for (int k2 = -k_max; k2 <= k_max; ++k2) {
            const std::array<int, 2> k{k1, k2};
            if (k1 * k1 + k2 * k2 == 0 || k1 * k1 + k2 * k2 > k_max * k_max) continue;
            if (canonical_wavevector(k)) ks.push_back(k);
        }
    std::sort(ks.begin(), ks.end(), [](const auto& a, const auto& b) {
        const int na = a[0] * a[0] + a[1] * a[1];
        const int nb = b[0] * b[0] + b[1] * b[1];
        return std::tie(na, a[0], a[1]) < std::tie(nb, b[0], b[1]);
    });
    std::vector<double> w;
    std::vector<ModeLabel> labels;
    for (const auto& k : ks) {
        const double ksq = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
        for (int trig = 0; trig < 2; ++trig) {
            w.push_back(std::pow(ksq, frac_alpha));
            labels.push_back(ModeLabel{k[0], k[1], trig});
        }
    }
    return GalerkinSpace(std::move(w), std::move(labels));
}

ModelSpec build_ns_2d(const GalerkinSpace& space, double chi, const NoiseSpec& noise,
                      const std::optional<KraichnanSpec>& kraichnan) {
    if (!(chi > 0.0)) throw ConfigError("ns2d: chi must be positive");
    validate_noise_fits(space, noise);
    if (noise.beta != 0.0 && noise.beta != 2.0)
        throw ConfigError("ns2d: noise beta must be 0 or 2");

    const NsBasis basis = NsBasis::from_space(space);
    const int n = space.dim();
    const int k_base = static_cast<int>(noise.amplitudes.size());
    const double norm = 1.0 / (std::sqrt(2.0) * kPi);

    auto tensors = std::make_shared<NsTensors>();
    tensors->n = n;
    for (int a = 0; a < n; ++a) {
        const auto& ka = basis.wavevectors[a / 2];
        for (int b = 0; b < n; ++b)
            accumulate_advection(basis, ka, a % 2, norm, b / 2, b % 2, norm,
                                 [&](int m, double c) {
                                     tensors->conv.push_back(Trip{m, a, b, c});
                                 });
    }

    double l_b = 0.0;
    double strat_norm = 0.0;
    if (kraichnan && !kraichnan->fields.empty()) {
        tensors->has_transport = true;
        for (const auto& field : kraichnan->fields) {
            if (field.wavevector[0] == 0 && field.wavevector[1] == 0)
                throw ConfigError("kraichnan: field wavevector must be nonzero");
            std::vector<double> mat(static_cast<std::size_t>(n) * n, 0.0);
            for (int b = 0; b < n; ++b)
                accumulate_advection(basis, field.wavevector, field.trig, field.amplitude,
                                     b / 2, b % 2, norm, [&](int m, double c) {
                                         mat[static_cast<std::size_t>(m) * n + b] += c;
                                     });
            l_b += field.amplitude * field.amplitude;
            tensors->transport.push_back(std::move(mat));
        }
        tensors->strat.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (const auto& mat : tensors->transport)
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    double s = 0.0;
                    for (int k = 0; k < n; ++k)
                        s += mat[static_cast<std::size_t>(r) * n + k] *
                             mat[static_cast<std::size_t>(k) * n + c];
                    tensors->strat[static_cast<std::size_t>(r) * n + c] += s;
                }
        strat_norm = dual_op_norm(tensors->strat, space);
    }
    const int k_total = k_base + static_cast<int>(tensors->transport.size());

    ModelSpec m{space, "ns2d", {}, {}, {}, 0.0, {}, false,
                nullptr, nullptr, nullptr, nullptr};
    const bool state_dependent =
        noise.kind != NoiseKind::Additive || tensors->has_transport;
    m.noise_state_independent = !state_dependent;
    m.mono = MonotonicityConstants{state_dependent ? chi / 4.0 : chi / 2.0, std::nullopt,
                                   0.0, noise.beta};
    m.growth = GrowthConstants{2.0 * (2.0 * chi * chi + 8.0) + strat_norm * strat_norm, 2.0};
    m.noise_consts = NoiseConstants{noise.c_b, noise.l_b + l_b, k_total};
    m.implicit_diag.resize(n);
    for (int i = 0; i < n; ++i) m.implicit_diag[i] = chi * space.v_weight(i);

    const auto diag = std::make_shared<std::vector<double>>(m.implicit_diag);
    m.drift = [tensors, diag, n](double eps, const StateVec& x) {
        DualVec out = DualVec::zeros(x.size());
        for (int i = 0; i < n; ++i) out[i] = -(*diag)[i] * x[i];
        std::vector<double> conv(n, 0.0);
        tensors->apply_conv(x.coeffs, conv);
        for (int i = 0; i < n; ++i) out[i] -= conv[i];
        if (tensors->has_transport && eps != 0.0) {
            std::vector<double> corr(n, 0.0);
            NsTensors::apply_dense(tensors->strat, n, x.coeffs, corr);
            for (int i = 0; i < n; ++i) out[i] += 0.5 * eps * corr[i];
        }
        return out;
    };
    m.drift_vjp = [tensors, diag, n](double eps, const StateVec& x, const DualVec& lam) {
        StateVec grad = StateVec::zeros(x.size());
        for (int i = 0; i < n; ++i) grad[i] = -(*diag)[i] * lam[i];
        std::vector<double> g(n, 0.0);
        tensors->conv_vjp(x.coeffs, lam.coeffs, g);
        for (int i = 0; i < n; ++i) grad[i] -= g[i];
        if (tensors->has_transport && eps != 0.0) {
            std::vector<double> corr(n, 0.0);
            NsTensors::apply_dense_t(tensors->strat, n, lam.coeffs, corr);
            for (int i = 0; i < n; ++i) grad[i] += 0.5 * eps * corr[i];
        }
        return grad;
    };
    const auto nspec = std::make_shared<NoiseSpec>(noise);
    m.noise = [tensors, nspec, n, k_base, k_total](const StateVec& x) {
        NoiseMatrix b = NoiseMatrix::zeros(n, k_total);
        fill_base_noise(*nspec, x, b);
        for (std::size_t j = 0; j < tensors->transport.size(); ++j) {
            std::vector<double> col(n, 0.0);
            NsTensors::apply_dense(tensors->transport[j], n, x.coeffs, col);
            for (int r = 0; r < n; ++r) b.at(r, k_base + static_cast<int>(j)) = col[r];
        }
        return b;
    };
    m.noise_vjp = [tensors, nspec, n, k_base](const StateVec& x, const std::vector<double>& v,
                                              const StateVec& lam) {
        StateVec grad = base_noise_vjp(*nspec, x, v, lam);
        for (std::size_t j = 0; j < tensors->transport.size(); ++j) {
            const double vj = v[k_base + j];
            if (vj == 0.0) continue;
            std::vector<double> g(n, 0.0);
            NsTensors::apply_dense_t(tensors->transport[j], n, lam.coeffs, g);
            for (int i = 0; i < n; ++i) grad[i] += vj * g[i];
        }
        return grad;
    };
    return m;
}

}  // namespace monodrift
