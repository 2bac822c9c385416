// Concrete drift and noise operators for the example SPDEs, each carrying
// its declared framework constants (gamma0, C_rho1, C_rho2, beta, C_A,
// kappa, C_B, L_B). Nonlinearities are exact Galerkin projections built by
// direct spectral convolution; every drift/noise evaluator is pure, and
// each model also exposes the transposed linearizations used by adjoint
// sweeps.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monodrift/spectral.hpp"

namespace monodrift {

struct MonotonicityConstants {
    double gamma0 = 0.0;                 // dissipation rate in [A2]
    std::optional<double> c_rho1;        // unset: fitted by the framework checker
    double c_rho2 = 0.0;
    double beta = 0.0;
};

struct GrowthConstants {
    double c_a = 0.0;
    double kappa = 0.0;
};

struct NoiseConstants {
    double c_b = 0.0;
    double l_b = 0.0;
    int u_dim = 0;
};

/// Column-major N x K array of noise columns B(v) on the U-basis.
struct NoiseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    static NoiseMatrix zeros(int r, int c) {
        return NoiseMatrix{r, c, std::vector<double>(static_cast<std::size_t>(r) * c, 0.0)};
    }
    double& at(int r, int c) { return a[static_cast<std::size_t>(c) * rows + r]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(c) * rows + r]; }

    double frobenius_sq() const {
        double s = 0.0;
        for (double x : a) s += x * x;
        return s;
    }
};

enum class NoiseKind { Additive, BoundedMult, DecayingMult };

/// Divergence-free transport field sigma = amplitude * eperp(q) * trig(q.x).
struct KraichnanField {
    std::array<int, 2> wavevector{1, 0};
    int trig = 0;  // 0 = cos, 1 = sin
    double amplitude = 0.0;
};

struct KraichnanSpec {
    std::vector<KraichnanField> fields;
};

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Additive;
    std::vector<double> amplitudes;  // per-column amplitudes on the first K H-modes
    double sigma0 = 1.0;             // decaying_mult scale
    double beta = 0.0;
    double c_b = 0.0;
    double l_b = 0.0;
};

NoiseSpec build_noise(NoiseKind kind, std::vector<double> amplitudes, double sigma0 = 1.0);
NoiseSpec build_noise(const std::string& kind, std::vector<double> amplitudes,
                      double sigma0 = 1.0);

struct ModelSpec {
    GalerkinSpace space;
    std::string name;
    MonotonicityConstants mono;
    GrowthConstants growth;
    NoiseConstants noise_consts;
    double a0_dual_norm = 0.0;         // sup_eps |A^eps(0)|_{V*}
    std::vector<double> implicit_diag; // eps-independent linear dissipative diagonal
    bool noise_state_independent = false;  // B(v) constant in v (pure additive)

    std::function<DualVec(double eps, const StateVec&)> drift;
    // gradient of <lam, A^eps(x)> with respect to x
    std::function<StateVec(double eps, const StateVec&, const DualVec& lam)> drift_vjp;
    std::function<NoiseMatrix(const StateVec&)> noise;
    // gradient of <lam, B(x) v> with respect to x (v on the U-basis)
    std::function<StateVec(const StateVec&, const std::vector<double>& v, const StateVec& lam)>
        noise_vjp;

    int dim() const { return space.dim(); }
    int noise_dim() const { return noise_consts.u_dim; }
};

/// Reaction term g(u) = -alpha u - cubic_c u^3 with paper-style growth
/// metadata (g(0)=0, growth exponent r, one-sided constant C_g).
struct ReactionSpec {
    double alpha = 0.0;
    double cubic_c = 0.0;
    int growth_r = 1;
    double c_g = 0.0;
};

/// Diagonal linear drift A(v) = -chi * W v with any noise; the exactly
/// solvable benchmark. gamma0 may be declared below the true rate.
ModelSpec build_linear_1d(const GalerkinSpace& space, double chi, const NoiseSpec& noise,
                          std::optional<double> declared_gamma0 = std::nullopt);

/// 1D semilinear drift chi*Laplace + [optional u du/dx] + g(u) on the
/// Dirichlet sine space.
ModelSpec build_semilinear_1d(const GalerkinSpace& space, double chi, const ReactionSpec& g,
                              const NoiseSpec& noise, bool with_convection = false);

ModelSpec build_burgers_1d(const GalerkinSpace& space, double chi, const NoiseSpec& noise);

ModelSpec build_gl_1d(const GalerkinSpace& space, double chi, double alpha, double c,
                      const NoiseSpec& noise);

/// Divergence-free realified Fourier space for the 2D torus, |k| <= k_max,
/// weights |k|^(2*frac_alpha).
GalerkinSpace make_ns_space_2d(int k_max, double frac_alpha = 1.0);

ModelSpec build_ns_2d(const GalerkinSpace& space, double chi, const NoiseSpec& noise,
                      const std::optional<KraichnanSpec>& kraichnan = std::nullopt);

/// Unit divergence-free direction e_perp(k) = (-k2, k1)/|k|.
std::array<double, 2> eperp(const std::array<int, 2>& k);

}  // namespace monodrift
