// Derived constants, admissibility thresholds, and empirical audits of the
// structural conditions [A1]-[A5] for any ModelSpec.
//
// The constants engine implements the closed forms
//   delta(eps)      = (lambda1 gamma0 - C_rho2 - 2 eps C_B - eps lambda1 L_B)
//                     / (2 lambda1)
//   C_{A,rho,eps}   = max{ |A(0)|^2_{V*}/(4 delta),
//                          C_beta delta (|A(0)|^2_{V*}/(4 delta^2))^{1+beta/2} }
//                     + eps C_B
//   gamma_tilde0    = C_rho2/lambda1  v  sqrt((4+beta) C_rho1 C_Arho / lambda1)
//   eps_tilde       = (1+beta) lambda1 gamma0^2 / (8 (2+beta)^2 C_rho1 C_B)
//                     ^  gamma0 / ((18 gamma0 + beta (2+beta) C_rho1) C_B)
//                        * (2 lambda1 gamma0 - (4+beta) C_rho1 C_Arho / gamma0
//                           - C_rho2)
// verbatim. Audits sample random states inside a configurable H-ball and
// record the most negative slack together with a reproducible witness.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monodrift/models.hpp"
#include "monodrift/spectral.hpp"

namespace monodrift {

struct FrameworkConstants {
    double lambda1 = 1.0;
    double gamma0 = 1.0;
    double beta = 0.0;
    double c_rho1 = 0.0;
    double c_rho2 = 0.0;
    double c_a = 1.0;
    double kappa = 0.0;
    double c_b = 1.0;
    double l_b = 0.0;
    double a0_dual_norm = 0.0;
};

struct ConstantsReport {
    double eps0 = 0.0;
    double delta_eps = 0.0;           // delta(eps0)
    double c_a_rho_eps = 0.0;         // C_{A,rho,eps0}
    double c_a_rho = 0.0;             // C_{A,rho} used in the thresholds
    double gamma_tilde0 = 0.0;
    double eps_tilde = 0.0;
    double eps_tilde_ns_remark = 0.0; // lambda1*gamma0/18, surfaced for comparison
    bool d1 = false;
    bool d2 = false;
    double c_rho1_used = 0.0;         // declared or fitted
};

enum class Condition { A2, A3, A4 };

std::string condition_name(Condition c);

struct AuditReport {
    Condition condition = Condition::A2;
    int samples = 0;
    double worst_margin = 0.0;   // most negative slack; positive = all passed
    std::string worst_line;      // inequality line attaining the minimum
    int worst_index = -1;
    std::uint64_t seed = 0;
    StateVec witness_v1;
    StateVec witness_v2;         // second state of the worst pair (empty if unused)
    double c_rho1_used = 0.0;
};

/// Admissibility upper bound on eps from Lemma-type constants:
/// (lambda1 gamma0 - C_rho2) / (2 C_B + lambda1 L_B).
double eps_admissible_bound(const FrameworkConstants& c);

double delta_eps(const FrameworkConstants& c, double eps);
double c_a_rho_eps(const FrameworkConstants& c, double eps);
ConstantsReport thresholds(const FrameworkConstants& c, double eps0);

/// Smallest C_rho1 making [A2] hold over the sampled pairs.
double fit_c_rho1(const ModelSpec& model, double eps, int n_samples, double radius_h,
                  std::uint64_t seed);

/// Model constants with C_rho1 resolved (declared value, or fitted with the
/// documented defaults: 4000 pairs in H-radius 2, fixed seed).
FrameworkConstants effective_constants(const ModelSpec& model, double eps);

double delta_eps(const ModelSpec& model, double eps);
double c_a_rho_eps(const ModelSpec& model, double eps);
ConstantsReport thresholds(const ModelSpec& model, double eps0);

AuditReport audit_condition(const ModelSpec& model, double eps, Condition condition,
                            int n_samples, double radius_h, std::uint64_t seed);

/// s -> <A^eps(v1 + s v2), v> sampled on the grid.
std::vector<double> hemicontinuity_probe(const ModelSpec& model, double eps,
                                         const StateVec& v1, const StateVec& v2,
                                         const StateVec& v,
                                         const std::vector<double>& s_grid);

}  // namespace monodrift
