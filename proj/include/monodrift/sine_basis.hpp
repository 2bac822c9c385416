// Exact product algebra for the Dirichlet sine basis e_k = sqrt(2/pi) sin(kx)
// on (0, pi). Products of truncated sine expansions are trig polynomials, so
// quadratic and cubic Galerkin nonlinearities are assembled exactly in
// O(N^2) through an intermediate cosine expansion; each bilinear map comes
// with its transposes for adjoint sweeps.

#pragma once

#include <vector>

namespace monodrift::sine_basis {

/// (sum a_j e_j)(sum b_k e_k) as a cosine series c_0..c_{2N}:
/// result = sum_d c_d cos(dx).
std::vector<double> sine_product_to_cos(const std::vector<double>& a,
                                        const std::vector<double>& b);

/// Transpose of sine_product_to_cos in its first slot: gradient of
/// <lam_c, sine_product_to_cos(a, b)> with respect to a. The map is
/// symmetric, so the second slot uses the same call with arguments swapped.
std::vector<double> sine_product_to_cos_adj(const std::vector<double>& b,
                                            const std::vector<double>& lam_c);

/// (sum_d c_d cos(dx))(sum_k a_k e_k) projected onto e_1..e_{n_out}.
std::vector<double> cos_sine_product(const std::vector<double>& c,
                                     const std::vector<double>& a, int n_out);

/// Transposes of cos_sine_product.
std::vector<double> cos_sine_product_adj_cos(const std::vector<double>& a,
                                             const std::vector<double>& lam_out,
                                             int n_cos);
std::vector<double> cos_sine_product_adj_sine(const std::vector<double>& c,
                                              const std::vector<double>& lam_out,
                                              int n_sine);

/// d/dx of a sine expansion as a cosine series c_0..c_N.
std::vector<double> sine_deriv_to_cos(const std::vector<double>& a);

std::vector<double> sine_deriv_to_cos_adj(const std::vector<double>& lam_c, int n);

/// Point evaluation helpers for quadrature oracles.
double eval_sine(const std::vector<double>& a, double x);
double eval_sine_deriv(const std::vector<double>& a, double x);

}  // namespace monodrift::sine_basis
