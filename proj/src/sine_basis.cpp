#include "monodrift/sine_basis.hpp"

#include <cmath>
#include <cstdlib>

namespace monodrift::sine_basis {

namespace {
const double kInvPi = 1.0 / 3.14159265358979323846;
const double kSqrt2OverPi = std::sqrt(2.0 * kInvPi);
}  // namespace

std::vector<double> sine_product_to_cos(const std::vector<double>& a,
                                        const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    std::vector<double> c(2 * n + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        const double aj = a[j - 1] * kInvPi;
        if (aj == 0.0) continue;
        for (int k = 1; k <= n; ++k) {
            const double w = aj * b[k - 1];
            c[std::abs(j - k)] += w;
            c[j + k] -= w;
        }
    }
    return c;
}

std::vector<double> sine_product_to_cos_adj(const std::vector<double>& b,
                                            const std::vector<double>& lam_c) {
    const int n = static_cast<int>(b.size());
    std::vector<double> grad(n, 0.0);
    for (int j = 1; j <= n; ++j) {
        double g = 0.0;
        for (int k = 1; k <= n; ++k)
            g += b[k - 1] * (lam_c[std::abs(j - k)] - lam_c[j + k]);
        grad[j - 1] = g * kInvPi;
    }
    return grad;
}

std::vector<double> cos_sine_product(const std::vector<double>& c,
                                     const std::vector<double>& a, int n_out) {
    const int m = static_cast<int>(c.size()) - 1;
    const int n = static_cast<int>(a.size());
    std::vector<double> out(n_out, 0.0);
    for (int d = 0; d <= m; ++d) {
        const double cd = 0.5 * c[d];
        if (cd == 0.0) continue;
        for (int k = 1; k <= n; ++k) {
            const double w = cd * a[k - 1];
            const int hi = k + d;
            if (hi <= n_out) out[hi - 1] += w;
            const int lo = k - d;
            if (lo >= 1 && lo <= n_out)
                out[lo - 1] += w;
            else if (lo <= -1 && -lo <= n_out)
                out[-lo - 1] -= w;
        }
    }
    return out;
}

std::vector<double> cos_sine_product_adj_cos(const std::vector<double>& a,
                                             const std::vector<double>& lam_out,
                                             int n_cos) {
    const int n = static_cast<int>(a.size());
    const int n_out = static_cast<int>(lam_out.size());
    std::vector<double> grad(n_cos + 1, 0.0);
    for (int d = 0; d <= n_cos; ++d) {
        double g = 0.0;
        for (int k = 1; k <= n; ++k) {
            const int hi = k + d;
            double t = 0.0;
            if (hi <= n_out) t += lam_out[hi - 1];
            const int lo = k - d;
            if (lo >= 1 && lo <= n_out)
                t += lam_out[lo - 1];
            else if (lo <= -1 && -lo <= n_out)
                t -= lam_out[-lo - 1];
            g += 0.5 * a[k - 1] * t;
        }
        grad[d] = g;
    }
    return grad;
}

std::vector<double> cos_sine_product_adj_sine(const std::vector<double>& c,
                                              const std::vector<double>& lam_out,
                                              int n_sine) {
    const int m = static_cast<int>(c.size()) - 1;
    const int n_out = static_cast<int>(lam_out.size());
    std::vector<double> grad(n_sine, 0.0);
    for (int d = 0; d <= m; ++d) {
        const double cd = 0.5 * c[d];
        if (cd == 0.0) continue;
        for (int k = 1; k <= n_sine; ++k) {
            const int hi = k + d;
            double t = 0.0;
            if (hi <= n_out) t += lam_out[hi - 1];
            const int lo = k - d;
            if (lo >= 1 && lo <= n_out)
                t += lam_out[lo - 1];
            else if (lo <= -1 && -lo <= n_out)
                t -= lam_out[-lo - 1];
            grad[k - 1] += cd * t;
        }
    }
    return grad;
}

std::vector<double> sine_deriv_to_cos(const std::vector<double>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<double> c(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) c[k] = a[k - 1] * k * kSqrt2OverPi;
    return c;
}

std::vector<double> sine_deriv_to_cos_adj(const std::vector<double>& lam_c, int n) {
    std::vector<double> grad(n, 0.0);
    const int m = static_cast<int>(lam_c.size()) - 1;
    for (int k = 1; k <= n && k <= m; ++k) grad[k - 1] = lam_c[k] * k * kSqrt2OverPi;
    return grad;
}

double eval_sine(const std::vector<double>& a, double x) {
    double s = 0.0;
    for (std::size_t k = 1; k <= a.size(); ++k)
        s += a[k - 1] * kSqrt2OverPi * std::sin(static_cast<double>(k) * x);
    return s;
}

double eval_sine_deriv(const std::vector<double>& a, double x) {
    double s = 0.0;
    for (std::size_t k = 1; k <= a.size(); ++k)
        s += a[k - 1] * kSqrt2OverPi * static_cast<double>(k) *
             std::cos(static_cast<double>(k) * x);
    return s;
}

}  // namespace monodrift::sine_basis
