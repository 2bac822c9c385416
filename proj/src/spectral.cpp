#include "monodrift/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "monodrift/rng.hpp"

namespace monodrift {

GalerkinSpace::GalerkinSpace(std::vector<double> v_weights, std::vector<ModeLabel> labels)
    : weights_(std::move(v_weights)), labels_(std::move(labels)) {
    if (weights_.empty())
        throw std::invalid_argument("GalerkinSpace: need at least one mode");
    if (!labels_.empty() && labels_.size() != weights_.size())
        throw std::invalid_argument("GalerkinSpace: labels/weights size mismatch");
    if (labels_.empty())
        labels_.resize(weights_.size());
    for (double w : weights_)
        if (!(w > 0.0))
            throw std::invalid_argument("GalerkinSpace: V-weights must be positive");
    lambda1_ = *std::min_element(weights_.begin(), weights_.end());
}

namespace {
void check_dim(const GalerkinSpace& space, std::size_t n, const char* op) {
    if (n != static_cast<std::size_t>(space.dim()))
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}
}  // namespace

double h_norm_sq(const GalerkinSpace& space, const StateVec& v) {
    check_dim(space, v.size(), "h_norm_sq");
    double s = 0.0;
    for (double c : v.coeffs) s += c * c;
    return s;
}

double v_norm_sq(const GalerkinSpace& space, const StateVec& v) {
    check_dim(space, v.size(), "v_norm_sq");
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) s += space.v_weight(k) * v[k] * v[k];
    return s;
}

double dual_norm_sq(const GalerkinSpace& space, const DualVec& f) {
    check_dim(space, f.size(), "dual_norm_sq");
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * f[k] / space.v_weight(k);
    return s;
}

double dual_pair(const GalerkinSpace& space, const DualVec& f, const StateVec& v) {
    check_dim(space, f.size(), "dual_pair");
    check_dim(space, v.size(), "dual_pair");
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) s += f[k] * v[k];
    return s;
}

DualVec embed(const StateVec& u) { return DualVec{u.coeffs}; }

StateVec sample_state(const GalerkinSpace& space, double radius_h, std::uint64_t rng_seed) {
    if (radius_h < 0.0)
        throw std::invalid_argument("sample_state: radius must be nonnegative");
    const int n = space.dim();
    StateVec v = StateVec::zeros(n);
    if (radius_h == 0.0) return v;
    double norm_sq = 0.0;
    for (int k = 0; k < n; ++k) {
        v[k] = rng::normal(rng::hash_key({rng_seed, 0xd12ULL, static_cast<std::uint64_t>(k)}));
        norm_sq += v[k] * v[k];
    }
    const double r = radius_h * rng::uniform01(rng::hash_key({rng_seed, 0xad1ULL}));
    const double scale = (norm_sq > 0.0) ? r / std::sqrt(norm_sq) : 0.0;
    for (int k = 0; k < n; ++k) v[k] *= scale;
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

GalerkinSpace make_sine_space_1d(int n_modes, double alpha) {
    if (n_modes < 1)
        throw std::invalid_argument("make_sine_space_1d: need n_modes >= 1");
    std::vector<double> w(n_modes);
    std::vector<ModeLabel> labels(n_modes);
    for (int k = 1; k <= n_modes; ++k) {
        w[k - 1] = std::pow(static_cast<double>(k) * static_cast<double>(k), alpha);
        labels[k - 1] = ModeLabel{k, 0, 1};
    }
    return GalerkinSpace(std::move(w), std::move(labels));
}

}  // namespace monodrift
