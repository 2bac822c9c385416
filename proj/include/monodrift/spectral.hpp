// Finite spectral representation of the Gelfand triple V < H < V*.
//
// States are coefficient vectors against an H-orthonormal basis; the V
// norm is a weighted sum with per-mode positive weights, and V* elements
// are stored so that the dual pairing is the plain dot product. The
// embedding constant lambda1 = min_k w_k is computed, never configured.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace monodrift {

/// Opaque mode descriptor; 1D bases use k1, 2D bases (k1,k2) plus a
/// trig parity (0 = cos, 1 = sin).
struct ModeLabel {
    int k1 = 0;
    int k2 = 0;
    int trig = 0;
};

struct StateVec {
    std::vector<double> coeffs;

    std::size_t size() const { return coeffs.size(); }
    double& operator[](std::size_t i) { return coeffs[i]; }
    double operator[](std::size_t i) const { return coeffs[i]; }

    static StateVec zeros(std::size_t n) { return StateVec{std::vector<double>(n, 0.0)}; }
};

struct DualVec {
    std::vector<double> coeffs;

    std::size_t size() const { return coeffs.size(); }
    double& operator[](std::size_t i) { return coeffs[i]; }
    double operator[](std::size_t i) const { return coeffs[i]; }

    static DualVec zeros(std::size_t n) { return DualVec{std::vector<double>(n, 0.0)}; }
};

class GalerkinSpace {
  public:
    GalerkinSpace(std::vector<double> v_weights, std::vector<ModeLabel> labels);

    int dim() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& v_weights() const { return weights_; }
    double v_weight(std::size_t k) const { return weights_[k]; }
    const std::vector<ModeLabel>& mode_labels() const { return labels_; }
    double lambda1() const { return lambda1_; }

  private:
    std::vector<double> weights_;
    std::vector<ModeLabel> labels_;
    double lambda1_;
};

/// |v|_H^2 = sum v_k^2.
double h_norm_sq(const GalerkinSpace& space, const StateVec& v);

/// |v|_V^2 = sum w_k v_k^2; always >= lambda1 * |v|_H^2.
double v_norm_sq(const GalerkinSpace& space, const StateVec& v);

/// |f|_{V*}^2 = sum f_k^2 / w_k (dual of the weighted norm).
double dual_norm_sq(const GalerkinSpace& space, const DualVec& f);

/// <f, v> with f in V*; equals <u,v>_H when f = embed(u).
double dual_pair(const GalerkinSpace& space, const DualVec& f, const StateVec& v);

/// V* embedding of a state (identity on coefficients).
DualVec embed(const StateVec& u);

/// Random state with |v|_H <= radius_h: uniform direction, uniform radius.
StateVec sample_state(const GalerkinSpace& space, double radius_h, std::uint64_t rng_seed);

// Small coefficient-vector helpers shared across modules.
double dot(const std::vector<double>& a, const std::vector<double>& b);
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);

/// Builder for the 1D Dirichlet sine space on (0, pi): weights k^2 (or
/// k^(2*alpha) for fractional dissipation).
GalerkinSpace make_sine_space_1d(int n_modes, double alpha = 1.0);

}  // namespace monodrift
