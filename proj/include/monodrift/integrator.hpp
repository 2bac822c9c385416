// Semi-implicit (linear-implicit) Euler-Maruyama time stepping for the
// stochastic equation and its controlled variant, plus the energy
// functionals and Monte Carlo exponential-estimate reports. The linear
// dissipative diagonal is treated implicitly; nonlinear remainder, control
// forcing and noise enter explicitly. Any nonfinite coefficient aborts the
// path with its step index, never clamps.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monodrift/models.hpp"
#include "monodrift/rng.hpp"
#include "monodrift/spectral.hpp"

namespace monodrift {

struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-3;
    std::int64_t n_steps = 0;

    static TimeGrid make(double t0, double t1, double dt);
    double node(std::int64_t i) const { return t0 + static_cast<double>(i) * dt; }
};

/// Brownian increments on the U-basis, N(0, dt) each, regenerated
/// bit-exactly from (seed, column, global step index).
struct NoisePath {
    TimeGrid grid;
    int cols = 0;
    std::uint64_t seed = 0;
    std::vector<double> increments;  // n_steps x cols, row-major

    static NoisePath brownian(const TimeGrid& grid, int cols, std::uint64_t seed);
    double at(std::int64_t step, int col) const {
        return increments[static_cast<std::size_t>(step) * cols + col];
    }
};

/// Piecewise-constant control on the noise space; values are constant on
/// each grid cell and zero outside the grid's support.
struct Control {
    TimeGrid grid;
    int cols = 0;
    std::vector<double> values;  // n_steps x cols, row-major

    static Control zeros(const TimeGrid& grid, int cols);
    double at(std::int64_t step, int col) const {
        return values[static_cast<std::size_t>(step) * cols + col];
    }
    /// value at absolute time t; zero outside the support
    void value_at(double t, std::vector<double>& out) const;
};

struct Path {
    TimeGrid grid;
    std::vector<StateVec> states;  // n_steps + 1

    const StateVec& front() const { return states.front(); }
    const StateVec& back() const { return states.back(); }
    /// state at absolute time t (t must be a grid node)
    const StateVec& at_time(double t) const;
};

struct EnergySeries {
    std::vector<double> t;
    std::vector<double> h_sq;          // per-node |X|_H^2
    std::vector<double> v_sq_int;      // cumulative trapezoid of |X|_V^2
    std::vector<double> h_beta_v_int;  // cumulative trapezoid of |X|_H^beta |X|_V^2
    std::vector<double> h_2beta;       // per-node |X|_H^{2+beta}
};

/// One semi-implicit update. dW and v may be empty (no noise / no control).
StateVec step(const ModelSpec& model, double eps, const StateVec& x, double dt,
              const std::vector<double>& dW, const std::vector<double>& v);

/// Full trajectory on the grid. The noise path may cover a larger window;
/// the run grid must align with it. Control (if any) is read by absolute
/// time and is zero outside its own support.
Path simulate(const ModelSpec& model, double eps, const StateVec& xi, const TimeGrid& grid,
              const NoisePath* noise = nullptr, const Control* control = nullptr);

EnergySeries energy_series(const ModelSpec& model, const Path& path);

struct EstimateLine {
    std::string name;
    double estimate = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ExponentialReport {
    double gamma = 0.0;
    double delta = 0.0;
    int n_paths = 0;
    double slack = 1.1;
    std::vector<EstimateLine> lines;

    bool all_pass() const {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
};

/// Monte Carlo check of the uniform-energy and exponential-moment bounds.
/// gamma must lie in (0, lambda1 gamma0 / 2]; delta below the
/// noise-dependent cap (no cap at eps = 0).
ExponentialReport exponential_report(const ModelSpec& model, double eps, const StateVec& xi,
                                     const TimeGrid& grid, double gamma, double delta,
                                     int n_paths, std::uint64_t seed, int workers = 1,
                                     double slack = 1.1);

}  // namespace monodrift
