#pragma once

#include <span>
#include <string>
#include <vector>

#include "jinxin/grid.hpp"
#include "jinxin/model.hpp"
#include "jinxin/params.hpp"

namespace jinxin {

struct SolverConfig {
    double dt = 0.01;
    double t_final = 1.0;
    bool dealias = true;
    /// Sorted output times in [0, t_final]; empty means t_final only.
    std::vector<double> record_times;
    /// Abort when the spectral norm exceeds this multiple of its initial value.
    double blowup_factor = 1e6;

    void validate() const;
};

/// min(0.1, 0.5 dx / (lambda/eps)): an accuracy bound for the nonlinear
/// quadrature, not a stability bound.
double default_time_step(const ModelParams& p, const Grid& g);

enum class Representation { ConservativeDissipative, Kinetic, Scalar };

/// Recorded states of one run. `first`/`second` hold (w1, w2), (f1, f2) or
/// (w_p, empty) depending on the representation.
struct Trajectory {
    Representation representation = Representation::ConservativeDissipative;
    ModelParams params;
    Grid grid{8, 1.0};
    double dt = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> first;
    std::vector<std::vector<double>> second;
    double max_imag_residue = 0.0;

    std::size_t size() const { return times.size(); }
    /// State i in C-D variables; kinetic frames are mapped through (u, v).
    StateCD cd(std::size_t i) const;
    /// Conserved density at frame i (w1, f1 + f2 or w_p).
    std::vector<double> density(std::size_t i) const;
};

/// exp(E(i xi) t) applied mode by mode; exact in time.
StateCD linear_propagate(const StateCD& w0, double t, const ModelParams& p, const Grid& g);

/// Exponential integrator on the Duhamel formula for the C-D system. The stiff
/// linear part is exact; the source (0, h(w1)/(eps s)) is integrated with the
/// second-order exponential Runge-Kutta pair (phi_1 predictor, phi_2 corrector).
Trajectory nonlinear_jinxin_solve(const StateCD& w0, const SolverConfig& cfg, const ModelParams& p,
                                  const Grid& g);

/// Kinetic formulation: exact transport/relaxation factors per mode, Maxwellian
/// source integrated with the same exponential Runge-Kutta pair.
Trajectory bgk_solve(const StateBGK& s0, const SolverConfig& cfg, const ModelParams& p, const Grid& g);

/// Limit equation w_t + a w_x + h(w)_x = D w_xx, D = lambda^2 (or
/// lambda^2 - a^2 eps^2 when `corrected`), exponential integrator in Fourier space.
Trajectory parabolic_solve(std::span<const double> u0, const SolverConfig& cfg, const ModelParams& p,
                           const Grid& g, bool corrected);

struct SourceSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> fields;
};

/// S = eps s (d/dt w2 - a d/dx w2) at every recorded time whose neighbours are
/// within 4 dt; the time derivative is a centred difference on recorded states.
SourceSeries compute_S(const Trajectory& traj, const ModelParams& p);

/// Centred time derivative of the density at interior frames with neighbours
/// within 4 dt; frames that do not qualify are skipped.
SourceSeries density_time_derivative(const Trajectory& traj);

}  // namespace jinxin
