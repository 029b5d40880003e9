#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jinxin/grid.hpp"
#include "jinxin/params.hpp"
#include "jinxin/solvers.hpp"

namespace jinxin {

// ---- norms -----------------------------------------------------------------

struct NormReport {
    double l1 = 0.0;
    double l2 = 0.0;
    /// hm[m] = ||u||_m for m = 0..m_max, with ||u||_m^2 = L sum (1 + xi^2)^m |u_k|^2.
    std::vector<double> hm;
};

NormReport norms(std::span<const double> u, const Grid& g, int m_max);
double l1_norm(std::span<const double> u, const Grid& g);
double l2_norm(std::span<const double> u, const Grid& g);
double sobolev_norm(std::span<const double> u, const Grid& g, int m);
/// ||D^beta u||_0, spectral derivative.
double derivative_l2(std::span<const double> u, const Grid& g, int beta);

/// max{|u0|_L1 + eps |v0 - a u0|_L1, |u0|_m + eps |v0 - a u0|_m}.
double e_m_functional(std::span<const double> u0, std::span<const double> v0, const ModelParams& p,
                      const Grid& g, int m);
/// ||u||_2 + eps ||v - a u||_2 for a C-D state (= ||w1||_2 + s ||w2||_2).
double composite_norm(const StateCD& w, const ModelParams& p, const Grid& g);

/// sup over recorded tau of max{1, tau^(1/4)} (||u||_2 + eps ||v - a u||_2).
double m0_functional(const Trajectory& traj, const ModelParams& p);
/// sup over recorded tau of max{1, tau^(1/4 + mu + beta/2)} ||D^beta (u - w_p)||_0.
/// Both trajectories must share their time grid (ContractError otherwise).
double m_beta_functional(const Trajectory& traj, const Trajectory& parabolic, const ModelParams& p, int beta,
                         double mu);

// ---- fits ------------------------------------------------------------------

struct RateFit {
    double exponent = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double residual = 0.0;
    std::size_t n_points = 0;
};

/// Least-squares slope of log(norm) against log(t) over samples in [t_lo, t_hi].
RateFit fit_decay(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi);
/// Same fit with x = log(eps) instead of log(t); used for epsilon slopes.
RateFit fit_loglog(std::span<const double> x, std::span<const double> y);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct FitWindow {
    double t_lo = 10.0;
    double t_hi = 1000.0;
};

/// [10, min(1e3, (L/40)^2 / lambda^2)].
FitWindow default_fit_window(const ModelParams& p, const Grid& g);
/// Throws ParameterError (with the violated margin) when sqrt(lambda^2 t_hi) > L/40.
void check_boundary_guard(const ModelParams& p, const Grid& g, double t_hi);

// ---- studies ---------------------------------------------------------------

enum class Bound { Band, AtMost, AtLeast };

struct Check {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    Bound bound = Bound::Band;
    bool pass = false;
};

Check make_check(std::string name, double value, double target, double tolerance, Bound bound);

struct NamedFit {
    std::string name;
    RateFit fit;
};

struct Table {
    std::string key;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct StudyResult {
    std::string label;
    Table table;
    std::vector<NamedFit> fits;
    std::optional<double> epsilon_slope;
    std::vector<Check> checks;
    /// Extra key=value diagnostics (mass drift, E_2, ...).
    std::vector<std::pair<std::string, double>> diagnostics;
    /// Secondary series, e.g. the in-time profile of the epsilon study.
    std::optional<Table> profile;
    bool pass = false;
};

enum class DataKind { WellPrepared, ConservativeOnly };

struct InitialData {
    double amplitude = 0.05;
    double sigma = 1.0;
    DataKind kind = DataKind::WellPrepared;
};

/// Gaussian u0 mapped to C-D variables; ConservativeOnly sets w2 = 0.
StateCD initial_state(const InitialData& d, const ModelParams& p, const Grid& g);

struct DecayStudyConfig {
    InitialData data;
    /// 0 selects the default step / window.
    double dt = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::size_t samples = 20;
    double e2_threshold = 1.0;
    double max_residual = 0.1;
    double conservative_target = -0.25;
    double conservative_tol = 0.05;
    double dissipative_target = -0.75;
    double dissipative_tol = 0.10;
    double source_target = -1.25;
    double source_tol = 0.15;
    /// Uniform-in-time bound on M_0: M_0(t_hi) / M_0(t_lo) must stay below this.
    double m0_growth_limit = 1.10;
};

/// Long-time decay of w1, the composite norm, w2, d/dx u, d/dt w1 and S.
/// Linear problems (h = 0) use the exact propagator and band checks; nonlinear
/// ones use the exponential integrator and upper-bound checks.
StudyResult decay_study(const ModelParams& p, const Grid& g, const DecayStudyConfig& cfg);

struct EpsilonStudyConfig {
    InitialData data;
    std::vector<double> epsilons{0.4, 0.2, 0.1, 0.05};
    double t_final = 20.0;
    double dt = 0.0;
    double parabolic_dt = 1e-3;
    bool corrected = false;
    /// In-time profile of ||u - w_p||_0; epsilon <= 0 disables it.
    double profile_epsilon = 0.2;
    double profile_t_lo = 0.0;
    double profile_t_hi = 0.0;
    std::size_t profile_samples = 20;
    double profile_dt = 0.0;
    double profile_parabolic_dt = 0.0;
    double mu = 0.0;
    double slope_target = 1.0;
    double slope_tol = 0.15;
    double profile_target = -0.25;
    double profile_tol = 0.05;
    /// S(eps) / S(eps/2) at t_final must be within halving_tol of 2.
    double halving_tol = 0.2;
    double max_residual = 0.1;
    std::size_t jobs = 1;
};

StudyResult epsilon_study(const ModelParams& base, const Grid& g, const EpsilonStudyConfig& cfg);

struct BgkCheckConfig {
    InitialData data;
    double t_final = 5.0;
    double dt = 1e-3;
    double tolerance = 1e-6;
};

/// C-D solver against the kinetic solver on the same data; L2 discrepancy of u.
StudyResult bgk_check(const ModelParams& p, const Grid& g, const BgkCheckConfig& cfg);

/// Runs fn(0..count-1) on up to `jobs` threads; results are ordered by index.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// Table as CSV followed by one `#fit name exponent=... t_lo=...` line per fit.
void write_study_csv(std::ostream& os, const StudyResult& r);
void write_table_csv(std::ostream& os, const Table& t);
/// key=value lines: label, exponents, slopes, check values and pass flags.
void write_summary(std::ostream& os, const StudyResult& r);

}  // namespace jinxin
