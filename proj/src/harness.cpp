#include "jinxin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "jinxin/errors.hpp"
#include "jinxin/spectral.hpp"

namespace jinxin {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double mass(std::span<const double> u, const Grid& g) {
    double s = 0.0;
    for (double x : u) s += x;
    return s * g.dx();
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractError("fields have different sizes");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

// Largest relative mass change over the frames of a trajectory.
double mass_drift(const Trajectory& traj, std::span<const double> u0) {
    const double m0 = mass(u0, traj.grid);
    const double scale = std::max(std::abs(m0), l1_norm(u0, traj.grid));
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i)
        worst = std::max(worst, std::abs(mass(traj.density(i), traj.grid) - m0));
    return scale > 0.0 ? worst / scale : worst;
}

// Index of each requested time in a series (exact match; targets are stored verbatim).
std::map<double, std::size_t> index_by_time(std::span<const double> times) {
    std::map<double, std::size_t> out;
    for (std::size_t i = 0; i < times.size(); ++i) out.emplace(times[i], i);
    return out;
}

Trajectory exact_linear_trajectory(const StateCD& w0, std::span<const double> times, double dt,
                                   const ModelParams& p, const Grid& g) {
    Trajectory traj;
    traj.representation = Representation::ConservativeDissipative;
    traj.params = p;
    traj.grid = g;
    traj.dt = dt;
    for (double t : times) {
        StateCD w = linear_propagate(w0, t, p, g);
        traj.times.push_back(t);
        traj.first.push_back(std::move(w.w1));
        traj.second.push_back(std::move(w.w2));
    }
    return traj;
}

// t = 0 followed by the triplet (tau - delta, tau, tau + delta) for each sample.
std::vector<double> triplet_times(std::span<const double> samples, double delta) {
    std::vector<double> out{0.0};
    for (double tau : samples) {
        out.push_back(tau - delta);
        out.push_back(tau);
        out.push_back(tau + delta);
    }
    return out;
}

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const char* bound_name(Bound b) {
    switch (b) {
        case Bound::Band:
            return "band";
        case Bound::AtMost:
            return "at_most";
        case Bound::AtLeast:
            return "at_least";
    }
    return "band";
}

}  // namespace

// ---- norms -----------------------------------------------------------------

double l1_norm(std::span<const double> u, const Grid& g) {
    if (u.size() != g.size()) throw ContractError("field does not match the grid");
    double s = 0.0;
    for (double x : u) s += std::abs(x);
    return s * g.dx();
}

double l2_norm(std::span<const double> u, const Grid& g) { return sobolev_norm(u, g, 0); }

double sobolev_norm(std::span<const double> u, const Grid& g, int m) {
    if (u.size() != g.size()) throw ContractError("field does not match the grid");
    if (m < 0) throw ParameterError("Sobolev index must be non-negative");
    Fft fft(g);
    const SpectralField c = fft.forward(u);
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += std::pow(1.0 + g.xi(j) * g.xi(j), m) * std::norm(c[j]);
    return std::sqrt(g.length() * s);
}

double derivative_l2(std::span<const double> u, const Grid& g, int beta) {
    if (u.size() != g.size()) throw ContractError("field does not match the grid");
    Fft fft(g);
    const SpectralField c = spectral_derivative(fft.forward(u), g, beta);
    double s = 0.0;
    for (const cplx& z : c.values) s += std::norm(z);
    return std::sqrt(g.length() * s);
}

NormReport norms(std::span<const double> u, const Grid& g, int m_max) {
    if (m_max < 0) throw ParameterError("m_max must be non-negative");
    NormReport r;
    r.l1 = l1_norm(u, g);
    for (int m = 0; m <= m_max; ++m) r.hm.push_back(sobolev_norm(u, g, m));
    r.l2 = r.hm[0];
    return r;
}

double e_m_functional(std::span<const double> u0, std::span<const double> v0, const ModelParams& p,
                      const Grid& g, int m) {
    p.validate();
    std::vector<double> dev(u0.size());
    if (v0.size() != u0.size()) throw ContractError("u0 and v0 have different sizes");
    for (std::size_t i = 0; i < u0.size(); ++i) dev[i] = v0[i] - p.a * u0[i];
    const double lebesgue = l1_norm(u0, g) + p.epsilon * l1_norm(dev, g);
    const double sobolev = sobolev_norm(u0, g, m) + p.epsilon * sobolev_norm(dev, g, m);
    return std::max(lebesgue, sobolev);
}

double composite_norm(const StateCD& w, const ModelParams& p, const Grid& g) {
    return sobolev_norm(w.w1, g, 2) + p.reduced_speed() * sobolev_norm(w.w2, g, 2);
}

double m0_functional(const Trajectory& traj, const ModelParams& p) {
    double sup = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double weight = std::max(1.0, std::pow(traj.times[i], 0.25));
        sup = std::max(sup, weight * composite_norm(traj.cd(i), p, traj.grid));
    }
    return sup;
}

double m_beta_functional(const Trajectory& traj, const Trajectory& parabolic, const ModelParams& p, int beta,
                         double mu) {
    p.validate();
    if (traj.times != parabolic.times) throw ContractError("trajectories are recorded on different time grids");
    if (!(traj.grid == parabolic.grid)) throw ContractError("trajectories live on different grids");
    if (beta < 0) throw ParameterError("beta must be non-negative");
    const double power = 0.25 + mu + 0.5 * beta;
    double sup = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double weight = std::max(1.0, std::pow(traj.times[i], power));
        const std::vector<double> d = difference(traj.density(i), parabolic.density(i));
        sup = std::max(sup, weight * derivative_l2(d, traj.grid, beta));
    }
    return sup;
}

// ---- fits ------------------------------------------------------------------

RateFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ContractError("fit samples have different lengths");
    const std::size_t n = x.size();
    if (n < 2) throw ContractError("need at least two points for a log-log fit");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ContractError("log-log fit needs positive samples");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw ContractError("log-log fit needs distinct abscissae");
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - my - slope * (lx[i] - mx);
        rss += r * r;
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return {slope, *lo, *hi, std::sqrt(rss / static_cast<double>(n)), n};
}

RateFit fit_decay(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi) {
    if (times.size() != values.size()) throw ContractError("times and norms have different lengths");
    if (!(t_lo < t_hi)) throw ContractError("fit window must satisfy t_lo < t_hi");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(values[i] > 0.0)) throw ContractError("decay fit needs positive norms");
        x.push_back(times[i]);
        y.push_back(values[i]);
    }
    if (x.size() < 5) {
        std::ostringstream msg;
        msg << "decay fit needs at least 5 samples in [" << t_lo << ", " << t_hi << "], got " << x.size();
        throw ContractError(msg.str());
    }
    RateFit f = fit_loglog(x, y);
    f.t_lo = t_lo;
    f.t_hi = t_hi;
    return f;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ParameterError("log spacing needs 0 < lo < hi, count >= 2");
    std::vector<double> out(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

FitWindow default_fit_window(const ModelParams& p, const Grid& g) {
    const double reach = g.length() / 40.0;
    return {10.0, std::min(1000.0, reach * reach / (p.lambda * p.lambda))};
}

void check_boundary_guard(const ModelParams& p, const Grid& g, double t_hi) {
    const double footprint = std::sqrt(p.lambda * p.lambda * t_hi);
    const double limit = g.length() / 40.0;
    if (footprint > limit) {
        std::ostringstream msg;
        msg << "fit window reaches the box: sqrt(lambda^2 t_hi) = " << footprint << " exceeds L/40 = " << limit
            << " by " << footprint - limit << " (largest admissible t_hi = " << limit * limit / (p.lambda * p.lambda)
            << ")";
        throw ParameterError(msg.str());
    }
}

// ---- studies ---------------------------------------------------------------

Check make_check(std::string name, double value, double target, double tolerance, Bound bound) {
    bool pass = std::isfinite(value);
    switch (bound) {
        case Bound::Band:
            pass = pass && std::abs(value - target) <= tolerance;
            break;
        case Bound::AtMost:
            pass = pass && value <= target + tolerance;
            break;
        case Bound::AtLeast:
            pass = pass && value >= target - tolerance;
            break;
    }
    return {std::move(name), value, target, tolerance, bound, pass};
}

StateCD initial_state(const InitialData& d, const ModelParams& p, const Grid& g) {
    p.validate();
    if (!(d.sigma > 0.0)) throw ParameterError("Gaussian width must be positive");
    if (!std::isfinite(d.amplitude)) throw ParameterError("amplitude must be finite");
    const std::vector<double> u0 = gaussian(g, d.amplitude, d.sigma);
    if (d.kind == DataKind::ConservativeOnly) return {u0, std::vector<double>(u0.size(), 0.0)};
    return uv_to_cd(well_prepared_data(u0, p, g), p);
}

StudyResult decay_study(const ModelParams& p, const Grid& g, const DecayStudyConfig& cfg) {
    p.validate();
    const FitWindow def = default_fit_window(p, g);
    const double t_lo = cfg.t_lo > 0.0 ? cfg.t_lo : def.t_lo;
    const double t_hi = cfg.t_hi > 0.0 ? cfg.t_hi : def.t_hi;
    if (!(t_lo < t_hi)) throw ParameterError("decay window must satisfy t_lo < t_hi");
    if (cfg.samples < 5) throw ParameterError("decay study needs at least 5 samples");
    check_boundary_guard(p, g, t_hi);
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(p, g);

    const StateCD w0 = initial_state(cfg.data, p, g);
    const StateUV uv0 = cd_to_uv(w0, p);
    const double e2 = e_m_functional(uv0.u, uv0.v, p, g, 2);
    if (e2 > cfg.e2_threshold) {
        std::ostringstream msg;
        msg << "initial data too large: E_2 = " << e2 << " exceeds the threshold " << cfg.e2_threshold;
        throw ParameterError(msg.str());
    }

    const bool linear = p.h.is_zero();
    const std::vector<double> samples = log_spaced(t_lo, t_hi, cfg.samples);
    const double delta = 2.0 * dt;
    if (t_lo - delta <= 0.0) throw ParameterError("time step too large for the decay window");
    const std::vector<double> times = triplet_times(samples, delta);

    Trajectory traj;
    if (linear) {
        traj = exact_linear_trajectory(w0, times, dt, p, g);
    } else {
        SolverConfig sc;
        sc.dt = dt;
        sc.t_final = times.back();
        sc.record_times = times;
        traj = nonlinear_jinxin_solve(w0, sc, p, g);
    }

    const SourceSeries dt_w1 = density_time_derivative(traj);
    const SourceSeries source = compute_S(traj, p);
    const auto frame = index_by_time(traj.times);
    const auto dt_index = index_by_time(dt_w1.times);
    const auto s_index = index_by_time(source.times);

    StudyResult r;
    r.label = linear ? "decay-linear" : "decay-nonlinear";
    r.table.key = "t";
    r.table.columns = {"w1_l2", "composite", "w2_l2", "dx_u_l2", "dt_w1_l2", "S_l2", "m0"};
    std::vector<std::vector<double>> channel(r.table.columns.size());
    double m0 = 0.0;
    double m0_first = 0.0;
    std::size_t next_frame = 0;
    for (double tau : samples) {
        const std::size_t i = frame.at(tau);
        // Running supremum over every recorded frame up to tau.
        for (; next_frame <= i; ++next_frame) {
            const double weight = std::max(1.0, std::pow(traj.times[next_frame], 0.25));
            m0 = std::max(m0, weight * composite_norm(traj.cd(next_frame), p, g));
        }
        if (m0_first == 0.0) m0_first = m0;
        const StateCD w = traj.cd(i);
        const std::vector<double> row = {
            l2_norm(w.w1, g),
            composite_norm(w, p, g),
            l2_norm(w.w2, g),
            derivative_l2(w.w1, g, 1),
            l2_norm(dt_w1.fields.at(dt_index.at(tau)), g),
            l2_norm(source.fields.at(s_index.at(tau)), g),
            m0,
        };
        for (std::size_t c = 0; c < row.size(); ++c) channel[c].push_back(row[c]);
        r.table.rows.push_back({tau});
        r.table.rows.back().insert(r.table.rows.back().end(), row.begin(), row.end());
    }

    const Bound shape = linear ? Bound::Band : Bound::AtMost;
    struct Spec {
        std::size_t column;
        double target;
        double tol;
        Bound bound;
    };
    const std::vector<Spec> specs = {
        {0, cfg.conservative_target, cfg.conservative_tol, shape},
        {1, cfg.conservative_target, cfg.conservative_tol, Bound::AtMost},
        {2, cfg.dissipative_target, cfg.dissipative_tol, shape},
        {3, cfg.dissipative_target, cfg.dissipative_tol, shape},
        // Upper bounds in the estimates; the time derivative can decay faster.
        {4, cfg.dissipative_target, cfg.dissipative_tol, Bound::AtMost},
        {5, cfg.source_target, cfg.source_tol, Bound::AtMost},
    };
    for (const Spec& s : specs) {
        const std::string& name = r.table.columns[s.column];
        const RateFit fit = fit_decay(samples, channel[s.column], t_lo, t_hi);
        r.fits.push_back({name, fit});
        r.checks.push_back(make_check(name + "_exponent", fit.exponent, s.target, s.tol, s.bound));
        r.checks.push_back(make_check(name + "_residual", fit.residual, cfg.max_residual, 0.0, Bound::AtMost));
    }
    r.checks.push_back(make_check("m0_growth", m0 / m0_first, cfg.m0_growth_limit, 0.0, Bound::AtMost));
    const double drift = mass_drift(traj, w0.w1);
    r.checks.push_back(make_check("mass_drift", drift, 1e-11, 0.0, Bound::AtMost));

    r.diagnostics = {{"epsilon", p.epsilon}, {"lambda", p.lambda},      {"a", p.a},
                     {"E2", e2},             {"dt", dt},                {"t_lo", t_lo},
                     {"t_hi", t_hi},         {"M0", m0},                {"mass_drift", drift},
                     {"max_imag_residue", traj.max_imag_residue}};
    r.pass = all_pass(r.checks);
    return r;
}

namespace {

struct EpsilonRun {
    double epsilon = 0.0;
    double error = 0.0;
    double source = 0.0;
    double drift = 0.0;
};

EpsilonRun epsilon_run(const ModelParams& p, const Grid& g, const EpsilonStudyConfig& cfg) {
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(p, g);
    const double delta = 2.0 * dt;
    const double t = cfg.t_final;
    if (t - delta <= 0.0) throw ParameterError("time step too large for t_final");
    const StateCD w0 = initial_state(cfg.data, p, g);
    const std::vector<double> times = {t - delta, t, t + delta};

    Trajectory traj;
    if (p.h.is_zero()) {
        traj = exact_linear_trajectory(w0, times, dt, p, g);
    } else {
        SolverConfig sc;
        sc.dt = dt;
        sc.t_final = t + delta;
        sc.record_times = times;
        traj = nonlinear_jinxin_solve(w0, sc, p, g);
    }
    SolverConfig pc;
    pc.dt = std::min(cfg.parabolic_dt, t);
    pc.t_final = t;
    const Trajectory limit = parabolic_solve(w0.w1, pc, p, g, cfg.corrected);

    const SourceSeries s = compute_S(traj, p);
    if (s.times.size() != 1) throw NumericalError("source term not available at t_final");
    EpsilonRun out;
    out.epsilon = p.epsilon;
    out.error = l2_norm(difference(traj.first[1], limit.first.back()), g);
    out.source = l2_norm(s.fields[0], g);
    out.drift = std::max(mass_drift(traj, w0.w1), mass_drift(limit, w0.w1));
    return out;
}

struct ProfileRun {
    std::vector<double> times;
    std::vector<double> diff;
    double m_beta = 0.0;
    double drift = 0.0;
};

ProfileRun profile_run(const ModelParams& p, const Grid& g, const EpsilonStudyConfig& cfg, double t_lo,
                       double t_hi) {
    const double dt = cfg.profile_dt > 0.0 ? cfg.profile_dt : default_time_step(p, g);
    const double pdt = cfg.profile_parabolic_dt > 0.0 ? cfg.profile_parabolic_dt : dt;
    const StateCD w0 = initial_state(cfg.data, p, g);
    std::vector<double> times = log_spaced(t_lo, t_hi, cfg.profile_samples);
    times.insert(times.begin(), 0.0);

    Trajectory traj;
    if (p.h.is_zero()) {
        traj = exact_linear_trajectory(w0, times, dt, p, g);
    } else {
        SolverConfig sc;
        sc.dt = dt;
        sc.t_final = t_hi;
        sc.record_times = times;
        traj = nonlinear_jinxin_solve(w0, sc, p, g);
    }
    SolverConfig pc;
    pc.dt = pdt;
    pc.t_final = t_hi;
    pc.record_times = times;
    const Trajectory limit = parabolic_solve(w0.w1, pc, p, g, cfg.corrected);

    ProfileRun out;
    for (std::size_t i = 1; i < times.size(); ++i) {
        out.times.push_back(times[i]);
        out.diff.push_back(l2_norm(difference(traj.first[i], limit.first[i]), g));
    }
    out.m_beta = m_beta_functional(traj, limit, p, 0, cfg.mu);
    out.drift = std::max(mass_drift(traj, w0.w1), mass_drift(limit, w0.w1));
    return out;
}

}  // namespace

StudyResult epsilon_study(const ModelParams& base, const Grid& g, const EpsilonStudyConfig& cfg) {
    base.validate();
    if (cfg.epsilons.size() < 2) throw ParameterError("epsilon study needs at least two epsilon values");
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        base.with_epsilon(cfg.epsilons[i]).validate();
        if (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))
            throw ParameterError("epsilon list must be strictly decreasing");
    }
    if (!(cfg.t_final > 0.0)) throw ParameterError("t_final must be positive");
    if (!(cfg.parabolic_dt > 0.0)) throw ParameterError("parabolic_dt must be positive");
    if (cfg.mu < 0.0 || cfg.mu >= 0.5) throw ParameterError("mu must lie in [0, 1/2)");

    const bool with_profile = cfg.profile_epsilon > 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    ModelParams profile_params = base;
    if (with_profile) {
        profile_params = base.with_epsilon(cfg.profile_epsilon);
        profile_params.validate();
        const FitWindow def = default_fit_window(profile_params, g);
        t_lo = cfg.profile_t_lo > 0.0 ? cfg.profile_t_lo : def.t_lo;
        t_hi = cfg.profile_t_hi > 0.0 ? cfg.profile_t_hi : def.t_hi;
        if (!(t_lo < t_hi)) throw ParameterError("profile window must satisfy t_lo < t_hi");
        if (cfg.profile_samples < 5) throw ParameterError("profile needs at least 5 samples");
        check_boundary_guard(profile_params, g, t_hi);
    }

    const std::size_t count = cfg.epsilons.size();
    std::vector<EpsilonRun> runs(count);
    ProfileRun profile;
    parallel_for(count + (with_profile ? 1 : 0), cfg.jobs, [&](std::size_t k) {
        if (k < count) {
            runs[k] = epsilon_run(base.with_epsilon(cfg.epsilons[k]), g, cfg);
        } else {
            profile = profile_run(profile_params, g, cfg, t_lo, t_hi);
        }
    });

    StudyResult r;
    const bool linear = base.h.is_zero();
    r.label = linear ? "epsilon-linear" : "epsilon-nonlinear";
    r.table.key = "epsilon";
    r.table.columns = {"error_l2", "S_l2"};
    std::vector<double> eps, err;
    double drift = 0.0;
    for (const EpsilonRun& run : runs) {
        r.table.rows.push_back({run.epsilon, run.error, run.source});
        eps.push_back(run.epsilon);
        err.push_back(run.error);
        drift = std::max(drift, run.drift);
    }
    const RateFit slope = fit_loglog(eps, err);
    r.fits.push_back({"epsilon_slope", slope});
    r.epsilon_slope = slope.exponent;
    r.checks.push_back(make_check("epsilon_slope", slope.exponent, cfg.slope_target, cfg.slope_tol,
                                  linear ? Bound::AtLeast : Bound::Band));
    for (std::size_t i = 0; i + 1 < count; ++i) {
        if (std::abs(runs[i].epsilon / runs[i + 1].epsilon - 2.0) > 1e-9) continue;
        const double ratio = runs[i].source / runs[i + 1].source;
        r.checks.push_back(make_check("S_halving_" + fmt(runs[i].epsilon), ratio, 2.0, 2.0 * cfg.halving_tol,
                                      Bound::Band));
    }
    if (with_profile) {
        const RateFit fit = fit_decay(profile.times, profile.diff, t_lo, t_hi);
        r.fits.push_back({"difference_in_time", fit});
        r.checks.push_back(
            make_check("difference_exponent", fit.exponent, cfg.profile_target, cfg.profile_tol, Bound::AtMost));
        r.checks.push_back(
            make_check("difference_residual", fit.residual, cfg.max_residual, 0.0, Bound::AtMost));
        Table t;
        t.key = "t";
        t.columns = {"difference_l2"};
        for (std::size_t i = 0; i < profile.times.size(); ++i) t.rows.push_back({profile.times[i], profile.diff[i]});
        r.profile = std::move(t);
        r.diagnostics.push_back({"profile_epsilon", cfg.profile_epsilon});
        r.diagnostics.push_back({"m_beta", profile.m_beta});
        drift = std::max(drift, profile.drift);
    }
    r.checks.push_back(make_check("mass_drift", drift, 1e-11, 0.0, Bound::AtMost));
    r.diagnostics.push_back({"t_final", cfg.t_final});
    r.diagnostics.push_back({"mass_drift", drift});
    r.pass = all_pass(r.checks);
    return r;
}

StudyResult bgk_check(const ModelParams& p, const Grid& g, const BgkCheckConfig& cfg) {
    p.validate();
    const StateCD w0 = initial_state(cfg.data, p, g);
    SolverConfig sc;
    sc.dt = cfg.dt;
    sc.t_final = cfg.t_final;
    sc.record_times = {0.0, cfg.t_final};
    const Trajectory cd = nonlinear_jinxin_solve(w0, sc, p, g);
    const Trajectory kin = bgk_solve(uv_to_bgk(cd_to_uv(w0, p), p), sc, p, g);
    const double gap = l2_norm(difference(cd.density(1), kin.density(1)), g);
    const double drift = std::max(mass_drift(cd, w0.w1), mass_drift(kin, w0.w1));

    StudyResult r;
    r.label = "bgk-check";
    r.table.key = "t";
    r.table.columns = {"u_cd_l2", "u_bgk_l2", "discrepancy_l2"};
    r.table.rows.push_back({cfg.t_final, l2_norm(cd.density(1), g), l2_norm(kin.density(1), g), gap});
    r.checks.push_back(make_check("discrepancy", gap, cfg.tolerance, 0.0, Bound::AtMost));
    r.checks.push_back(make_check("mass_drift", drift, 1e-11, 0.0, Bound::AtMost));
    r.diagnostics = {{"epsilon", p.epsilon}, {"dt", cfg.dt}, {"t_final", cfg.t_final}, {"mass_drift", drift}};
    r.pass = all_pass(r.checks);
    return r;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, count));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

void write_table_csv(std::ostream& os, const Table& t) {
    os << t.key;
    for (const auto& c : t.columns) os << ',' << c;
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
        os << '\n';
    }
}

void write_study_csv(std::ostream& os, const StudyResult& r) {
    write_table_csv(os, r.table);
    for (const NamedFit& f : r.fits) {
        os << "#fit " << f.name << " exponent=" << fmt(f.fit.exponent) << " t_lo=" << fmt(f.fit.t_lo)
           << " t_hi=" << fmt(f.fit.t_hi) << " residual=" << fmt(f.fit.residual) << " n=" << f.fit.n_points
           << '\n';
    }
}

void write_summary(std::ostream& os, const StudyResult& r) {
    os << "label=" << r.label << '\n';
    for (const NamedFit& f : r.fits) {
        os << "fit." << f.name << ".exponent=" << fmt(f.fit.exponent) << '\n';
        os << "fit." << f.name << ".residual=" << fmt(f.fit.residual) << '\n';
    }
    if (r.epsilon_slope) os << "epsilon_slope=" << fmt(*r.epsilon_slope) << '\n';
    for (const Check& c : r.checks) {
        os << "check." << c.name << ".value=" << fmt(c.value) << '\n';
        os << "check." << c.name << ".target=" << fmt(c.target) << '\n';
        os << "check." << c.name << ".tolerance=" << fmt(c.tolerance) << '\n';
        os << "check." << c.name << ".bound=" << bound_name(c.bound) << '\n';
        os << "check." << c.name << ".pass=" << (c.pass ? "true" : "false") << '\n';
    }
    for (const auto& [k, v] : r.diagnostics) os << "diag." << k << '=' << fmt(v) << '\n';
    os << "pass=" << (r.pass ? "true" : "false") << '\n';
}

}  // namespace jinxin
