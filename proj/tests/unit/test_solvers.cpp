#include <doctest.h>

#include <cmath>
#include <sstream>

#include "jinxin/errors.hpp"
#include "jinxin/harness.hpp"
#include "jinxin/model.hpp"
#include "jinxin/solvers.hpp"
#include "jinxin/spectral.hpp"
#include "jinxin/trajectory_io.hpp"
#include "oracles.hpp"

using namespace jinxin;

namespace {

ModelParams burgers(double eps, double a) {
    ModelParams p;
    p.epsilon = eps;
    p.a = a;
    p.h = Nonlinearity::quadratic(0.5);
    return p;
}

ModelParams linear(double eps, double a) {
    ModelParams p = burgers(eps, a);
    p.h = Nonlinearity::none();
    return p;
}

StateCD data(const ModelParams& p, const Grid& g, double amp = 0.05) {
    return uv_to_cd(well_prepared_data(gaussian(g, amp, 1.0), p, g), p);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double mean(const std::vector<double>& u) {
    double s = 0.0;
    for (double x : u) s += x;
    return s / static_cast<double>(u.size());
}

}  // namespace

TEST_CASE("solver configuration validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c.dt = 0.1;
    c.record_times = {0.5, 0.2};
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c.record_times = {0.5, 2.0};
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c.record_times = {0.0, 1.0};
    CHECK_NOTHROW(c.validate());
    const Grid g(1024, 100.0);
    CHECK(default_time_step(ModelParams{}, g) == doctest::Approx(0.5 * g.dx() * 0.1));
}

TEST_CASE("linear propagation: identities") {
    const Grid g(128, 40.0);
    const ModelParams p = linear(0.1, 0.5);
    const StateCD w0 = data(p, g);
    const StateCD same = linear_propagate(w0, 0.0, p, g);
    CHECK(max_abs_diff(same.w1, w0.w1) < 1e-16);
    CHECK(max_abs_diff(same.w2, w0.w2) < 1e-16);

    const StateCD flat{std::vector<double>(g.size(), 0.7), std::vector<double>(g.size(), 0.0)};
    const StateCD later = linear_propagate(flat, 13.0, p, g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(later.w1[j] == doctest::Approx(0.7).epsilon(1e-14));
        CHECK(std::abs(later.w2[j]) < 1e-15);
    }

    const StateCD two_step = linear_propagate(linear_propagate(w0, 0.8, p, g), 1.7, p, g);
    const StateCD one_step = linear_propagate(w0, 2.5, p, g);
    CHECK(max_abs_diff(two_step.w1, one_step.w1) < 1e-10);
    CHECK(max_abs_diff(two_step.w2, one_step.w2) < 1e-10);
}

TEST_CASE("linear propagation of a Fourier mode matches the Taylor oracle") {
    const Grid g(64, 20.0);
    const ModelParams p = linear(0.2, 0.5);
    const std::size_t k = 3;
    const double xi = g.xi(k);
    std::vector<double> w1(g.size()), w2(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        w1[j] = std::cos(xi * g.x(j));
        w2[j] = 0.5 * std::sin(xi * g.x(j));
    }
    const double t = 1.3;
    const StateCD out = linear_propagate({w1, w2}, t, p, g);
    // Coefficient at +xi is (1/2, -i/4); the field is twice the real part.
    const Mat2c m = oracle::expm_symbol(xi, t, p);
    const Vec2c c = m * Vec2c{0.5, cplx(0.0, -0.25)};
    for (std::size_t j = 0; j < g.size(); ++j) {
        const cplx e = std::exp(cplx(0.0, xi * g.x(j)));
        CHECK(std::abs(out.w1[j] - 2.0 * (c.c1 * e).real()) < 1e-13);
        CHECK(std::abs(out.w2[j] - 2.0 * (c.c2 * e).real()) < 1e-13);
    }
}

TEST_CASE("h = 0: the exponential integrator reproduces the exact propagator") {
    const Grid g(256, 60.0);
    const ModelParams p = linear(0.1, 0.5);
    const StateCD w0 = data(p, g);
    SolverConfig c;
    c.dt = 0.0137;
    c.t_final = 3.0;
    c.record_times = {0.0, 0.5, 1.234, 3.0};
    const Trajectory traj = nonlinear_jinxin_solve(w0, c, p, g);
    REQUIRE(traj.size() == 4);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const StateCD ref = linear_propagate(w0, traj.times[i], p, g);
        CHECK(max_abs_diff(traj.first[i], ref.w1) <= 1e-9);
        CHECK(max_abs_diff(traj.second[i], ref.w2) <= 1e-9);
    }
}

TEST_CASE("nonlinear solver conserves mass and stays real") {
    const Grid g(256, 60.0);
    const ModelParams p = burgers(0.1, 0.5);
    const StateCD w0 = data(p, g, 0.3);
    SolverConfig c;
    c.dt = 0.01;
    c.t_final = 4.0;
    c.record_times = {1.0, 2.0, 4.0};
    const Trajectory traj = nonlinear_jinxin_solve(w0, c, p, g);
    const double m0 = mean(w0.w1);
    for (std::size_t i = 0; i < traj.size(); ++i) CHECK(std::abs(mean(traj.first[i]) - m0) <= 1e-11 * std::abs(m0));
    CHECK(traj.max_imag_residue <= 1e-12);
}

TEST_CASE("nonlinear solver is second order in dt") {
    const Grid g(256, 60.0);
    const ModelParams p = burgers(0.1, 0.5);
    const StateCD w0 = data(p, g, 0.3);
    SolverConfig c;
    c.t_final = 2.0;
    c.dt = 0.04 / 8.0;
    const Trajectory ref = nonlinear_jinxin_solve(w0, c, p, g);
    std::vector<double> errors;
    for (double dt : {0.04, 0.02}) {
        c.dt = dt;
        const Trajectory t = nonlinear_jinxin_solve(w0, c, p, g);
        std::vector<double> d(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) d[j] = t.first.back()[j] - ref.first.back()[j];
        errors.push_back(l2_norm(d, g));
    }
    const double ratio = errors[0] / errors[1];
    MESSAGE("error ratio under dt halving: " << ratio);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.6);
}

TEST_CASE("stiff relaxation does not limit the step") {
    const Grid g(256, 60.0);
    const ModelParams p = burgers(0.02, 0.5);
    SolverConfig c;
    c.dt = 0.01;
    c.t_final = 5.0;
    CHECK_NOTHROW(nonlinear_jinxin_solve(data(p, g), c, p, g));
}

TEST_CASE("blow-up detector aborts a run outside the subcharacteristic regime") {
    const Grid g(256, 60.0);
    ModelParams p = burgers(0.1, 0.0);
    p.lambda = 0.5;
    SolverConfig c;
    c.t_final = 20.0;
    c.dt = default_time_step(p, g);
    CHECK_THROWS_AS(nonlinear_jinxin_solve(data(p, g, 10.0), c, p, g), NumericalError);
}

TEST_CASE("BGK: equilibrium is a fixed point") {
    const Grid g(64, 10.0);
    const ModelParams p = linear(0.1, 0.0);
    const StateBGK s0{std::vector<double>(g.size(), 0.25), std::vector<double>(g.size(), 0.25)};
    SolverConfig c;
    c.dt = 0.01;
    c.t_final = 1.0;
    const Trajectory traj = bgk_solve(s0, c, p, g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(std::abs(traj.first.back()[j] - 0.25) <= 1e-12);
        CHECK(std::abs(traj.second.back()[j] - 0.25) <= 1e-12);
    }
}

TEST_CASE("BGK conserves f1 + f2 and agrees with the C-D solver") {
    const Grid g(512, 100.0);
    const ModelParams p = burgers(0.1, 0.5);
    const StateCD w0 = data(p, g);
    SolverConfig c;
    c.dt = 1e-2;
    c.t_final = 5.0;
    c.record_times = {2.5, 5.0};
    const Trajectory kin = bgk_solve(uv_to_bgk(cd_to_uv(w0, p), p), c, p, g);
    const Trajectory cd = nonlinear_jinxin_solve(w0, c, p, g);
    const double m0 = mean(w0.w1);
    for (std::size_t i = 0; i < kin.size(); ++i) CHECK(std::abs(mean(kin.density(i)) - m0) <= 1e-11 * m0);
    std::vector<double> d(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) d[j] = kin.density(1)[j] - cd.first[1][j];
    CHECK(l2_norm(d, g) <= 1e-6);
    // Mapping kinetic frames to C-D variables gives the same dissipative part.
    CHECK(max_abs_diff(kin.cd(1).w2, cd.second[1]) <= 1e-6);
}

TEST_CASE("parabolic solver: Fourier mode and mass") {
    const Grid g(64, 2.0 * M_PI * 4.0);
    ModelParams p = linear(0.3, 0.5);
    const std::size_t k = 4;
    const double xi = g.xi(k);
    std::vector<double> u0(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) u0[j] = std::cos(xi * g.x(j));
    SolverConfig c;
    c.dt = 0.01;
    c.t_final = 2.0;
    for (bool corrected : {false, true}) {
        const double d = corrected ? p.reduced_speed() * p.reduced_speed() : 1.0;
        const Trajectory traj = parabolic_solve(u0, c, p, g, corrected);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const cplx mode = std::exp(cplx(-d * xi * xi, -0.5 * xi) * 2.0) * std::exp(cplx(0.0, xi * g.x(j)));
            CHECK(std::abs(traj.first.back()[j] - mode.real()) <= 1e-12);
        }
    }
    p.h = Nonlinearity::quadratic(0.5);
    const Grid g2(256, 60.0);
    const std::vector<double> bump = gaussian(g2, 0.5, 1.0);
    const Trajectory traj = parabolic_solve(bump, c, p, g2, false);
    CHECK(std::abs(mean(traj.first.back()) - mean(bump)) <= 1e-11 * mean(bump));
}

TEST_CASE("parabolic Burgers matches the Cole-Hopf solution") {
    const Grid g(1024, 200.0);
    ModelParams p = burgers(0.1, 0.0);
    const double amp = 0.5, sigma = 1.0, t = 5.0;
    SolverConfig c;
    c.dt = 1e-3;
    c.t_final = t;
    const Trajectory traj = parabolic_solve(gaussian(g, amp, sigma), c, p, g, false);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); j += 8) {
        const double x = g.x(j);
        if (std::abs(x) > 30.0) continue;
        worst = std::max(worst, std::abs(traj.first.back()[j] - oracle::cole_hopf_burgers(x, t, amp, sigma, 1.0)));
    }
    MESSAGE("max deviation from Cole-Hopf: " << worst);
    CHECK(worst < 1e-7);
}

TEST_CASE("parabolic Burgers decays like t^(-1/4)") {
    const Grid g(4096, 1280.0);
    const ModelParams p = burgers(0.1, 0.0);
    const std::vector<double> times = log_spaced(10.0, 1000.0, 20);
    SolverConfig c;
    c.dt = 0.05;
    c.t_final = 1000.0;
    c.record_times = times;
    const Trajectory traj = parabolic_solve(gaussian(g, 0.05, 1.0), c, p, g, false);
    std::vector<double> n;
    for (const auto& f : traj.first) n.push_back(l2_norm(f, g));
    const RateFit fit = fit_decay(times, n, 10.0, 1000.0);
    CHECK(fit.exponent == doctest::Approx(-0.25).epsilon(0.04));
}

TEST_CASE("compute_S against the symbol-based time derivative") {
    const Grid g(256, 60.0);
    const ModelParams p = linear(0.2, 0.5);
    const StateCD w0 = data(p, g, 0.3);
    const double dt = 1e-3, t = 1.0;
    SolverConfig c;
    c.dt = dt;
    c.t_final = t + 2 * dt;
    c.record_times = {t - 2 * dt, t, t + 2 * dt};
    const Trajectory traj = nonlinear_jinxin_solve(w0, c, p, g);
    const SourceSeries s = compute_S(traj, p);
    REQUIRE(s.times.size() == 1);
    CHECK(s.times[0] == t);

    // Exact: d/dt w = E w mode by mode, so S = eps s ((E w)_2 - a d/dx w2).
    const StateCD wt = linear_propagate(w0, t, p, g);
    Fft fft(g);
    const SpectralField a = fft.forward(wt.w1), b = fft.forward(wt.w2);
    SpectralField rhs = b;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const Mat2c e = symbol_E(g.xi(j), p).entries;
        const cplx dx = g.is_nyquist(j) ? cplx(0.0) : cplx(0.0, g.xi(j));
        rhs[j] = p.epsilon * p.reduced_speed() * (e.m21 * a[j] + e.m22 * b[j] - p.a * dx * b[j]);
        if (g.is_nyquist(j)) rhs[j] = 0.0;
    }
    const std::vector<double> exact = fft.inverse(rhs);
    std::vector<double> d(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) d[j] = s.fields[0][j] - exact[j];
    CHECK(l2_norm(d, g) <= 1e-4 * l2_norm(exact, g));
}

TEST_CASE("compute_S contract and trivial cases") {
    const Grid g(64, 20.0);
    const ModelParams p = linear(0.1, 0.0);
    SolverConfig c;
    c.dt = 0.01;
    c.t_final = 0.04;
    c.record_times = {0.0, 0.02, 0.04};
    const StateCD zero{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
    const SourceSeries s = compute_S(nonlinear_jinxin_solve(zero, c, p, g), p);
    REQUIRE(s.fields.size() == 1);
    for (double v : s.fields[0]) CHECK(v == 0.0);
    c.record_times = {0.0, 0.04};
    CHECK_THROWS_AS(compute_S(nonlinear_jinxin_solve(zero, c, p, g), p), ContractError);
    const Trajectory scalar = parabolic_solve(zero.w1, c, p, g, false);
    CHECK_THROWS_AS(compute_S(scalar, p), ContractError);
}

TEST_CASE("trajectory binary round trip and CSV layout") {
    const Grid g(16, 4.0);
    const ModelParams p = burgers(0.1, 0.5);
    SolverConfig c;
    c.dt = 0.01;
    c.t_final = 0.1;
    c.record_times = {0.0, 0.05, 0.1};
    const Trajectory traj = nonlinear_jinxin_solve(data(p, g), c, p, g);

    std::stringstream bin;
    write_trajectory_binary(bin, traj);
    CHECK(bin.str().substr(0, 4) == "JXT1");
    CHECK(bin.str().size() == 4 + 4 + 4 + 3 * 8 + 4 * 8 + 3 * (8 + 2 * 16 * 8));
    const Trajectory back = read_trajectory_binary(bin);
    CHECK(back.times == traj.times);
    CHECK(back.first == traj.first);
    CHECK(back.second == traj.second);
    CHECK(back.grid == traj.grid);
    CHECK(back.params.epsilon == p.epsilon);

    std::stringstream bad("JXT2....");
    CHECK_THROWS_AS(read_trajectory_binary(bad), ContractError);

    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("t,field,-2,", 0) == 0);
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 6);
}
