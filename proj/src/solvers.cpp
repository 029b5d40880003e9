#include "jinxin/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jinxin/errors.hpp"
#include "jinxin/spectral.hpp"
#include "jinxin/symbol.hpp"

namespace jinxin {

namespace {

constexpr cplx kI(0.0, 1.0);

std::vector<double> targets_of(const SolverConfig& cfg) {
    if (cfg.record_times.empty()) return {cfg.t_final};
    return cfg.record_times;
}

// Advances through every target time, landing on each exactly. `step(h)`
// advances the state by h, `record(t)` stores it.
template <class Step, class Record>
void march(const SolverConfig& cfg, Step&& step, Record&& record) {
    double t = 0.0;
    for (double target : targets_of(cfg)) {
        const double span = target - t;
        const auto steps = static_cast<long>(std::ceil(span / cfg.dt - 1e-6));
        for (long m = 0; m < steps; ++m) {
            const double h = m + 1 < steps ? cfg.dt : span - static_cast<double>(steps - 1) * cfg.dt;
            step(h, t + static_cast<double>(m) * cfg.dt);
        }
        t = target;
        record(target);
    }
}

// Per-mode coefficients, cached for the two most recent step sizes (the
// regular step and the last shortened one).
template <class Coeff>
class CoefficientCache {
public:
    template <class Build>
    const std::vector<Coeff>& get(double h, Build&& build) {
        for (auto& e : entries_)
            if (e.first == h && !e.second.empty()) return e.second;
        auto& slot = entries_[next_];
        next_ = 1 - next_;
        slot.first = h;
        slot.second = build(h);
        return slot.second;
    }

private:
    std::pair<double, std::vector<Coeff>> entries_[2];
    int next_ = 0;
};

// Applies `f(xi)` per mode; at the Nyquist index the symbol is averaged over
// +xi and -xi so the result stays real.
template <class Coeff, class F>
std::vector<Coeff> per_mode(const Grid& g, F&& f) {
    std::vector<Coeff> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double xi = g.xi(j);
        if (g.is_nyquist(j)) {
            out[j] = Coeff::average(f(xi), f(-xi));
        } else {
            out[j] = f(xi);
        }
    }
    return out;
}

Mat2c mean(const Mat2c& a, const Mat2c& b) { return (a + b) * 0.5; }
Vec2c mean(const Vec2c& a, const Vec2c& b) { return {0.5 * (a.c1 + b.c1), 0.5 * (a.c2 + b.c2)}; }

// Coefficients of the exponential Runge-Kutta pair for a 2x2 linear part
// with the source entering (a multiple of) a fixed column `forcing`.
struct PairCoeff {
    Mat2c expm;
    Vec2c phi1;
    Vec2c phi2;

    static PairCoeff average(const PairCoeff& a, const PairCoeff& b) {
        return {mean(a.expm, b.expm), mean(a.phi1, b.phi1), mean(a.phi2, b.phi2)};
    }
};

struct ScalarCoeff {
    cplx expm;
    cplx phi1;
    cplx phi2;

    static ScalarCoeff average(const ScalarCoeff& a, const ScalarCoeff& b) {
        return {0.5 * (a.expm + b.expm), 0.5 * (a.phi1 + b.phi1), 0.5 * (a.phi2 + b.phi2)};
    }
};

PairCoeff pair_coefficients(const Mat2c& m, cplx mu1, cplx mu2, double h, const Vec2c& forcing) {
    const Mat2c mh = m * h;
    const Mat2c p1 = phi_matrix(1, mh, mu1 * h, mu2 * h) * h;
    const Mat2c p2 = phi_matrix(2, mh, mu1 * h, mu2 * h) * h;
    return {phi_matrix(0, mh, mu1 * h, mu2 * h), p1 * forcing, p2 * forcing};
}

ScalarCoeff scalar_coefficients(cplx mu, double h) {
    return {std::exp(mu * h), h * phi(1, mu * h), h * phi(2, mu * h)};
}

// Eigenvalues of a general 2x2 matrix, the small one computed as det / big.
std::pair<cplx, cplx> eigenvalues_2x2(const Mat2c& m) {
    const cplx half_tr = 0.5 * m.trace();
    const cplx disc = std::sqrt(half_tr * half_tr - m.det());
    const cplx big = std::abs(half_tr + disc) >= std::abs(half_tr - disc) ? half_tr + disc : half_tr - disc;
    const cplx small = big == 0.0 ? cplx(0.0) : m.det() / big;
    return {small, big};
}

double spectral_norm2(const SpectralField& a) {
    double s = 0.0;
    for (const cplx& c : a.values) s += std::norm(c);
    return s;
}

// Blow-up detection on the squared spectral norm.
class Watchdog {
public:
    Watchdog(double factor, double initial) : limit_(factor * factor * std::max(initial, 1e-300)) {}

    void check(double norm2, double t) const {
        if (!std::isfinite(norm2) || norm2 > limit_) {
            std::ostringstream msg;
            msg << "solution blew up near t=" << t << " (norm growth beyond the configured factor)";
            throw NumericalError(msg.str());
        }
    }

private:
    double limit_;
};

// Spectrum of h(field), dealiased on request.
SpectralField nonlinear_spectrum(Fft& fft, const SpectralField& field, const ModelParams& p, bool dealiased) {
    std::vector<double> phys = fft.inverse(field);
    for (double& x : phys) x = p.h.value(x);
    SpectralField out = fft.forward(phys);
    if (dealiased) dealias(out, fft.grid());
    return out;
}

void check_state_size(std::span<const double> a, std::span<const double> b, const Grid& g) {
    if (a.size() != g.size() || b.size() != g.size()) throw ContractError("initial state does not match the grid");
}

}  // namespace

void SolverConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ParameterError("t_final must be non-negative");
    if (!(blowup_factor > 1.0)) throw ParameterError("blowup_factor must exceed 1");
    double prev = 0.0;
    for (double t : record_times) {
        if (!(t >= prev)) throw ParameterError("record times must be sorted and non-negative");
        if (t > t_final * (1.0 + 1e-12)) throw ParameterError("record time beyond t_final");
        prev = t;
    }
}

double default_time_step(const ModelParams& p, const Grid& g) {
    p.validate();
    return std::min(0.1, 0.5 * g.dx() * p.epsilon / p.lambda);
}

StateCD Trajectory::cd(std::size_t i) const {
    if (i >= times.size()) throw ContractError("trajectory index out of range");
    switch (representation) {
        case Representation::ConservativeDissipative:
            return {first[i], second[i]};
        case Representation::Kinetic:
            return uv_to_cd(bgk_to_uv({first[i], second[i]}, params), params);
        case Representation::Scalar:
            break;
    }
    throw ContractError("scalar trajectory has no C-D state");
}

std::vector<double> Trajectory::density(std::size_t i) const {
    if (i >= times.size()) throw ContractError("trajectory index out of range");
    if (representation != Representation::Kinetic) return first[i];
    std::vector<double> u(first[i].size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = first[i][k] + second[i][k];
    return u;
}

StateCD linear_propagate(const StateCD& w0, double t, const ModelParams& p, const Grid& g) {
    p.validate();
    check_state_size(w0.w1, w0.w2, g);
    if (!(t >= 0.0)) throw ParameterError("propagation time must be non-negative");
    Fft fft(g);
    const SpectralField a = fft.forward(w0.w1);
    const SpectralField b = fft.forward(w0.w2);
    SpectralField c1 = a, c2 = b;
    for (std::size_t j = 0; j < g.size(); ++j) {
        Mat2c m = matexp_E(g.xi(j), t, p).entries;
        if (g.is_nyquist(j)) m = mean(m, matexp_E(-g.xi(j), t, p).entries);
        const Vec2c r = m * Vec2c{a[j], b[j]};
        c1[j] = r.c1;
        c2[j] = r.c2;
    }
    return {fft.inverse(c1), fft.inverse(c2)};
}

Trajectory nonlinear_jinxin_solve(const StateCD& w0, const SolverConfig& cfg, const ModelParams& p,
                                  const Grid& g) {
    p.validate();
    cfg.validate();
    check_state_size(w0.w1, w0.w2, g);

    Fft fft(g);
    SpectralField w1 = fft.forward(w0.w1);
    SpectralField w2 = fft.forward(w0.w2);
    const double forcing_scale = 1.0 / (p.epsilon * p.reduced_speed());
    const bool linear = p.h.is_zero();

    Trajectory traj;
    traj.representation = Representation::ConservativeDissipative;
    traj.params = p;
    traj.grid = g;
    traj.dt = cfg.dt;

    const Watchdog watchdog(cfg.blowup_factor, spectral_norm2(w1) + spectral_norm2(w2));
    CoefficientCache<PairCoeff> cache;
    auto build = [&](double h) {
        return per_mode<PairCoeff>(g, [&](double xi) {
            const EigenData ed = eigenvalues_E(xi, p);
            return pair_coefficients(symbol_E(xi, p).entries, ed.lam1, ed.lam2, h, {0.0, forcing_scale});
        });
    };

    auto step = [&](double h, double t) {
        const auto& c = cache.get(h, build);
        const std::size_t n = g.size();
        if (linear) {
            for (std::size_t j = 0; j < n; ++j) {
                const Vec2c r = c[j].expm * Vec2c{w1[j], w2[j]};
                w1[j] = r.c1;
                w2[j] = r.c2;
            }
        } else {
            const SpectralField n0 = nonlinear_spectrum(fft, w1, p, cfg.dealias);
            SpectralField a1 = w1, a2 = w2;
            for (std::size_t j = 0; j < n; ++j) {
                const Vec2c r = c[j].expm * Vec2c{w1[j], w2[j]};
                a1[j] = r.c1 + c[j].phi1.c1 * n0[j];
                a2[j] = r.c2 + c[j].phi1.c2 * n0[j];
            }
            const SpectralField na = nonlinear_spectrum(fft, a1, p, cfg.dealias);
            for (std::size_t j = 0; j < n; ++j) {
                const cplx d = na[j] - n0[j];
                w1[j] = a1[j] + c[j].phi2.c1 * d;
                w2[j] = a2[j] + c[j].phi2.c2 * d;
            }
        }
        watchdog.check(spectral_norm2(w1) + spectral_norm2(w2), t + h);
    };
    auto record = [&](double t) {
        double r1 = 0.0, r2 = 0.0;
        traj.times.push_back(t);
        traj.first.push_back(fft.inverse(w1, &r1));
        traj.second.push_back(fft.inverse(w2, &r2));
        traj.max_imag_residue = std::max({traj.max_imag_residue, r1, r2});
    };
    march(cfg, step, record);
    return traj;
}

Trajectory bgk_solve(const StateBGK& s0, const SolverConfig& cfg, const ModelParams& p, const Grid& g) {
    p.validate();
    cfg.validate();
    check_state_size(s0.f1, s0.f2, g);

    Fft fft(g);
    SpectralField f1 = fft.forward(s0.f1);
    SpectralField f2 = fft.forward(s0.f2);
    const double e = p.epsilon;
    const double e2 = e * e;
    // Linear Maxwellian weights: M_{1,2} = c_{1,2} u + h(u)-part.
    const double c1 = 0.5 + p.a * e / (2.0 * p.lambda);
    const double c2 = 0.5 - p.a * e / (2.0 * p.lambda);
    const double source = 1.0 / (2.0 * p.lambda * e);
    const bool linear = p.h.is_zero();

    Trajectory traj;
    traj.representation = Representation::Kinetic;
    traj.params = p;
    traj.grid = g;
    traj.dt = cfg.dt;

    const Watchdog watchdog(cfg.blowup_factor, spectral_norm2(f1) + spectral_norm2(f2));
    CoefficientCache<PairCoeff> cache;
    auto build = [&](double h) {
        return per_mode<PairCoeff>(g, [&](double xi) {
            // Transport and relaxation with the linear part of the Maxwellian.
            const cplx transport = kI * (p.lambda * xi / e);
            const Mat2c m{-transport - 1.0 / e2 + c1 / e2, c1 / e2, c2 / e2, transport - 1.0 / e2 + c2 / e2};
            const auto [mu1, mu2] = eigenvalues_2x2(m);
            return pair_coefficients(m, mu1, mu2, h, {source, -source});
        });
    };

    auto step = [&](double h, double t) {
        const auto& c = cache.get(h, build);
        const std::size_t n = g.size();
        SpectralField u = f1;
        for (std::size_t j = 0; j < n; ++j) u[j] = f1[j] + f2[j];
        if (linear) {
            for (std::size_t j = 0; j < n; ++j) {
                const Vec2c r = c[j].expm * Vec2c{f1[j], f2[j]};
                f1[j] = r.c1;
                f2[j] = r.c2;
            }
        } else {
            const SpectralField n0 = nonlinear_spectrum(fft, u, p, cfg.dealias);
            SpectralField a1 = f1, a2 = f2, ua = u;
            for (std::size_t j = 0; j < n; ++j) {
                const Vec2c r = c[j].expm * Vec2c{f1[j], f2[j]};
                a1[j] = r.c1 + c[j].phi1.c1 * n0[j];
                a2[j] = r.c2 + c[j].phi1.c2 * n0[j];
                ua[j] = a1[j] + a2[j];
            }
            const SpectralField na = nonlinear_spectrum(fft, ua, p, cfg.dealias);
            for (std::size_t j = 0; j < n; ++j) {
                const cplx d = na[j] - n0[j];
                f1[j] = a1[j] + c[j].phi2.c1 * d;
                f2[j] = a2[j] + c[j].phi2.c2 * d;
            }
        }
        watchdog.check(spectral_norm2(f1) + spectral_norm2(f2), t + h);
    };
    auto record = [&](double t) {
        double r1 = 0.0, r2 = 0.0;
        traj.times.push_back(t);
        traj.first.push_back(fft.inverse(f1, &r1));
        traj.second.push_back(fft.inverse(f2, &r2));
        traj.max_imag_residue = std::max({traj.max_imag_residue, r1, r2});
    };
    march(cfg, step, record);
    return traj;
}

Trajectory parabolic_solve(std::span<const double> u0, const SolverConfig& cfg, const ModelParams& p,
                           const Grid& g, bool corrected) {
    p.validate();
    cfg.validate();
    if (u0.size() != g.size()) throw ContractError("initial datum does not match the grid");

    Fft fft(g);
    SpectralField w = fft.forward(u0);
    const double diffusion = corrected ? p.reduced_speed() * p.reduced_speed() : p.lambda * p.lambda;
    const bool linear = p.h.is_zero();

    Trajectory traj;
    traj.representation = Representation::Scalar;
    traj.params = p;
    traj.grid = g;
    traj.dt = cfg.dt;

    const Watchdog watchdog(cfg.blowup_factor, spectral_norm2(w));
    CoefficientCache<ScalarCoeff> cache;
    auto build = [&](double h) {
        return per_mode<ScalarCoeff>(g, [&](double xi) {
            return scalar_coefficients(cplx(-diffusion * xi * xi, -p.a * xi), h);
        });
    };
    // -d/dx h(w), dealiased.
    auto source = [&](const SpectralField& v) {
        return spectral_derivative(nonlinear_spectrum(fft, v, p, cfg.dealias), g, 1);
    };

    auto step = [&](double h, double t) {
        const auto& c = cache.get(h, build);
        const std::size_t n = g.size();
        if (linear) {
            for (std::size_t j = 0; j < n; ++j) w[j] *= c[j].expm;
        } else {
            const SpectralField n0 = source(w);
            SpectralField a = w;
            for (std::size_t j = 0; j < n; ++j) a[j] = c[j].expm * w[j] - c[j].phi1 * n0[j];
            const SpectralField na = source(a);
            for (std::size_t j = 0; j < n; ++j) w[j] = a[j] - c[j].phi2 * (na[j] - n0[j]);
        }
        watchdog.check(spectral_norm2(w), t + h);
    };
    auto record = [&](double t) {
        double r = 0.0;
        traj.times.push_back(t);
        traj.first.push_back(fft.inverse(w, &r));
        traj.second.emplace_back();
        traj.max_imag_residue = std::max(traj.max_imag_residue, r);
    };
    march(cfg, step, record);
    return traj;
}

namespace {

// Centred difference on a possibly uneven stencil (t0 - h1, t0, t0 + h2).
std::vector<double> centred_difference(std::span<const double> before, std::span<const double> mid,
                                       std::span<const double> after, double h1, double h2) {
    std::vector<double> out(mid.size());
    const double denom = h1 * h2 * (h1 + h2);
    for (std::size_t k = 0; k < mid.size(); ++k)
        out[k] = (h1 * h1 * after[k] - h2 * h2 * before[k] + (h2 * h2 - h1 * h1) * mid[k]) / denom;
    return out;
}

template <class F, class Finish>
SourceSeries centred_series(const Trajectory& traj, F&& field_of, Finish&& finish) {
    if (traj.size() < 3) throw ContractError("time differencing needs at least 3 recorded states");
    SourceSeries out;
    const double reach = 4.0 * traj.dt;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double h1 = traj.times[i] - traj.times[i - 1];
        const double h2 = traj.times[i + 1] - traj.times[i];
        if (!(h1 > 0.0 && h2 > 0.0 && h1 <= reach * (1 + 1e-9) && h2 <= reach * (1 + 1e-9))) continue;
        std::vector<double> d =
            centred_difference(field_of(i - 1), field_of(i), field_of(i + 1), h1, h2);
        finish(i, d);
        out.times.push_back(traj.times[i]);
        out.fields.push_back(std::move(d));
    }
    return out;
}

}  // namespace

SourceSeries compute_S(const Trajectory& traj, const ModelParams& p) {
    p.validate();
    if (traj.representation == Representation::Scalar) throw ContractError("S needs a two-component trajectory");
    const bool cd = traj.representation == Representation::ConservativeDissipative;
    std::vector<std::vector<double>> w2(cd ? 0 : traj.size());
    if (!cd)
        for (std::size_t i = 0; i < traj.size(); ++i) w2[i] = traj.cd(i).w2;
    auto field_of = [&](std::size_t i) -> std::span<const double> { return cd ? traj.second[i] : w2[i]; };

    const double scale = p.epsilon * p.reduced_speed();
    return centred_series(traj, field_of, [&](std::size_t i, std::vector<double>& dt_w2) {
        const std::vector<double> dx_w2 = derivative(field_of(i), traj.grid, 1);
        for (std::size_t k = 0; k < dt_w2.size(); ++k) dt_w2[k] = scale * (dt_w2[k] - p.a * dx_w2[k]);
    });
}

SourceSeries density_time_derivative(const Trajectory& traj) {
    std::vector<std::vector<double>> rho(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) rho[i] = traj.density(i);
    auto field_of = [&](std::size_t i) -> std::span<const double> { return rho[i]; };
    return centred_series(traj, field_of, [](std::size_t, std::vector<double>&) {});
}

}  // namespace jinxin
