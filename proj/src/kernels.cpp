#include "jinxin/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "jinxin/errors.hpp"

namespace jinxin {

namespace {

constexpr cplx kI(0.0, 1.0);

void require_nonnegative_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ContractError("kernel time must be finite and >= 0");
}

}  // namespace

cplx HighFrequencyProjectors::expansion1(double xi) const { return -kI * (speed * xi) - damping1; }

cplx HighFrequencyProjectors::expansion2(double xi) const { return kI * (speed * xi) - damping2; }

LowFrequencyProjectors projectors_zero(cplx z, const ModelParams& p) {
    p.validate();
    const double s = p.reduced_speed();
    const cplx c = -p.epsilon * z * s;
    const Vec2c l{1.0, c};
    const Vec2c r{1.0, c};
    return {Mat2c::outer(r, l), l, r, -p.a * z + s * s * z * z, -1.0 / (p.epsilon * p.epsilon) + p.a * z};
}

HighFrequencyProjectors projectors_infinity(const ModelParams& p) {
    p.validate();
    const double ae = p.a * p.epsilon;
    const double norm = 1.0 / std::sqrt(2.0 * p.lambda);
    // sqrt((lambda^2 - a^2 eps^2)/(lambda -+ a eps)) = sqrt(lambda +- a eps)
    const Vec2c r1{norm * std::sqrt(p.lambda + ae), norm * std::sqrt(p.lambda - ae)};
    const Vec2c r2{-norm * std::sqrt(p.lambda - ae), norm * std::sqrt(p.lambda + ae)};
    const double denom = 2.0 * p.lambda * p.epsilon * p.epsilon;
    return {r1, r2, (p.lambda - ae) / denom, (p.lambda + ae) / denom, p.lambda / p.epsilon};
}

SymbolMatrix parabolic_kernel_hat(double xi, double t, const ModelParams& p) {
    require_nonnegative_time(t);
    const LowFrequencyProjectors low = projectors_zero(kI * xi, p);
    const double s = p.reduced_speed();
    const cplx g_hat = std::exp(cplx(-s * s * xi * xi, -p.a * xi) * t);
    return {low.p_tilde * g_hat, xi};
}

SymbolMatrix hyperbolic_kernel_hat(double xi, double t, const ModelParams& p) {
    require_nonnegative_time(t);
    const HighFrequencyProjectors high = projectors_infinity(p);
    const cplx wave1 = std::exp(high.expansion1(xi) * t);
    const cplx wave2 = std::exp(high.expansion2(xi) * t);
    return {high.projector1() * wave1 + high.projector2() * wave2, xi};
}

KernelSplit kernel_split(double xi, double t, const ModelParams& p) {
    KernelSplit out;
    out.xi = xi;
    out.t = t;
    out.gamma_hat = matexp_E(xi, t, p).entries;
    out.k_hat = parabolic_kernel_hat(xi, t, p).entries;
    out.khyp_hat = hyperbolic_kernel_hat(xi, t, p).entries;
    out.r_hat = out.gamma_hat - out.k_hat - out.khyp_hat;
    return out;
}

void write_kernel_table(std::ostream& os, std::span<const double> xis, std::span<const double> ts,
                        const ModelParams& p) {
    static constexpr const char* kBlocks[] = {"gamma", "K", "Khyp", "R"};
    static constexpr const char* kEntries[] = {"11", "12", "21", "22"};
    os << "xi,t";
    for (const char* block : kBlocks)
        for (const char* entry : kEntries) os << ',' << block << '_' << entry << "_re," << block << '_' << entry << "_im";
    os << '\n';

    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (double xi : xis) {
        for (double t : ts) {
            const KernelSplit split = kernel_split(xi, t, p);
            put(xi);
            os << ',';
            put(t);
            for (const Mat2c* m : {&split.gamma_hat, &split.k_hat, &split.khyp_hat, &split.r_hat}) {
                for (cplx v : {m->m11, m->m12, m->m21, m->m22}) {
                    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                        throw NumericalError("non-finite kernel entry");
                    os << ',';
                    put(v.real());
                    os << ',';
                    put(v.imag());
                }
            }
            os << '\n';
        }
    }
}

}  // namespace jinxin
