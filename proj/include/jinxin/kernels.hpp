#pragma once

#include <iosfwd>
#include <span>

#include "jinxin/params.hpp"
#include "jinxin/symbol.hpp"

namespace jinxin {

/// Second-order low-frequency projector data at a complex point z near 0.
struct LowFrequencyProjectors {
    Mat2c p_tilde;    // R~ L~
    Vec2c l_tilde;    // row eigenprojector (1, -eps z s)
    Vec2c r_tilde;    // column eigenprojector (1, -eps z s)^T
    cplx f_reduced;   // -a z + s^2 z^2
    cplx f_minus;     // -1/eps^2 + a z
};

/// Data at z = infinity: orthonormal eigenvectors of the C-D flux matrix for
/// +lambda/eps (r1) and -lambda/eps (r2), plus the affine eigenvalue expansions.
struct HighFrequencyProjectors {
    Vec2c r1;
    Vec2c r2;
    double damping1;  // (lambda - a eps) / (2 lambda eps^2)
    double damping2;  // (lambda + a eps) / (2 lambda eps^2)
    double speed;     // lambda / eps

    Mat2c projector1() const { return Mat2c::outer(r1, r1); }
    Mat2c projector2() const { return Mat2c::outer(r2, r2); }
    /// -lambda z/eps - damping1 and +lambda z/eps - damping2 at z = i xi.
    cplx expansion1(double xi) const;
    cplx expansion2(double xi) const;
};

/// Gamma^ = K^ + Khyp^ + R^ at one (xi, t); the remainder is defined by subtraction.
struct KernelSplit {
    double xi = 0.0;
    double t = 0.0;
    Mat2c gamma_hat;
    Mat2c k_hat;
    Mat2c khyp_hat;
    Mat2c r_hat;
};

LowFrequencyProjectors projectors_zero(cplx z, const ModelParams& p);
HighFrequencyProjectors projectors_infinity(const ModelParams& p);

/// exp((-a i xi - s^2 xi^2) t) P~(i xi): the advected heat kernel times the rank-one projector.
SymbolMatrix parabolic_kernel_hat(double xi, double t, const ModelParams& p);
/// Two damped transport waves along the z = infinity projectors.
SymbolMatrix hyperbolic_kernel_hat(double xi, double t, const ModelParams& p);
KernelSplit kernel_split(double xi, double t, const ModelParams& p);

/// CSV with one row per (xi, t): re/im of the four entries of gamma, K, Khyp, R.
void write_kernel_table(std::ostream& os, std::span<const double> xis, std::span<const double> ts,
                        const ModelParams& p);

}  // namespace jinxin
