#pragma once

#include <complex>

#include "jinxin/params.hpp"

namespace jinxin {

using cplx = std::complex<double>;

struct Vec2c {
    cplx c1{};
    cplx c2{};
};

/// Dense 2x2 complex matrix, row-major entries m11, m12, m21, m22.
struct Mat2c {
    cplx m11{}, m12{}, m21{}, m22{};

    static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2c outer(const Vec2c& r, const Vec2c& l);

    cplx trace() const { return m11 + m22; }
    cplx det() const { return m11 * m22 - m12 * m21; }
    double max_abs() const;

    Mat2c operator+(const Mat2c& o) const { return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22}; }
    Mat2c operator-(const Mat2c& o) const { return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22}; }
    Mat2c operator*(const Mat2c& o) const;
    Mat2c operator*(cplx s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }
    Vec2c operator*(const Vec2c& v) const { return {m11 * v.c1 + m12 * v.c2, m21 * v.c1 + m22 * v.c2}; }
};

/// Value of the C-D symbol E(i xi) = -B - i xi A at one frequency.
struct SymbolMatrix {
    Mat2c entries;
    double xi = 0.0;
};

/// Eigenvalues of E(i xi).
///
/// lam1 is the parabolic branch (lam1(0) = 0), lam2 the relaxational one
/// (lam2(0) = -1/eps^2). radicand = 1 - 4 eps^2 (i a xi + lambda^2 xi^2) and
/// root is its principal square root.
struct EigenData {
    cplx lam1;
    cplx lam2;
    cplx radicand;
    cplx root;
};

SymbolMatrix symbol_E(double xi, const ModelParams& p);
EigenData eigenvalues_E(double xi, const ModelParams& p);

/// Below this |root| the closed form is replaced by its confluent limit.
inline constexpr double kDegenerateRoot = 1e-6;

/// Closed-form exp(E(i xi) t).
SymbolMatrix matexp_E(double xi, double t, const ModelParams& p);

/// phi_k(z) = sum_n z^n / (n+k)!; phi_0 = exp.
cplx phi(int k, cplx z);

/// Divided difference f[mu1, mu2] of phi_k, accurate for nearby nodes.
cplx phi_divided_difference(int k, cplx mu1, cplx mu2);

/// phi_k(M) for a 2x2 matrix whose eigenvalues are mu1, mu2.
Mat2c phi_matrix(int k, const Mat2c& m, cplx mu1, cplx mu2);

}  // namespace jinxin
