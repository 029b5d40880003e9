#include "jinxin/symbol.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace jinxin {

namespace {

constexpr cplx kI(0.0, 1.0);

// Eight-point Gauss-Legendre rule mapped to [0, 1].
constexpr std::array<double, 8> kGaussNodes = {
    0.019855071751231912, 0.10166676129318664, 0.2372337950418355,  0.40828267875217511,
    0.59171732124782483,  0.7627662049581645,  0.89833323870681336, 0.98014492824876809};
constexpr std::array<double, 8> kGaussWeights = {
    0.050614268145188344, 0.11119051722668717, 0.15685332293894352, 0.18134189168918088,
    0.18134189168918088,  0.15685332293894352, 0.11119051722668717, 0.050614268145188344};

double inverse_factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return 1.0 / f;
}

// cosh(x) and sinh(x)/x, with short series near zero.
void cosh_sinhc(cplx x, cplx& c, cplx& sc) {
    if (std::abs(x) < 1e-3) {
        const cplx x2 = x * x;
        c = 1.0 + x2 / 2.0 + x2 * x2 / 24.0;
        sc = 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    } else {
        c = std::cosh(x);
        sc = std::sinh(x) / x;
    }
}

}  // namespace

Mat2c Mat2c::outer(const Vec2c& r, const Vec2c& l) {
    return {r.c1 * l.c1, r.c1 * l.c2, r.c2 * l.c1, r.c2 * l.c2};
}

double Mat2c::max_abs() const {
    return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

Mat2c Mat2c::operator*(const Mat2c& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22, m21 * o.m11 + m22 * o.m21,
            m21 * o.m12 + m22 * o.m22};
}

SymbolMatrix symbol_E(double xi, const ModelParams& p) {
    p.validate();
    const cplx z = kI * xi;
    const double s = p.reduced_speed();
    const cplx off = -z * s / p.epsilon;
    return {{-p.a * z, off, off, p.a * z - 1.0 / (p.epsilon * p.epsilon)}, xi};
}

EigenData eigenvalues_E(double xi, const ModelParams& p) {
    p.validate();
    const double e2 = p.epsilon * p.epsilon;
    const cplx q(p.lambda * p.lambda * xi * xi, p.a * xi);
    const cplx radicand = 1.0 - 4.0 * e2 * q;
    const cplx root = std::sqrt(radicand);
    // Rationalised root: no cancellation when eps^2 |q| is small.
    const cplx lam1 = -2.0 * q / (1.0 + root);
    const cplx lam2 = -1.0 / e2 - lam1;
    return {lam1, lam2, radicand, root};
}

SymbolMatrix matexp_E(double xi, double t, const ModelParams& p) {
    p.validate();
    if (t == 0.0) return {Mat2c::identity(), xi};
    const EigenData ed = eigenvalues_E(xi, p);
    const double e2 = p.epsilon * p.epsilon;

    if (std::abs(ed.root) < kDegenerateRoot) {
        // Confluent limit: E - mean*I is (nearly) nilpotent.
        const SymbolMatrix e = symbol_E(xi, p);
        const cplx mean = -0.5 / e2;
        const cplx half_gap = ed.root / (2.0 * e2);
        cplx c, sc;
        cosh_sinhc(half_gap * t, c, sc);
        const Mat2c shifted = e.entries - Mat2c::identity() * mean;
        const cplx scale = std::exp(mean * t);
        return {(Mat2c::identity() * c + shifted * (t * sc)) * scale, xi};
    }

    const cplx q(p.lambda * p.lambda * xi * xi, p.a * xi);
    const cplx iae2 = kI * (p.a * xi * e2);
    // box1 = -1 + root + 2 i a xi eps^2, with -1 + root rationalised.
    const cplx box1 = -4.0 * e2 * q / (1.0 + ed.root) + 2.0 * iae2;
    const cplx box2 = 1.0 + ed.root - 2.0 * iae2;
    const cplx exp1 = std::exp(ed.lam1 * t);
    const cplx exp2 = std::exp(ed.lam2 * t);
    const cplx two_root = 2.0 * ed.root;
    const cplx off = -kI * xi * p.epsilon * p.reduced_speed() * (exp1 - exp2) / ed.root;
    return {{(exp2 * box1 + exp1 * box2) / two_root, off, off, (exp1 * box1 + exp2 * box2) / two_root}, xi};
}

cplx phi(int k, cplx z) {
    if (k == 0) return std::exp(z);
    if (std::abs(z) < 1.0) {
        cplx sum = 0.0;
        cplx term = inverse_factorial(k);
        for (int n = 0; n < 40; ++n) {
            sum += term;
            term *= z / static_cast<double>(n + k + 1);
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum + term;
    }
    cplx value = std::exp(z);
    for (int j = 0; j < k; ++j) value = (value - inverse_factorial(j)) / z;
    return value;
}

cplx phi_divided_difference(int k, cplx mu1, cplx mu2) {
    const cplx gap = mu1 - mu2;
    if (std::abs(gap) > 0.5) return (phi(k, mu1) - phi(k, mu2)) / gap;
    // f[mu1, mu2] = int_0^1 f'(mu2 + s gap) ds, with phi_k' = phi_k - k phi_{k+1}.
    cplx sum = 0.0;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
        const cplx z = mu2 + kGaussNodes[i] * gap;
        const cplx derivative = k == 0 ? std::exp(z) : phi(k, z) - static_cast<double>(k) * phi(k + 1, z);
        sum += kGaussWeights[i] * derivative;
    }
    return sum;
}

Mat2c phi_matrix(int k, const Mat2c& m, cplx mu1, cplx mu2) {
    const cplx dd = phi_divided_difference(k, mu1, mu2);
    return Mat2c::identity() * phi(k, mu1) + (m - Mat2c::identity() * mu1) * dd;
}

}  // namespace jinxin
