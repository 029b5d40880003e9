#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "jinxin/symbol.hpp"
#include "oracles.hpp"

using namespace jinxin;

namespace {

const double kXis[] = {0.0, 1e-3, 0.1, 1.0, 10.0, 1e3};
const double kTimes[] = {0.01, 1.0, 10.0};
const double kEps[] = {1.0, 0.5, 0.1, 0.02};
const double kA[] = {0.0, 0.5};

ModelParams params(double eps, double a) {
    ModelParams p;
    p.epsilon = eps;
    p.a = a;
    p.lambda = 1.0;
    return p;
}

std::pair<cplx, cplx> eigen_oracle(const Mat2c& m) {
    Eigen::Matrix2cd e;
    e << m.m11, m.m12, m.m21, m.m22;
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(e, false);
    cplx a = solver.eigenvalues()[0], b = solver.eigenvalues()[1];
    // lam1 is the branch with the larger real part.
    if (a.real() < b.real()) std::swap(a, b);
    return {a, b};
}

}  // namespace

TEST_CASE("symbol entries") {
    const ModelParams p = params(0.1, 0.5);
    const Mat2c e = symbol_E(2.0, p).entries;
    const double s = p.reduced_speed();
    CHECK(std::abs(e.m11 - cplx(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(e.m12 - cplx(0.0, -2.0 * s / 0.1)) < 1e-12);
    CHECK(e.m12 == e.m21);
    CHECK(std::abs(e.m22 - cplx(-100.0, 1.0)) < 1e-12);
    const Mat2c e0 = symbol_E(0.0, p).entries;
    CHECK(e0.m11 == cplx(0.0));
    CHECK(e0.m12 == cplx(0.0));
    CHECK(std::abs(e0.m22 - cplx(-100.0)) < 1e-12);
}

TEST_CASE("eigenvalues agree with a general eigensolver") {
    for (double eps : kEps)
        for (double a : kA)
            for (double xi : {0.0, 1e-3, 0.1, 1.0, 10.0, 1e3, 1e4}) {
                const ModelParams p = params(eps, a);
                const EigenData ed = eigenvalues_E(xi, p);
                const auto [o1, o2] = eigen_oracle(symbol_E(xi, p).entries);
                const double scale = std::max(std::abs(o1), std::abs(o2));
                CAPTURE(eps);
                CAPTURE(a);
                CAPTURE(xi);
                CHECK(std::abs(ed.lam1 + ed.lam2 - (o1 + o2)) <= 1e-12 * scale);
                // Both orderings are valid when the pair is complex conjugate-like.
                const double d = std::min(std::abs(ed.lam1 - o1) + std::abs(ed.lam2 - o2),
                                          std::abs(ed.lam1 - o2) + std::abs(ed.lam2 - o1));
                CHECK(d <= 1e-9 * scale);
            }
}

TEST_CASE("eigenvalue product is det E = (lambda^2 xi^2 + i a xi) / eps^2") {
    const ModelParams p = params(0.1, 0.5);
    for (double xi : {0.3, 1.0, 7.0}) {
        const EigenData ed = eigenvalues_E(xi, p);
        const cplx q(xi * xi, 0.5 * xi);
        CHECK(std::abs(ed.lam1 * ed.lam2 - q / 0.01) < 1e-10 * std::abs(q / 0.01));
        CHECK(std::abs(ed.lam1 * ed.lam2 - symbol_E(xi, p).entries.det()) < 1e-9 * std::abs(q / 0.01));
    }
}

TEST_CASE("parabolic branch expands as -i a xi - lambda^2 xi^2 near zero") {
    const ModelParams p = params(0.1, 0.5);
    const double xi = 1e-3;
    const EigenData ed = eigenvalues_E(xi, p);
    const cplx leading(-xi * xi, -0.5 * xi);
    // next term is O(eps^2 a^2 xi^2)
    CHECK(std::abs(ed.lam1 - leading) < 4.0 * 0.01 * xi * xi);
    CHECK(std::abs(ed.lam1 - leading) > 0.0);
    CHECK(std::abs(ed.lam2 - (-100.0 - ed.lam1)) < 1e-12);
}

TEST_CASE("real parts are non-positive on the sweep") {
    for (double eps : kEps)
        for (double a : kA)
            for (double xi : {0.0, 1e-3, 0.1, 1.0, 10.0, 1e3, 1e4}) {
                const EigenData ed = eigenvalues_E(xi, params(eps, a));
                CHECK(ed.lam1.real() <= 0.0);
                CHECK(ed.lam2.real() <= 0.0);
                if (xi > 0.0) CHECK(ed.lam1.real() < 0.0);
            }
}

TEST_CASE("matexp_E matches the long-double Taylor oracle on the sweep") {
    double worst = 0.0;
    for (double eps : kEps)
        for (double a : kA)
            for (double xi : kXis)
                for (double t : kTimes) {
                    const ModelParams p = params(eps, a);
                    const double err = oracle::relative_error(matexp_E(xi, t, p).entries, oracle::expm_symbol(xi, t, p));
                    CAPTURE(eps);
                    CAPTURE(a);
                    CAPTURE(xi);
                    CAPTURE(t);
                    CHECK(err <= 1e-9);
                    worst = std::max(worst, err);
                }
    MESSAGE("worst relative error " << worst);
}

TEST_CASE("matexp_E across the confluent point") {
    // a = 0, eps = 1/2, lambda = 1: the radicand 1 - 4 eps^2 xi^2 vanishes at xi = 1.
    const ModelParams p = params(0.5, 0.0);
    for (double xi : {1.0, 1.0 - 1e-13, 1.0 + 1e-13, 1.0 - 1e-9, 1.0 + 1e-9, 1.0 - 1e-6, 1.0 + 1e-6, 1.0 + 1e-4}) {
        CAPTURE(xi);
        for (double t : {0.01, 1.0, 10.0})
            CHECK(oracle::relative_error(matexp_E(xi, t, p).entries, oracle::expm_symbol(xi, t, p)) <= 1e-9);
    }
}

TEST_CASE("matexp_E basic identities") {
    const ModelParams p = params(0.1, 0.5);
    const Mat2c id = matexp_E(3.0, 0.0, p).entries;
    CHECK((id - Mat2c::identity()).max_abs() == 0.0);
    const Mat2c zero_mode = matexp_E(0.0, 2.0, p).entries;
    CHECK(std::abs(zero_mode.m11 - 1.0) < 1e-15);
    CHECK(std::abs(zero_mode.m22 - std::exp(-200.0)) < 1e-100);
    CHECK(std::abs(zero_mode.m12) == 0.0);
    for (double xi : {0.01, 0.5, 3.0}) {
        const Mat2c ab = matexp_E(xi, 0.7, p).entries * matexp_E(xi, 1.9, p).entries;
        CHECK(oracle::relative_error(ab, matexp_E(xi, 2.6, p).entries) < 1e-12);
    }
}

TEST_CASE("scalar phi functions") {
    for (cplx z : {cplx(1e-8), cplx(0.3, -0.2), cplx(0.99), cplx(1.01), cplx(-5.0, 3.0), cplx(-200.0), cplx(0.0, 40.0)}) {
        CAPTURE(z);
        const oracle::cld zl(z.real(), z.imag());
        // phi_1 and phi_2 of a 1x1 matrix via the augmented exponential.
        const oracle::MatN a1 = {{zl, 1.0L}, {0.0L, 0.0L}};
        const oracle::MatN a2 = {{zl, 1.0L, 0.0L}, {0.0L, 0.0L, 1.0L}, {0.0L, 0.0L, 0.0L}};
        const auto e1 = oracle::expm(a1)[0][1];
        const auto e2 = oracle::expm(a2)[0][2];
        const cplx p1(static_cast<double>(e1.real()), static_cast<double>(e1.imag()));
        const cplx p2(static_cast<double>(e2.real()), static_cast<double>(e2.imag()));
        CHECK(std::abs(phi(1, z) - p1) <= 1e-13 * std::abs(p1));
        CHECK(std::abs(phi(2, z) - p2) <= 1e-13 * std::abs(p2));
        CHECK(std::abs(phi(0, z) - std::exp(z)) <= 1e-15 * std::abs(std::exp(z)));
    }
}

TEST_CASE("phi divided differences for near and far nodes") {
    for (auto [a, b] : {std::pair<cplx, cplx>{0.1, 0.1 + 1e-9}, {-3.0, -3.2}, {cplx(-1.0, 2.0), cplx(-1.1, 2.1)},
                        {-0.01, -100.0}}) {
        for (int k = 0; k <= 2; ++k) {
            const cplx dd = phi_divided_difference(k, a, b);
            // Oracle: phi_k(M) for M = [[a, 1], [0, b]] has off-diagonal f[a, b].
            const Mat2c m{a, 1.0, 0.0, b};
            if (k == 0) {
                const auto e = oracle::expm(oracle::from(m));
                const cplx ref(static_cast<double>(e[0][1].real()), static_cast<double>(e[0][1].imag()));
                CHECK(std::abs(dd - ref) <= 1e-12 * std::abs(ref));
            } else {
                // phi_k(M) e2 has first entry f[a, b] as well.
                const Vec2c ref = oracle::phi_times(k, m, {0.0, 1.0});
                CHECK(std::abs(dd - ref.c1) <= 1e-12 * std::abs(ref.c1));
            }
        }
    }
}

TEST_CASE("phi_matrix of the stepped symbol matches the augmented-exponential oracle") {
    for (double eps : {0.5, 0.1, 0.02})
        for (double xi : {0.0, 0.2, 1.0, 30.0})
            for (double h : {1e-3, 0.05}) {
                ModelParams p = params(eps, 0.5);
                const Mat2c m = symbol_E(xi, p).entries * h;
                const EigenData ed = eigenvalues_E(xi, p);
                for (int k = 1; k <= 2; ++k) {
                    const Mat2c got = phi_matrix(k, m, ed.lam1 * h, ed.lam2 * h);
                    for (Vec2c b : {Vec2c{1.0, 0.0}, Vec2c{0.0, 1.0}}) {
                        const Vec2c ref = oracle::phi_times(k, m, b);
                        const Vec2c g = got * b;
                        const double scale = std::max(std::abs(ref.c1), std::abs(ref.c2));
                        CAPTURE(eps);
                        CAPTURE(xi);
                        CAPTURE(h);
                        CAPTURE(k);
                        CHECK(std::abs(g.c1 - ref.c1) <= 1e-11 * scale);
                        CHECK(std::abs(g.c2 - ref.c2) <= 1e-11 * scale);
                    }
                }
            }
}
