import numpy as np
import pytest

import jinxin


def test_symbol_and_exponential():
    p = jinxin.ModelParams(epsilon=0.1, a=0.5)
    e = jinxin.symbol_E(1.0, p)
    assert e.shape == (2, 2)
    assert np.allclose(jinxin.matexp_E(1.0, 0.0, p), np.eye(2))
    lam1, lam2 = jinxin.eigenvalues_E(1.0, p)
    assert lam1.real < 0 and lam2.real < 0
    assert np.isclose(lam1 + lam2, np.trace(e))
    # semigroup property
    m = jinxin.matexp_E(2.0, 0.3, p) @ jinxin.matexp_E(2.0, 0.4, p)
    assert np.allclose(m, jinxin.matexp_E(2.0, 0.7, p), rtol=1e-12, atol=1e-14)


def test_kernel_split_sums_to_propagator():
    p = jinxin.ModelParams(epsilon=0.2, a=0.5)
    k = jinxin.kernel_split(1.0, 2.0, p)
    assert np.allclose(k["K"] + k["Khyp"] + k["R"], k["gamma"], atol=1e-14)


def test_linear_solver_matches_exact_propagator():
    g = jinxin.Grid(256, 100.0)
    p = jinxin.ModelParams(epsilon=0.1, a=0.5, h=jinxin.Nonlinearity.none())
    u, v = jinxin.well_prepared_data(jinxin.gaussian(g), p, g)
    w1, w2 = jinxin.uv_to_cd(u, v, p)
    traj = jinxin.nonlinear_jinxin_solve(w1, w2, p, g, dt=0.02, t_final=1.0)
    r1, r2 = jinxin.linear_propagate(w1, w2, 1.0, p, g)
    assert traj["first"].shape == (1, 256)
    assert np.max(np.abs(traj["first"][-1] - r1)) < 1e-12
    assert np.max(np.abs(traj["second"][-1] - r2)) < 1e-12


def test_nonlinear_solvers_agree_and_conserve_mass():
    g = jinxin.Grid(256, 100.0)
    p = jinxin.ModelParams(epsilon=0.1)
    u, v = jinxin.well_prepared_data(jinxin.gaussian(g), p, g)
    w1, w2 = jinxin.uv_to_cd(u, v, p)
    cd = jinxin.nonlinear_jinxin_solve(w1, w2, p, g, dt=0.005, t_final=1.0, record=[0.5, 1.0])
    assert np.allclose(cd["times"], [0.5, 1.0])
    assert abs(cd["first"][-1].sum() - w1.sum()) * g.dx < 1e-12
    s = p.lam / p.epsilon
    f1, f2 = 0.5 * (u + v / s), 0.5 * (u - v / s)
    kin = jinxin.bgk_solve(f1, f2, p, g, dt=0.005, t_final=1.0)
    density = kin["first"][-1] + kin["second"][-1]
    assert np.sqrt(np.sum((density - cd["first"][-1]) ** 2) * g.dx) < 1e-6
    par = jinxin.parabolic_solve(u, p, g, dt=0.005, t_final=1.0)
    assert par["representation"] == "parabolic"
    assert np.sqrt(np.sum((par["first"][-1] - cd["first"][-1]) ** 2) * g.dx) < 1e-2


def test_errors_are_python_exceptions():
    with pytest.raises(jinxin.ParameterError):
        jinxin.ModelParams(epsilon=-1.0)
    with pytest.raises(ValueError):
        jinxin.Grid(1000, 10.0)
    with pytest.raises(jinxin.ParameterError):
        jinxin.decay_study("[model]\nbogus = 1\n")


def test_decay_study_from_config():
    r = jinxin.decay_study(
        "[model]\nnonlinearity = none\n[grid]\nn = 2048\nlength = 800\n"
        "[data]\nkind = conservative-only\n[decay]\nt_hi = 300\nsamples = 8\n"
    )
    assert r["pass"], r["checks"]
    assert abs(r["fits"]["w1_l2"]["exponent"] + 0.25) < 0.05
    assert r["csv"].startswith("t,")
