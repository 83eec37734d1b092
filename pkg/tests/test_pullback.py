"""Pullback horizon formula and bounded-solution approximation."""

import numpy as np
import pytest

import levylab as L
from levylab.errors import ThresholdError


def test_horizon_zero_when_already_converged():
    assert L.pullback_horizon(1.0, 1.0, 0.0, 1e-2) == 0.0


def test_horizon_hand_value():
    # K=1, rate=1, start=1, tol=1e-2: log(5e4)
    assert L.pullback_horizon(1.0, 1.0, 1.0, 1e-2) == pytest.approx(np.log(5e4), rel=1e-12)


def test_horizon_logarithm_law():
    t1 = L.pullback_horizon(1.0, 2.0, 1.0, 1e-2)
    t2 = L.pullback_horizon(1.0, 2.0, 1.0, 5e-3)
    assert t2 - t1 == pytest.approx(2.0 * np.log(2.0) / 2.0, rel=1e-12)


def test_horizon_requires_positive_rate():
    with pytest.raises(ThresholdError):
        L.pullback_horizon(1.0, -0.5, 1.0, 1e-2)


def _convolution_oracle(lam, t):
    """integral_{-inf}^t exp(-lam (t-s)) sin(s) ds = (lam sin t - cos t)/(lam^2+1).

    Verified below by differentiation before it is used as the oracle.
    """
    return (lam * np.sin(t) - np.cos(t)) / (lam**2 + 1.0)


def test_oracle_satisfies_the_ode():
    # independent verification: y' = -lam y + sin t, by central differences
    lam, h = 10.0, 1e-6
    t = np.linspace(0.3, 9.7, 37)
    lhs = (_convolution_oracle(lam, t + h) - _convolution_oracle(lam, t - h)) / (2 * h)
    rhs = -lam * _convolution_oracle(lam, t) + np.sin(t)
    assert np.allclose(lhs, rhs, atol=1e-7)


def test_bounded_solution_matches_convolution():
    lam = 10.0
    m = L.presets.forced_linear_model(decay=lam)
    path = L.bounded_solution(m, (0.0, 4 * np.pi), tol=1e-5, seed=1, max_step=1e-3)
    exact = _convolution_oracle(lam, path.times)
    assert np.max(np.abs(path.values[:, 0] - exact)) < 1e-4


def test_zero_coefficients_give_zero_path():
    m = L.presets.linear_decay_model(2.0)
    path = L.bounded_solution(m, (0.0, 3.0), tol=1e-6, seed=0, max_step=0.01)
    assert np.all(path.values == 0.0)


def test_pullback_start_independence():
    # same noise (shared t_pull, seed, step), far-past starts 0 vs r*ones:
    # the mean-square gap over the window is at most tol^2 by the
    # contraction estimate sized for the worse start, plus step slack
    m = L.presets.example61_model(forcing=1.0)
    tol = 0.02
    plan_far = L.pullback_plan(m, tol, start_state=[L.pullback_plan(m, tol).radius])
    obs = np.linspace(0.0, 2.0, 5)
    r0 = L.bounded_ensemble(m, (0.0, 2.0), tol, 200, 8, obs, max_step=0.005,
                            t_pull=plan_far.t_pull)
    r1 = L.bounded_ensemble(m, (0.0, 2.0), tol, 200, 8, obs, max_step=0.005,
                            start_state=[plan_far.radius], t_pull=plan_far.t_pull)
    msq_gap = np.max(np.mean((r0.states - r1.states) ** 2, axis=(1, 2)))
    assert msq_gap < tol**2 * (1.0 + 0.5)   # tol^2 + discretization slack


def test_bounded_solution_requires_stability_margin():
    # Lipschitz constant beyond the stability threshold: no pullback plan
    m = L.presets.example61_model(b=1.0)
    from dataclasses import replace
    bad = replace(m, coefficients=replace(m.coefficients, lipschitz_L=1.5))
    with pytest.raises(ThresholdError):
        L.pullback_plan(bad, 0.01)


def test_forgetting_curve_zero_for_equal_starts():
    m = L.presets.example61_model()
    curve = L.forgetting_check(m, (0.0, 2.0), 3, 1.0, 1.0, n_paths=32,
                               max_step=0.01)
    assert np.all(curve.gap == 0.0)


def test_forgetting_curve_below_contraction_bound():
    m = L.presets.example61_model(b=1.0)
    curve = L.forgetting_check(m, (0.0, 6.0), 5, 1.0, 3.0, n_paths=400,
                               max_step=0.005)
    margin = L.stability_margin(1.0, 4.0, 0.25, 1.0)
    bound = 5.0 * curve.gap[0] * np.exp(-margin * curve.times)
    assert np.all(curve.gap <= bound + 3.0 * curve.se)


def test_deterministic_forgetting_exact_rate():
    m = L.presets.linear_decay_model(1.0)
    curve = L.forgetting_check(m, (0.0, 4.0), 0, 2.0, 1.0, n_paths=8,
                               max_step=1e-3)
    want = curve.gap[0] * np.exp(-2.0 * curve.times)
    assert np.allclose(curve.gap, want, rtol=1e-6)


def test_ensemble_second_moment_stays_in_invariant_ball():
    m = L.presets.example61_model(b=1.0, forcing=1.0)
    plan = L.pullback_plan(m, 0.05)
    obs = np.linspace(0.0, 4.0, 9)
    res = L.bounded_ensemble(m, (0.0, 4.0), 0.05, 400, 7, obs, max_step=0.005)
    msq, se = res.mean_sq_norm()
    assert np.all(msq <= plan.radius**2 + 3.0 * se)
