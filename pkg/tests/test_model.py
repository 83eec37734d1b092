"""Explicit constants, thresholds, and hypothesis checks."""

import math

import numpy as np
import pytest

import levylab as L
from levylab.errors import ThresholdError
from levylab.model import _kunita_parts


# -- c_p ---------------------------------------------------------------------

def test_cp_at_two():
    assert L.compute_cp(2.0) == 1.0


def test_cp_at_four():
    # [6 (4/3)^2]^2 = (32/3)^2
    assert L.compute_cp(4.0) == pytest.approx((32.0 / 3.0) ** 2, rel=1e-14)


def test_cp_continuous_at_two():
    assert abs(L.compute_cp(2.0 + 1e-9) - 1.0) < 1e-6


def test_cp_rejects_nonpositive():
    with pytest.raises(ValueError):
        L.compute_cp(0.0)


# -- d_p ---------------------------------------------------------------------

def test_dp_at_two_is_two_at_alpha_one():
    d, alpha = L.compute_dp(2.0)
    assert d == pytest.approx(2.0, abs=1e-12)
    assert alpha == pytest.approx(1.0)


def test_dp_denominator_is_one_at_p_two():
    # factor (p - 2) kills the alpha term for every alpha
    alpha = np.geomspace(1.0, 1e6, 100)
    _, _, denom = _kunita_parts(2.0, alpha)
    assert np.allclose(denom, 1.0)


def test_dp_p3_matches_finer_grid_bruteforce():
    d_coarse, _ = L.compute_dp(3.0, n_grid=4001)
    d_fine, _ = L.compute_dp(3.0, n_grid=40001)
    assert abs(d_coarse - d_fine) / d_fine < 0.01


@pytest.mark.parametrize("p", [2.5, 3.0, 4.0, 5.0, 6.0])
def test_dp_and_cp_continuous_in_p(p):
    # relative increments: the constants themselves grow to ~1e2-1e4 on (2, 6]
    dp = 1e-4
    d0, d1 = L.compute_dp(p)[0], L.compute_dp(p + dp)[0]
    assert abs(d1 - d0) / d0 < 1e-2
    c0, c1 = L.compute_cp(p), L.compute_cp(p + dp)
    assert abs(c1 - c0) / c0 < 1e-2


# -- theta -------------------------------------------------------------------

def test_theta_vanishes_without_lipschitz_constant():
    assert L.compute_theta(2.7, 1.0, 4.0, 0.0, 1.0) == 0.0


def test_theta_limit_from_above():
    # near p = 2 the factor matches (4 K^2 L^2/w^2)(1 + 10 w + 2b)
    for K, w, Lc, b in [(1.0, 4.0, 0.25, 1.0), (1.5, 2.0, 0.1, 0.3)]:
        want = L.theta_limit_from_above(K, w, Lc, b)
        got = L.compute_theta(2.0 + 1e-6, K, w, Lc, b)
        assert abs(got - want) / want < 1e-3


def test_theta_limit_hand_value():
    # K=1, w=4, L=1/4, b=1: (1/64)(1+40+2) = 43/64
    got = L.compute_theta(2.0 + 1e-6, 1.0, 4.0, 0.25, 1.0)
    assert got == pytest.approx(43.0 / 64.0, rel=1e-3)


def test_theta_two_exceeded_by_limit():
    t2 = L.theta_two(1.0, 4.0, 0.25, 1.0)
    assert t2 == pytest.approx(11.0 / 64.0)
    assert L.theta_limit_from_above(1.0, 4.0, 0.25, 1.0) > t2


def test_theta_monotone_in_lipschitz_and_jump_rate():
    rng = np.random.default_rng(10)
    for _ in range(20):
        K = rng.uniform(1.0, 2.0)
        w = rng.uniform(1.0, 8.0)
        Lc = rng.uniform(0.01, 0.3)
        b = rng.uniform(0.0, 2.0)
        p = rng.uniform(2.05, 3.0)
        base = L.compute_theta(p, K, w, Lc, b)
        assert L.compute_theta(p, K, w, Lc * 1.2, b) > base
        assert L.compute_theta(p, K, w, Lc, b + 0.5) > base


# -- radius ------------------------------------------------------------------

def test_radius_zero_forcing():
    assert L.compute_radius(1.0, 4.0, 0.25, 0.0, 1.0) == 0.0


def test_radius_hand_value():
    # 2 sqrt(11) / (4 - sqrt(11)/2)
    want = 2.0 * math.sqrt(11.0) / (4.0 - math.sqrt(11.0) / 2.0)
    assert L.compute_radius(1.0, 4.0, 0.25, 1.0, 1.0) == pytest.approx(want, rel=1e-14)


def test_radius_errors_at_threshold():
    thr = L.lip_threshold_existence(1.0, 4.0, 1.0)
    with pytest.raises(ThresholdError):
        L.compute_radius(1.0, 4.0, thr, 1.0, 1.0)


def test_radius_diverges_approaching_threshold():
    thr = L.lip_threshold_existence(1.0, 4.0, 1.0)
    assert L.compute_radius(1.0, 4.0, thr - 1e-8, 1.0, 1.0) > 1e6


# -- margins and gap constants -------------------------------------------------

def test_stability_margin_noise_free():
    assert L.stability_margin(1.0, 4.0, 0.0, 1.0) == 4.0


def test_stability_margin_hand_value():
    got = L.stability_margin(1.0, 4.0, 1.0 / 16.0, 1.0)
    assert got == pytest.approx(4.0 - 95.0 / 1024.0, rel=1e-14)


def test_margin_positive_iff_lmin_holds():
    for b in (0.0, 1.0, 10.0, 17.0, 17.2, 30.0):
        margin = L.stability_margin(1.0, 4.0, 0.25, b)
        slack = L.lip_threshold_stability(1.0, 4.0, b) - 0.25
        assert (margin > 0) == (slack > 0)


def test_compat_gap_bound_zero_shift():
    assert L.compat_gap_bound(1.0, 4.0, 0.25, 1.0, 0, 0, 0, 0) == 0.0


def test_compat_gap_bound_weights_at_zero_lipschitz():
    # c = 1; weights are (8K^2/w^2, 4K^2/w, 4K^2/w, 8K^2/w + 16K^2 b/w^2)
    K, w, b = 1.0, 2.0, 1.5
    got = L.compat_gap_bound(K, w, 0.0, b, 1.0, 1.0, 1.0, 1.0)
    want = 8 * K**2 / w**2 + 4 * K**2 / w + 4 * K**2 / w + (8 * K**2 / w + 16 * K**2 * b / w**2)
    assert got == pytest.approx(want, rel=1e-14)


def test_compat_c_hand_value():
    # K=1, w=4, L=1/4, b=1: c = 1 - (8/256)*... = 1 - (1/32)*11 = 21/32
    assert L.compat_c(1.0, 4.0, 0.25, 1.0) == pytest.approx(21.0 / 32.0, rel=1e-14)


def test_compat_gap_bound_requires_positive_c():
    with pytest.raises(ThresholdError):
        L.compat_gap_bound(1.0, 4.0, 1.0, 1.0, 1, 1, 1, 1)


# -- condition checks ----------------------------------------------------------

def test_example61_conditions_pass_at_b_one():
    rep = L.check_conditions(L.presets.example61_model(b=1.0), n_probe=100)
    assert rep.all_passed


def test_cond_L11_boundary_sweep():
    flags = []
    for b in (1.0, 7.4, 7.6):
        rep = L.check_conditions(L.presets.example61_model(b=b, A0=1.0), n_probe=0)
        flags.append(rep.cond_L11.passed)
    assert flags == [True, True, False]


def test_boundary_closed_forms():
    assert L.boundary_b_compact(1.0, 4.0, 0.25) == pytest.approx(7.5, abs=1e-12)
    assert L.boundary_b_stability(1.0, 4.0, 0.25) == pytest.approx(17.1, abs=1e-12)


def test_zero_lipschitz_slack_equals_threshold():
    m = L.presets.ou_jump_model(decay=4.0)   # L = 0, b = 1
    rep = L.check_conditions(m, n_probe=50)
    assert rep.cond_L11.slack == pytest.approx(
        L.lip_threshold_compact(1.0, 4.0, 1.0), rel=1e-12)
    assert rep.cond_lmin.slack == pytest.approx(
        L.lip_threshold_stability(1.0, 4.0, 1.0), rel=1e-12)
    assert rep.thm_existence.slack == pytest.approx(
        L.lip_threshold_existence(1.0, 4.0, 1.0), rel=1e-12)
    assert rep.all_passed


def test_report_booleans_match_slacks():
    for b in (1.0, 8.0):
        rep = L.check_conditions(L.presets.example61_model(b=b), n_probe=20)
        for name, cond in ((n, getattr(rep, n)) for n in
                           ("e1", "e2", "cond_L", "cond_L11", "cond_lmin",
                            "theta2_lt_1", "thetap_lt_1")):
            assert cond.passed == (cond.slack > 0), name


def test_effective_lipschitz_constants_of_the_scalar_example():
    m = L.presets.example61_model(b=1.0, small_rate=1.0)
    eff = m.effective_lipschitz()
    assert eff["drift"] == pytest.approx(0.25)
    assert eff["diffusion"] == pytest.approx(0.2)
    assert eff["small_jump"] == pytest.approx(0.2)    # (1/5) sqrt(small_rate)
    assert eff["large_jump"] == pytest.approx(0.25)   # (1/4) sqrt(b)


def test_theorem_constants_bundle():
    tc = L.theorem_constants(L.presets.example61_model())
    d = tc.to_dict()
    assert d["theta_2"] == pytest.approx(11.0 / 64.0)
    assert d["compat_c"] == pytest.approx(21.0 / 32.0)
    assert d["stability_margin"] == pytest.approx(2.515625)
    assert set(tc.formulas()) == set(d)
