"""Path metric, almost-period scanning, law metric, and the experiments."""

import numpy as np
import pytest

import levylab as L
from levylab.errors import HorizonError, InputError


# -- compact-open path metric -------------------------------------------------

def test_bebutov_identity():
    p = L.periodic_profile(1.0, 1.0)
    assert L.bebutov_distance(p, p) == 0.0


def test_bebutov_exact_period_shift():
    p = L.periodic_profile(1.0, 1.0)
    assert L.bebutov_distance(p, p.shifted(2 * np.pi)) < 1e-12


def test_bebutov_constants():
    # sup_k min(0.3, 1/k) = 0.3: the fixed point of the defining equation
    d = L.bebutov_distance(L.constant_profile(0.0), L.constant_profile(0.3))
    assert d == pytest.approx(0.3, abs=1e-10)


def test_bebutov_needs_horizon_for_tiny_distances():
    with pytest.raises(HorizonError):
        L.bebutov_distance(L.constant_profile(0.0), L.constant_profile(1e-3),
                           horizon=50.0)
    d = L.bebutov_distance(L.constant_profile(0.0), L.constant_profile(1e-3),
                           horizon=2000.0)
    assert d == pytest.approx(1e-3, abs=1e-9)


def test_bebutov_metric_axioms_on_random_profiles():
    rng = np.random.default_rng(0)
    for _ in range(25):
        profs = []
        for _ in range(3):
            amps = rng.uniform(0.1, 0.5, size=2)
            freqs = rng.uniform(0.5, 2.0, size=2)
            phases = rng.uniform(0, 2 * np.pi, size=2)
            profs.append(L.harmonic_profile(amps, freqs, phases))
        lip = max(p.lipschitz_t() for p in profs)
        grid_step = 0.01
        tol = 2 * grid_step * lip + 1e-9
        dab = L.bebutov_distance(profs[0], profs[1], grid_step=grid_step)
        dba = L.bebutov_distance(profs[1], profs[0], grid_step=grid_step)
        dbc = L.bebutov_distance(profs[1], profs[2], grid_step=grid_step)
        dac = L.bebutov_distance(profs[0], profs[2], grid_step=grid_step)
        assert dab == dba
        assert dac <= dab + dbc + tol


# -- almost periods -------------------------------------------------------------

def test_periodic_profile_accepts_exactly_grid_multiples():
    # tau grid commensurate with the period: accepted set = multiples of 2 pi
    p = L.periodic_profile(1.0, 1.0)
    rep = L.almost_periods(p, epsilon=0.1, scan_window=8 * np.pi,
                           tau_step=np.pi / 8, sup_horizon=20.0)
    want = [2 * np.pi * k for k in range(5)]
    assert np.allclose(rep.taus, want, atol=1e-12)
    assert all(d < 1e-10 for d in rep.distances)
    assert rep.max_gap == pytest.approx(2 * np.pi)
    assert rep.verdict


def test_quasi_periodic_sum_has_almost_periods():
    # sin t + sin(sqrt 2 t), eps = 0.1, window 200: nonempty with finite gap
    p = L.harmonic_profile((1.0, 1.0), (1.0, np.sqrt(2.0)))
    rep = L.almost_periods(p, epsilon=0.1, scan_window=200.0, tau_step=0.05,
                           sup_horizon=30.0)
    nontrivial = [t for t in rep.taus if t > 1.0]
    assert nontrivial, "expected genuine almost periods in the scan window"
    assert rep.max_gap < rep.scan_window
    assert rep.verdict


def test_acceptance_set_monotone_in_epsilon():
    p = L.harmonic_profile((0.5, 0.5), (1.0, np.sqrt(2.0)))
    r1 = L.almost_periods(p, 0.05, 100.0, 0.1, 20.0)
    r2 = L.almost_periods(p, 0.10, 100.0, 0.1, 20.0)
    assert set(r1.taus) <= set(r2.taus)


def test_ramp_has_no_nontrivial_almost_periods():
    ramp = L.clipped_ramp_profile(bound=50.0)
    rep = L.almost_periods(ramp, epsilon=0.04, scan_window=20.0, tau_step=0.05,
                           sup_horizon=10.0)
    assert max(rep.taus) <= 0.05
    assert not rep.verdict


def test_every_accepted_tau_is_below_epsilon():
    profs = [p for p, _ in L.presets.example61_model().coefficients.drift.terms]
    rep = L.almost_periods(profs, epsilon=0.05, scan_window=120.0,
                           tau_step=0.05, sup_horizon=25.0)
    assert all(d < 0.05 for d in rep.distances)


# -- bounded-Lipschitz metric ----------------------------------------------------

def test_bl_identical_laws():
    x = np.random.default_rng(0).normal(size=40)
    assert L.bl_distance(L.EmpiricalLaw(x), L.EmpiricalLaw(x)) == 0.0


@pytest.mark.parametrize("a", [0.25, 1.0, 2.0, 7.0])
def test_bl_point_masses_closed_form(a):
    # optimal ramp: f = +-a/(2+a) with slope 2/(2+a) gives 2a/(2+a)
    mu = L.EmpiricalLaw(np.array([0.0]))
    nu = L.EmpiricalLaw(np.array([a]))
    assert L.bl_distance(mu, nu) == pytest.approx(2 * a / (2 + a), abs=1e-8)


def test_bl_bounded_by_two():
    mu = L.EmpiricalLaw(np.array([-1e12]))
    nu = L.EmpiricalLaw(np.array([1e12]))
    assert L.bl_distance(mu, nu) <= 2.0 + 1e-12


def test_bl_metric_axioms_on_random_triples():
    rng = np.random.default_rng(42)
    for _ in range(100):
        laws = [L.EmpiricalLaw(rng.normal(loc=rng.uniform(-2, 2),
                                          scale=rng.uniform(0.5, 2.0), size=15))
                for _ in range(3)]
        dab = L.bl_distance(laws[0], laws[1])
        dbc = L.bl_distance(laws[1], laws[2])
        dac = L.bl_distance(laws[0], laws[2])
        assert abs(dab - L.bl_distance(laws[1], laws[0])) < 1e-10
        assert dac <= dab + dbc + 1e-8
        assert dab >= 0.0


def test_bl_converges_for_growing_samples():
    rng = np.random.default_rng(3)
    ref = L.EmpiricalLaw(rng.normal(size=40_000))
    ds = [L.bl_distance(L.EmpiricalLaw(rng.normal(size=n)), ref)
          for n in (100, 1000, 10_000)]
    assert ds[0] > ds[1] > ds[2]


def test_bl_multidimensional_max_aggregation():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(200, 2))
    b = a.copy()
    b[:, 1] += 1.0   # shift only the second coordinate
    d_joint = L.bl_distance(L.EmpiricalLaw(a), L.EmpiricalLaw(b))
    d_coord = L.bl_distance(L.EmpiricalLaw(a[:, 1]), L.EmpiricalLaw(b[:, 1]))
    assert d_joint == pytest.approx(d_coord, abs=1e-12)


def test_bl_rejects_empty_and_mismatched():
    with pytest.raises(InputError):
        L.EmpiricalLaw(np.zeros((0, 1)))
    with pytest.raises(InputError):
        L.bl_distance(L.EmpiricalLaw(np.zeros((3, 1))),
                      L.EmpiricalLaw(np.zeros((3, 2))))


# -- distributional experiments ---------------------------------------------------

def test_stationary_model_distribution_is_shift_invariant():
    m = L.presets.stationary_model()
    t_grid = np.linspace(0.0, 2.0, 3)
    rep = L.distributional_almost_period_test(m, 1.7, t_grid, n_paths=300,
                                              seed=2, n_boot=10, max_step=0.01)
    assert rep.passed


def test_periodic_model_distribution_periodic_and_power():
    m = L.presets.periodic_model()
    t_grid = np.linspace(0.0, 2 * np.pi, 4)
    rep = L.distributional_almost_period_test(m, 2 * np.pi, t_grid, n_paths=400,
                                              seed=3, n_boot=10, max_step=0.01)
    assert rep.passed
    rep_pi = L.distributional_almost_period_test(m, np.pi, t_grid, n_paths=400,
                                                 seed=3, n_boot=10, max_step=0.01)
    assert rep_pi.positive and not rep_pi.passed


def test_shift_coupling_zero_shift():
    m = L.presets.example61_model(forcing=1.0)
    res = L.shift_coupling_gap(m, 0.0, (0.0, 4.0), n_paths=64, seed=5,
                               tol=0.05, max_step=0.01, n_obs=9)
    assert res.measured_sup_gap == 0.0
    assert res.theoretical_bound == 0.0


def test_shift_coupling_exact_period_of_periodic_model():
    m = L.presets.periodic_model()
    res = L.shift_coupling_gap(m, 2 * np.pi, (0.0, 4.0), n_paths=128, seed=6,
                               tol=0.05, max_step=0.01, n_obs=9)
    # the coefficient shift is an exact identity: only discretization + MC noise
    assert res.theoretical_bound < 1e-20
    assert res.measured_sup_gap < 1e-4


def test_shift_coupling_gap_below_bound_at_almost_period():
    profs = [p for p, _ in L.presets.example61_model().coefficients.drift.terms]
    scan = L.almost_periods(profs, 0.05, 200.0, 0.05, 30.0)
    tau = max(scan.taus)
    m = L.presets.example61_model(b=1.0, forcing=1.0)
    res = L.shift_coupling_gap(m, tau, (0.0, 6.0), n_paths=200, seed=7,
                               tol=0.05, max_step=0.01, n_obs=13)
    assert res.measured_sup_gap <= res.theoretical_bound + 3.0 * res.se_at_sup
    assert res.measured_sup_gap > 0.0


def test_bl_two_sample_deterministic():
    rng = np.random.default_rng(9)
    a, b = rng.normal(size=300), rng.normal(loc=0.3, size=300)
    r1 = L.bl_two_sample(a, b, n_boot=8, seed=5)
    r2 = L.bl_two_sample(a, b, n_boot=8, seed=5)
    assert r1 == r2


def test_distributional_test_on_multimode_model():
    # smoke: coordinate-wise max aggregation over the first modes of the
    # spectral model; finite outputs and a sane scale
    m = L.presets.example62_model(n_modes=4, b=0.5)
    rep = L.distributional_almost_period_test(m, 0.5, np.array([0.0, 0.5]),
                                              n_paths=150, seed=1, n_boot=6,
                                              max_step=0.01)
    assert np.all(np.isfinite(rep.beta)) and np.all(rep.err > 0)
    assert rep.max_beta < 2.0
