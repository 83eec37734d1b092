"""Noise synthesis: Wiener increments, jump point sets, compensator."""

import numpy as np
import pytest

import levylab as L
from levylab.errors import InputError

WIENER1 = L.WienerSpec(mode_variances=(1.0,))


def _jump_spec(small_rate=1.0, large_rate=1.0):
    return L.JumpMeasureSpec(
        small_rate=small_rate,
        small_sampler=L.uniform_shell_marks(0.1, 1.0, signed=True) if small_rate else None,
        truncation_delta=0.1,
        large_rate=large_rate,
        large_sampler=L.uniform_shell_marks(1.0, 2.0) if large_rate else None)


# -- Wiener part -----------------------------------------------------------

def test_zero_length_interval_gives_zero_increment():
    grid = np.array([0.0, 0.5, 0.5, 1.0])
    incr = L.sample_wiener_increments(WIENER1, grid, seed=1)
    assert incr[1, 0] == 0.0


def test_degenerate_covariance_gives_zero_increments():
    spec = L.WienerSpec(mode_variances=(0.0, 0.0))
    incr = L.sample_wiener_increments(spec, np.linspace(0, 1, 50), seed=2)
    assert np.all(incr == 0.0)


def test_increment_variance_matches_covariance_eigenvalue():
    # q = 1, dt = 0.5: sample variance of 1e5 draws within 5 SE of 0.5
    n = 100_000
    grid = np.arange(n + 1) * 0.5
    incr = L.sample_wiener_increments(WIENER1, grid, seed=3)[:, 0]
    var = incr.var(ddof=1)
    se = 0.5 * np.sqrt(2.0 / (n - 1))  # SE of a Gaussian sample variance
    assert abs(var - 0.5) < 5 * se


def test_nonmonotone_grid_rejected():
    with pytest.raises(InputError):
        L.sample_wiener_increments(WIENER1, np.array([0.0, 1.0, 0.5]), seed=0)


def test_stationarity_of_increments():
    # law over [s, s+dt] does not depend on s: compare moments at two offsets
    n = 60_000
    g1 = 5.0 + np.arange(n + 1) * 0.2
    g2 = -40.0 + np.arange(n + 1) * 0.2
    v1 = L.sample_wiener_increments(WIENER1, g1, seed=4)[:, 0]
    v2 = L.sample_wiener_increments(WIENER1, g2, seed=5)[:, 0]
    se = 0.2 * np.sqrt(2.0 / n)
    assert abs(v1.var() - v2.var()) < 5 * np.sqrt(2) * se
    assert abs(v1.mean() - v2.mean()) < 5 * np.sqrt(2) * np.sqrt(0.2 / n)


# -- jumps ------------------------------------------------------------------

def test_zero_rate_gives_empty_jump_list():
    spec = _jump_spec(small_rate=1.0, large_rate=0.0)
    st, sm, lt, lm = L.sample_jumps(spec, (0.0, 10.0), seed=1)
    assert lt.size == 0 and lm.size == 0


def test_poisson_mean_count():
    # b = 1, |window| = 10, 1e4 realizations: mean count within 5 SE of 10
    spec = _jump_spec(small_rate=0.0, large_rate=1.0)
    counts = [L.sample_jumps(spec, (0.0, 10.0), seed=s)[2].size for s in range(10_000)]
    counts = np.asarray(counts, dtype=float)
    se = np.sqrt(10.0 / counts.size)
    assert abs(counts.mean() - 10.0) < 5 * se


def test_small_marks_respect_truncation_shell():
    spec = _jump_spec()
    _, sm, _, lm = L.sample_jumps(spec, (0.0, 200.0), seed=7)
    assert np.all((np.abs(sm) >= 0.1) & (np.abs(sm) < 1.0))
    assert np.all(np.abs(lm) >= 1.0)


def test_jump_times_inside_window_and_sorted():
    spec = _jump_spec()
    noise = L.sample_noise(WIENER1, spec, (-30.0, 30.0), seed=9)
    for times in (noise.small_times, noise.large_times):
        assert np.all(np.diff(times) > 0)
        assert np.all((times > -30.0) & (times < 30.0))
    # the mirror stream populates the negative side too
    assert np.any(noise.small_times < 0) and np.any(noise.small_times > 0)


def test_realization_bit_reproducible():
    spec = _jump_spec()
    a = L.sample_noise(WIENER1, spec, (-5.0, 5.0), seed=123)
    b = L.sample_noise(WIENER1, spec, (-5.0, 5.0), seed=123)
    assert np.array_equal(a.small_times, b.small_times)
    assert np.array_equal(a.small_marks, b.small_marks)
    assert np.array_equal(a.large_times, b.large_times)
    assert np.array_equal(a.large_marks, b.large_marks)
    grid = np.linspace(-5, 5, 333)
    assert np.array_equal(a.wiener_increments(grid), b.wiener_increments(grid))


def test_distinct_path_indices_are_uncorrelated():
    # increment sums across realizations seeded from one master
    n = 4000
    sums = np.empty((n, 2))
    for p in range(n):
        seed = np.random.SeedSequence(entropy=99, spawn_key=(p,))
        incr = L.sample_wiener_increments(WIENER1, np.linspace(0, 1, 9), seed)
        sums[p, 0] = incr[:4].sum()
        sums[p, 1] = incr[4:].sum()
    corr = np.corrcoef(sums[:-1, 0], sums[1:, 0])[0, 1]
    assert abs(corr) < 5.0 / np.sqrt(n)
    # within one realization, disjoint intervals are independent too
    corr2 = np.corrcoef(sums[:, 0], sums[:, 1])[0, 1]
    assert abs(corr2) < 5.0 / np.sqrt(n)


# -- mark samplers ----------------------------------------------------------

def test_sampler_moments_match_samples():
    rng = np.random.default_rng(0)
    for sampler in (L.uniform_shell_marks(0.1, 1.0, signed=True),
                    L.uniform_shell_marks(1.0, 2.0),
                    L.exp_tail_marks(0.5, cut=1.0),
                    L.finite_rank_marks([[1.0, 0.0], [0.0, 2.0]], [0.3, 0.7])):
        x = sampler.sample(rng, 200_000)
        norms = np.abs(x) if x.ndim == 1 else np.linalg.norm(x, axis=1)
        m2 = sampler.abs_moment(2)
        se = norms.var(ddof=1) / np.sqrt(x.shape[0])  # loose scale
        assert abs((norms**2).mean() - m2) < 5 * np.sqrt((norms**4).mean() / x.shape[0]) + 1e-12


def test_exp_tail_moments_vs_quadrature_closed_forms():
    s = L.exp_tail_marks(0.5, cut=1.0)
    # E(1+E)^1 = 1 + scale;  E(1+E)^2 = 1 + 2 scale + 2 scale^2
    assert s.abs_moment(1) == pytest.approx(1.5, abs=1e-10)
    assert s.abs_moment(2) == pytest.approx(1 + 1 + 0.5, abs=1e-10)


def test_point_mass_sampler():
    s = L.point_mass_marks(1.5)
    x = s.sample(np.random.default_rng(1), 5)
    assert np.all(x == 1.5)
    assert s.mean() == 1.5 and s.abs_moment(3) == 1.5**3


# -- compensator -----------------------------------------------------------

def test_compensator_zero_when_no_small_activity():
    spec = _jump_spec(small_rate=0.0)
    out = L.small_jump_compensator(spec, lambda t, y, x: y, 0.0, np.array([2.0]))
    assert np.all(out == 0.0)


def test_compensator_collapses_for_mark_independent_coefficient():
    # F(t, y, x) = y/5 independent of the mark: drift is exactly -rate*y/5
    spec = _jump_spec(small_rate=1.3)
    y = np.array([2.0])
    out = L.small_jump_compensator(spec, lambda t, y_, x: y_ / 5.0, 0.0, y)
    assert out[0] == pytest.approx(-1.3 * 2.0 / 5.0, abs=1e-14)


def test_compensator_quadrature_matches_uniform_mean():
    # F = x with marks uniform on [delta, 1): E = (1 + delta)/2
    delta = 0.1
    spec = L.JumpMeasureSpec(small_rate=2.0,
                             small_sampler=L.uniform_shell_marks(delta, 1.0),
                             truncation_delta=delta)
    out = L.small_jump_compensator(spec, lambda t, y, x: np.array([x]), 0.0,
                                   np.array([0.0]))
    assert out[0] == pytest.approx(-2.0 * (1 + delta) / 2.0, abs=1e-10)


def test_model_compensator_matches_generic_quadrature():
    m = L.presets.example61_model()
    y = np.array([1.7])
    got = m.compensator_drift(0.3, y)
    want = L.small_jump_compensator(
        m.jumps, lambda t, y_, x: m.small_jump_value(t, y_, x), 0.3, y)
    assert np.allclose(got, want, atol=1e-12)


def test_invalid_specs_rejected():
    with pytest.raises(InputError):
        L.JumpMeasureSpec(small_rate=1.0,
                          small_sampler=L.uniform_shell_marks(0.0, 0.5),
                          truncation_delta=0.1)   # support below delta
    with pytest.raises(InputError):
        L.JumpMeasureSpec(large_rate=1.0,
                          large_sampler=L.uniform_shell_marks(0.5, 1.5))  # below 1
    with pytest.raises(InputError):
        L.WienerSpec(mode_variances=(-1.0,))


def test_noise_csv_dump(tmp_path):
    spec = _jump_spec()
    noise = L.sample_noise(WIENER1, spec, (0.0, 20.0), seed=2)
    out = tmp_path / "noise.csv"
    noise.to_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "time,kind,mark"
    assert len(lines) == 1 + noise.small_times.size + noise.large_times.size
    times = [float(l.split(",")[0]) for l in lines[1:]]
    assert times == sorted(times)


def test_stored_moments_match_sampler_moments():
    spec = _jump_spec()
    assert spec.mark_moment_2_small == spec.small_sampler.abs_moment(2)
    assert spec.mark_moment_2_large == spec.large_sampler.abs_moment(2)
    assert spec.mark_moment_p_large == spec.large_sampler.abs_moment(spec.moment_p)
    # uniform on [1, 2): second moment (1 + 2 + 4)/3
    assert spec.mark_moment_2_large == pytest.approx(7.0 / 3.0)
