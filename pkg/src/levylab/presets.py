"""Ready-made models: the two worked examples plus test benches.

``example61_model`` is the scalar jump-diffusion with the four recurrent
multiplicative coefficients (quasi-periodic drift factor, Levitan-type
diffusion factor, stationary small-jump factor, almost-automorphic-type
large-jump factor), decay rate 4, declared Lipschitz constant 1/4.  Its
coefficients all vanish at the origin, so the bounded solution is the
zero path; the optional ``forcing`` adds a quasi-periodic additive drift
(keeping the declared Lipschitz constant) to make pullback and coupling
experiments non-degenerate.

``example62_model`` is the spectral heat model built by
:func:`levylab.integrator.build_heat_model` with finite-rank jump marks.

The remaining builders are small benches used by oracle tests and the
distributional experiments.
"""

from __future__ import annotations

import numpy as np

from .galerkin import GalerkinSpec
from .integrator import build_heat_model
from .model import (CoefficientSet, SdeModel, SemigroupSpec, coefficient,
                    jump_coefficient, linear_map, ones_map)
from .noise import (JumpMeasureSpec, WienerSpec, finite_rank_marks,
                    uniform_shell_marks)
from .profiles import (constant_profile, harmonic_profile, periodic_profile,
                       trig_reciprocal_profile)


def example61_profiles() -> dict:
    """The four time profiles of the scalar example, keyed by coefficient."""
    return {
        # (1/8)(sin t + cos(sqrt(3) t)): quasi-periodic, frequencies 1, sqrt 3
        "drift": harmonic_profile(amps=(0.125, 0.125), freqs=(1.0, np.sqrt(3.0)),
                                  phases=(0.0, np.pi / 2.0),
                                  recurrence_class="quasi_periodic"),
        # (1/5) cos(1/(2 + sin t + sin(sqrt 2) t)): Levitan-type composite
        "diffusion": trig_reciprocal_profile(
            outer="cos", amp=0.2, offset=2.0, inner_amps=(1.0, 1.0),
            inner_freqs=(1.0, np.sqrt(2.0)), recurrence_class="levitan"),
        # 1/5: stationary
        "small_jump": constant_profile(0.2),
        # (1/4) sin(1/(3 + cos t + cos(pi t))): almost-automorphic-type
        "large_jump": trig_reciprocal_profile(
            outer="sin", amp=0.25, offset=3.0, inner_amps=(1.0, 1.0),
            inner_freqs=(1.0, np.pi), inner_phases=(np.pi / 2.0, np.pi / 2.0),
            recurrence_class="almost_automorphic"),
    }


def example61_model(b: float = 1.0, small_rate: float = 1.0, A0: float = 1.0,
                    moment_p: float = 2.05, forcing: float = 0.0,
                    truncation_delta: float = 0.1) -> SdeModel:
    """Scalar two-sided jump diffusion with recurrent coefficients.

    Valid threshold regime: ``small_rate < 25/16`` and ``b <= 1`` keep the
    declared Lipschitz constant 1/4; the compatibility and stability
    thresholds then read ``b < 15/2`` and ``b < 171/10``.
    """
    profs = example61_profiles()
    drift_terms = [(profs["drift"], linear_map(1.0))]
    if forcing != 0.0:
        drift_terms.append((harmonic_profile(
            amps=(forcing / 2.0, forcing / 2.0), freqs=(1.0, np.sqrt(3.0)),
            phases=(0.0, np.pi / 2.0), recurrence_class="quasi_periodic"),
            ones_map(1.0)))
    coeffs = CoefficientSet(
        drift=coefficient(*drift_terms),
        diffusion=coefficient((profs["diffusion"], linear_map(1.0))),
        small_jump=jump_coefficient((profs["small_jump"], linear_map(1.0)),
                                    mark_mode="ignore"),
        large_jump=jump_coefficient((profs["large_jump"], linear_map(1.0)),
                                    mark_mode="ignore"),
        A0=max(A0, abs(forcing)), lipschitz_L=0.25, moment_p=moment_p)
    jumps = JumpMeasureSpec(
        small_rate=small_rate,
        small_sampler=uniform_shell_marks(truncation_delta, 1.0, signed=True),
        truncation_delta=truncation_delta,
        large_rate=b,
        large_sampler=uniform_shell_marks(1.0, 2.0, signed=True),
        moment_p=moment_p)
    return SdeModel(semigroup=SemigroupSpec(eigenvalues=(4.0,), K=1.0, omega=4.0),
                    coefficients=coeffs, wiener=WienerSpec(mode_variances=(1.0,)),
                    jumps=jumps)


def example62_model(n_modes: int = 8, b: float = 0.5, small_rate: float = 1.0,
                    q_base: float = 0.09, q_decay: float = 2.0,
                    moment_p: float = 2.05, collocation_points: int = 0,
                    drift_scale: float = 0.2) -> SdeModel:
    """Spectral heat model with finite-rank jump marks.

    Small marks are sub-unit multiples of the first two modes; the large
    mark is the first mode at unit norm.  The declared Lipschitz constant
    is the max formula max(2/5, ||Q^(1/2)||, small_rate^(1/p)/3, b^(1/p)/3).
    """
    gal = GalerkinSpec(n_modes=n_modes, collocation_points=collocation_points)

    def mode_vec(k: int, scale: float) -> np.ndarray:
        v = np.zeros(n_modes)
        v[k] = scale
        return v

    small = finite_rank_marks([mode_vec(0, 0.5), mode_vec(min(1, n_modes - 1), 0.4)],
                              [0.5, 0.5])
    large = finite_rank_marks([mode_vec(0, 1.0)], [1.0])
    jumps = JumpMeasureSpec(small_rate=small_rate, small_sampler=small,
                            truncation_delta=0.1, large_rate=b,
                            large_sampler=large, moment_p=moment_p)
    return build_heat_model(gal, q_decay, jumps, q_base=q_base,
                            drift_scale=drift_scale, moment_p=moment_p)


def linear_decay_model(decay: float = 1.0, dim: int = 1) -> SdeModel:
    """Pure exponential decay; every coefficient is zero."""
    coeffs = CoefficientSet(drift=coefficient(), diffusion=coefficient(),
                            small_jump=jump_coefficient(), large_jump=jump_coefficient(),
                            A0=0.0, lipschitz_L=0.0)
    return SdeModel(semigroup=SemigroupSpec(eigenvalues=(decay,) * dim, K=1.0,
                                            omega=decay),
                    coefficients=coeffs,
                    wiener=WienerSpec(mode_variances=(0.0,) * dim),
                    jumps=JumpMeasureSpec())


def forced_linear_model(decay: float = 10.0, amp: float = 1.0) -> SdeModel:
    """Deterministic scalar dY = (-decay Y + amp sin t) dt; no noise.

    Its bounded solution is the explicit convolution
    amp (decay sin t - cos t) / (decay^2 + 1).
    """
    coeffs = CoefficientSet(
        drift=coefficient((periodic_profile(amp, 1.0), ones_map(1.0))),
        diffusion=coefficient(), small_jump=jump_coefficient(),
        large_jump=jump_coefficient(), A0=abs(amp), lipschitz_L=0.0)
    return SdeModel(semigroup=SemigroupSpec(eigenvalues=(decay,), K=1.0, omega=decay),
                    coefficients=coeffs, wiener=WienerSpec(mode_variances=(0.0,)),
                    jumps=JumpMeasureSpec())


def ou_jump_model(decay: float = 1.0, sigma: float = 1.0, jump_rate: float = 1.0,
                  mark_lo: float = 1.0, mark_hi: float = 2.0) -> SdeModel:
    """Scalar dY = -decay Y dt + sigma dW + dJ with compound-Poisson J.

    Large jumps arrive at ``jump_rate`` with marks uniform on
    [mark_lo, mark_hi) added directly to the state.
    """
    jumps = JumpMeasureSpec(large_rate=jump_rate,
                            large_sampler=uniform_shell_marks(mark_lo, mark_hi))
    a0 = max(sigma, float(np.sqrt(jump_rate * jumps.mark_moment_2_large)),
             (jump_rate * jumps.mark_moment("large", jumps.moment_p))
             ** (1.0 / jumps.moment_p))
    coeffs = CoefficientSet(
        drift=coefficient(),
        diffusion=coefficient((constant_profile(sigma), ones_map(1.0))),
        small_jump=jump_coefficient(),
        large_jump=jump_coefficient((constant_profile(1.0), ones_map(1.0)),
                                    mark_mode="scalar"),
        A0=a0, lipschitz_L=0.0)
    return SdeModel(semigroup=SemigroupSpec(eigenvalues=(decay,), K=1.0, omega=decay),
                    coefficients=coeffs, wiener=WienerSpec(mode_variances=(1.0,)),
                    jumps=jumps)


def periodic_model(b: float = 0.5, small_rate: float = 0.5,
                   moment_p: float = 2.05) -> SdeModel:
    """Scalar model whose four coefficients are all 2-pi-periodic in time.

    dY = (sin t - 0.1 Y) dt + 0.3 dW + 0.2 dJ_small(compensated)
         + 0.2 cos t dJ_large

    Asymmetric forcing makes the solution law genuinely time-dependent:
    the law at t equals the law at t + 2 pi but differs at t + pi.
    """
    jumps = JumpMeasureSpec(
        small_rate=small_rate,
        small_sampler=uniform_shell_marks(0.1, 1.0, signed=True),
        truncation_delta=0.1, large_rate=b,
        large_sampler=uniform_shell_marks(1.0, 2.0, signed=True),
        moment_p=moment_p)
    coeffs = CoefficientSet(
        drift=coefficient((periodic_profile(1.0, 1.0), ones_map(1.0)),
                          (constant_profile(-0.1), linear_map(1.0))),
        diffusion=coefficient((constant_profile(0.3), ones_map(1.0))),
        small_jump=jump_coefficient((constant_profile(0.2), ones_map(1.0)),
                                    mark_mode="scalar"),
        large_jump=jump_coefficient((periodic_profile(0.2, 1.0, np.pi / 2.0),
                                     ones_map(1.0)), mark_mode="scalar"),
        A0=1.0, lipschitz_L=0.1, moment_p=moment_p)
    return SdeModel(semigroup=SemigroupSpec(eigenvalues=(1.0,), K=1.0, omega=1.0),
                    coefficients=coeffs, wiener=WienerSpec(mode_variances=(1.0,)),
                    jumps=jumps)


def stationary_model(b: float = 0.5) -> SdeModel:
    """Time-constant coefficients: the bounded solution is stationary."""
    jumps = JumpMeasureSpec(large_rate=b,
                            large_sampler=uniform_shell_marks(1.0, 2.0, signed=True))
    coeffs = CoefficientSet(
        drift=coefficient((constant_profile(0.5), ones_map(1.0))),
        diffusion=coefficient((constant_profile(0.3), ones_map(1.0))),
        small_jump=jump_coefficient(),
        large_jump=jump_coefficient((constant_profile(0.2), ones_map(1.0)),
                                    mark_mode="scalar"),
        A0=1.0, lipschitz_L=0.0)
    return SdeModel(semigroup=SemigroupSpec(eigenvalues=(1.0,), K=1.0, omega=1.0),
                    coefficients=coeffs, wiener=WienerSpec(mode_variances=(1.0,)),
                    jumps=jumps)
