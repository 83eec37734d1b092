"""Square-mean contraction: measured rate versus the explicit margin.

Two solutions driven by the same noise from different starts contract in
mean square at least at the explicit margin rate with prefactor 5.  The
experiment measures the empirical gap curve, fits its decay rate by
log-linear regression, and checks the ultimate second-moment bound
r + 1 from a start far outside the invariant ball.  The margin is a
guaranteed lower bound; the measured contraction is typically much
faster.
"""

import os

import numpy as np

import levylab as L

OUT = "demo_output"
os.makedirs(OUT, exist_ok=True)

model = L.presets.example61_model(b=1.0)
margin = L.stability_margin(1.0, 4.0, 0.25, 1.0)
print(f"explicit contraction margin: {margin:.6f}")

curve = L.gap_experiment(model, 1.0, 3.0, horizon=8.0, n_paths=500, seed=3,
                         max_step=0.005)
curve.to_csv(os.path.join(OUT, "contraction_gap.csv"))
bound = 5.0 * curve.gap[0] * np.exp(-margin * curve.times)
print(f"gap(0) = {curve.gap[0]:.3f}; curve below 5 gap(0) e^(-margin t) + 3 SE "
      f"at every time: {bool(np.all(curve.gap <= bound + 3 * curve.se))}")

rate, r2 = L.fit_decay_rate(curve)
se = L.fit_rate_stderr(curve)
print(f"fitted decay rate: {rate:.3f} +- {se:.3f} (r^2 = {r2:.5f}); "
      f"dominates the margin: {rate >= margin - 2 * se}")

print("\nmargin sensitivity to the jump rate:")
for b in (0.0, 0.5, 1.0):
    m = L.presets.example61_model(b=b)
    c = L.gap_experiment(m, 1.0, 3.0, horizon=5.0, n_paths=400,
                         seed=int(10 * b) + 1, max_step=0.005)
    r, _ = L.fit_decay_rate(c)
    print(f"  b = {b}: margin {L.stability_margin(1, 4, 0.25, b):.4f}, "
          f"fitted {r:.3f}")

print("\nultimate bound from a far start (global basin):")
for y0 in (10.0, 40.0):
    rep = L.ultimate_bound_check(model, horizon=4.0, n_paths=400, y0=y0,
                                 seed=9, max_step=0.005)
    print(f"  y0 = {y0}: tail E|Y|^2 = {rep.tail_second_moment:.2e} "
          f"< r + 1 = {rep.r_plus_1:.3f}: {rep.passed}")
