"""Command-line entry point.

Subcommands: check | simulate | bounded | recurrence | stability |
example61 | example62.  Every run is driven by a JSON config (the two
example subcommands provide their own defaults and accept overrides in
the experiment section) and writes CSV data plus one canonical summary
JSON whose floats are formatted at 17 significant digits, so identical
configs produce byte-identical summaries.

Exit codes: 0 success, 2 config error, 3 threshold violation (including
a failed condition check), 4 numerical blowup.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import (ExperimentConfig, RunSection, canonical_json, load_config,
                     parse_config, _require)
from .errors import ConfigError, NumericalBlowupError, ThresholdError
from .model import check_conditions, theorem_constants
from .integrator import integrate
from .noise import sample_noise
from .presets import example61_model, example62_model
from .pullback import bounded_ensemble, bounded_solution, pullback_plan
from .recurrence import almost_periods, distributional_almost_period_test
from .stability import (fit_decay_rate, fit_rate_stderr, gap_experiment,
                        ultimate_bound_check)

_CONDITION_DEFS = {
    "e1": "growth: coefficient norms at the origin bounded by A0",
    "e1p": "growth in the p-th moment norms",
    "e2": "Lipschitz: effective constants bounded by L",
    "e2p": "Lipschitz in the p-th moment norms",
    "e3": "continuity in t uniformly on bounded state sets",
    "thm_existence": "L < w/(2K sqrt(1+2w+2b))",
    "cond_L": "L < min(w/(2K sqrt(2+4w+4b)), w/(2K sqrt(1+10w+2b)))",
    "cond_L11": "L < w/(2K sqrt(2+8w+4b))",
    "cond_lmin": "L < w/(K sqrt(5(1+4w+2b)))",
    "theta2_lt_1": "theta_2 < 1",
    "thetap_lt_1": "theta_p < 1",
}


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    print(f"wrote {path}")
    return path


def _check_payload(model) -> tuple[dict, bool]:
    report = check_conditions(model)
    tc = theorem_constants(model)
    payload = {"conditions": report.to_dict(), "constants": tc.to_dict(),
               "definitions": {**tc.formulas(), **_CONDITION_DEFS}}
    return payload, report.all_passed


def run_check(cfg: ExperimentConfig, threads: int = 1) -> int:
    _require(cfg.experiment, "experiment", {"kind"}, {"require"})
    payload, ok = _check_payload(cfg.model)
    wanted = cfg.experiment.get("require")
    if wanted is not None:
        ok = all(payload["conditions"][name] for name in wanted)
    _write(cfg.out_dir, "check_summary.json", canonical_json(payload))
    return 0 if ok else 3


def run_simulate(cfg: ExperimentConfig, threads: int = 1) -> int:
    _require(cfg.experiment, "experiment", {"kind", "y0"}, set())
    t0, t1 = cfg.run.window
    model = cfg.model
    noise = sample_noise(model.wiener, model.jumps, (t0, t1), cfg.run.seed)
    y0 = np.broadcast_to(np.asarray(cfg.experiment["y0"], dtype=float),
                         (model.dim,))
    path = integrate(model, noise, t0, t1, y0, cfg.run.step)
    if "csv" in cfg.formats:
        os.makedirs(cfg.out_dir, exist_ok=True)
        path.to_csv(os.path.join(cfg.out_dir, "path.csv"))
        print(f"wrote {os.path.join(cfg.out_dir, 'path.csv')}")
    summary = {"window": list(cfg.run.window), "step": cfg.run.step,
               "seed": cfg.run.seed, "n_grid": int(path.times.size),
               "n_small_jumps": int(np.sum(path.jump_flags == 1)),
               "n_large_jumps": int(np.sum(path.jump_flags == 2)),
               "terminal_state": [float(v) for v in path.values[-1]]}
    _write(cfg.out_dir, "simulate_summary.json", canonical_json(summary))
    return 0


def run_bounded(cfg: ExperimentConfig, threads: int = 1) -> int:
    _require(cfg.experiment, "experiment", {"kind"}, {"n_obs"})
    model, run = cfg.model, cfg.run
    plan = pullback_plan(model, run.tolerance)
    path = bounded_solution(model, run.window, run.tolerance, run.seed, run.step)
    if "csv" in cfg.formats:
        os.makedirs(cfg.out_dir, exist_ok=True)
        path.to_csv(os.path.join(cfg.out_dir, "bounded_path.csv"))
        print(f"wrote {os.path.join(cfg.out_dir, 'bounded_path.csv')}")
    n_obs = int(cfg.experiment.get("n_obs", 21))
    obs = np.linspace(run.window[0], run.window[1], n_obs)
    res = bounded_ensemble(model, run.window, run.tolerance, run.n_paths,
                           run.seed, obs, run.step, threads=threads)
    msq, se = res.mean_sq_norm()
    if "csv" in cfg.formats:
        with open(os.path.join(cfg.out_dir, "bounded_moment.csv"), "w") as fh:
            fh.write("t,second_moment,se\n")
            for t, m, s in zip(res.times, msq, se):
                fh.write(f"{float(t)!r},{float(m)!r},{float(s)!r}\n")
        print(f"wrote {os.path.join(cfg.out_dir, 'bounded_moment.csv')}")
    summary = {"t_pull": plan.t_pull, "margin": plan.margin, "tol": plan.tol,
               "radius": plan.radius, "n_paths": run.n_paths,
               "max_second_moment": float(msq.max()),
               "radius_sq_plus_3se": float(plan.radius**2 + 3 * se[int(np.argmax(msq))]),
               "definitions": {"t_pull": "log(5 K^2 start_bound / tol^2) / margin",
                               "margin": "w - 5 (1/w + 4 + 2b/w) K^2 L^2",
                               "radius": "2 K A0 sqrt(1+2w+2b)/(w - 2 K L sqrt(1+2w+2b))"}}
    _write(cfg.out_dir, "bounded_summary.json", canonical_json(summary))
    return 0


def run_recurrence(cfg: ExperimentConfig, threads: int = 1) -> int:
    _require(cfg.experiment, "experiment", {"kind", "epsilon"},
             {"scan_window", "tau_step", "sup_horizon", "coefficient", "tau",
              "t_grid_n", "n_boot"})
    ex, run, model = cfg.experiment, cfg.run, cfg.model
    which = ex.get("coefficient", "drift")
    coef = getattr(model.coefficients, which, None)
    if coef is None:
        raise ConfigError(f"experiment.coefficient: unknown coefficient {which!r}")
    profiles = [p for p, _ in coef.terms]
    if not profiles:
        raise ConfigError(f"experiment.coefficient: {which} has no profiles to scan")
    report = almost_periods(profiles, float(ex["epsilon"]),
                            float(ex.get("scan_window", 200.0)),
                            float(ex.get("tau_step", 0.05)),
                            float(ex.get("sup_horizon", 30.0)))
    payload = {"scan": report.to_dict()}
    tau = ex.get("tau")
    if tau is None and len(report.taus) > 1:
        tau = max(report.taus)
    if tau:
        t_grid = np.linspace(run.window[0],
                             run.window[0] + min(4.0, run.window[1] - run.window[0]),
                             int(ex.get("t_grid_n", 5)))
        dist = distributional_almost_period_test(
            model, float(tau), t_grid, run.n_paths, run.seed, tol=run.tolerance,
            max_step=run.step, n_boot=int(ex.get("n_boot", 20)), threads=threads)
        if "csv" in cfg.formats:
            os.makedirs(cfg.out_dir, exist_ok=True)
            dist.to_csv(os.path.join(cfg.out_dir, "distributional.csv"))
            print(f"wrote {os.path.join(cfg.out_dir, 'distributional.csv')}")
        payload["distributional"] = {"tau": dist.tau, "max_beta": dist.max_beta,
                                     "passed": dist.passed, "positive": dist.positive}
    _write(cfg.out_dir, "recurrence_report.json", canonical_json(payload))
    return 0


def run_stability(cfg: ExperimentConfig, threads: int = 1) -> int:
    _require(cfg.experiment, "experiment", {"kind", "y0a", "y0b"},
             {"horizon", "ultimate_y0"})
    ex, run, model = cfg.experiment, cfg.run, cfg.model
    horizon = float(ex.get("horizon", run.window[1] - run.window[0]))
    curve = gap_experiment(model, float(ex["y0a"]), float(ex["y0b"]), horizon,
                           run.n_paths, run.seed, max_step=run.step,
                           threads=threads)
    if "csv" in cfg.formats:
        os.makedirs(cfg.out_dir, exist_ok=True)
        curve.to_csv(os.path.join(cfg.out_dir, "stability_gap.csv"))
        print(f"wrote {os.path.join(cfg.out_dir, 'stability_gap.csv')}")
    payload = {"gap0": float(curve.gap[0])}
    try:
        rate, r2 = fit_decay_rate(curve)
        payload.update(fitted_rate=rate, r_squared=r2,
                       rate_stderr=fit_rate_stderr(curve))
    except Exception as exc:  # insufficient points is a report, not a failure
        payload["fit_error"] = str(exc)
    ub = ultimate_bound_check(model, horizon, run.n_paths,
                              float(ex.get("ultimate_y0", ex["y0a"])),
                              run.seed, max_step=run.step, threads=threads)
    payload["ultimate_bound"] = ub.to_dict()
    from .model import stability_margin as _margin
    payload["margin"] = _margin(model.K, model.omega,
                                model.coefficients.lipschitz_L, model.b)
    payload["definitions"] = {"margin": "w - 5 (1/w + 4 + 2b/w) K^2 L^2",
                              "ultimate_bound": "limsup E|Y|^2 < r + 1"}
    _write(cfg.out_dir, "stability_summary.json", canonical_json(payload))
    return 0


def run_example61(cfg: ExperimentConfig, threads: int = 1) -> int:
    _require(cfg.experiment, "experiment", {"kind"},
             {"b", "small_rate", "forcing", "A0", "epsilon", "scan_window",
              "tau_step", "sup_horizon", "n_boot"})
    ex, run = cfg.experiment, cfg.run
    b = float(ex.get("b", 1.0))
    if b > 1.0:
        raise ConfigError("experiment.b: the worked example requires b <= 1 "
                          "for its moment conditions")
    model = example61_model(b=b, small_rate=float(ex.get("small_rate", 1.0)),
                            A0=float(ex.get("A0", 1.0)),
                            forcing=float(ex.get("forcing", 0.0)))
    payload, ok = _check_payload(model)
    if not ok:
        _write(cfg.out_dir, "example61_summary.json", canonical_json(payload))
        return 3

    plan = pullback_plan(model, run.tolerance)
    obs = np.linspace(run.window[0], run.window[1], 21)
    res = bounded_ensemble(model, run.window, run.tolerance, run.n_paths,
                           run.seed, obs, run.step, threads=threads)
    msq, se = res.mean_sq_norm()
    payload["bounded"] = {"t_pull": plan.t_pull, "margin": plan.margin,
                          "radius": plan.radius,
                          "max_second_moment": float(msq.max()),
                          "within_ball": bool(np.all(msq <= plan.radius**2 + 3 * se))}

    scan = almost_periods([p for p, _ in model.coefficients.drift.terms],
                          float(ex.get("epsilon", 0.05)),
                          float(ex.get("scan_window", 200.0)),
                          float(ex.get("tau_step", 0.05)),
                          float(ex.get("sup_horizon", 30.0)))
    payload["almost_periods"] = scan.to_dict()
    tau = max(scan.taus) if len(scan.taus) > 1 else 2 * np.pi
    t_grid = np.linspace(run.window[0],
                         run.window[0] + min(4.0, run.window[1] - run.window[0]), 5)
    dist = distributional_almost_period_test(
        model, tau, t_grid, run.n_paths, run.seed, tol=run.tolerance,
        max_step=run.step, n_boot=int(ex.get("n_boot", 20)), threads=threads)
    payload["distributional"] = {"tau": dist.tau, "max_beta": dist.max_beta,
                                 "passed": dist.passed}

    curve = gap_experiment(model, 1.0, 3.0, min(10.0, run.window[1] - run.window[0]),
                           run.n_paths, run.seed, max_step=run.step,
                           threads=threads)
    bound_ok = bool(np.all(curve.gap <= 5.0 * curve.gap[0]
                           * np.exp(-plan.margin * curve.times) + 3.0 * curve.se))
    payload["stability"] = {"gap0": float(curve.gap[0]), "bound_satisfied": bound_ok}
    try:
        rate, r2 = fit_decay_rate(curve)
        payload["stability"].update(fitted_rate=rate, r_squared=r2)
    except Exception as exc:
        payload["stability"]["fit_error"] = str(exc)
    if "csv" in cfg.formats:
        os.makedirs(cfg.out_dir, exist_ok=True)
        curve.to_csv(os.path.join(cfg.out_dir, "example61_gap.csv"))
        dist.to_csv(os.path.join(cfg.out_dir, "example61_distributional.csv"))
        print(f"wrote {os.path.join(cfg.out_dir, 'example61_gap.csv')}")
        print(f"wrote {os.path.join(cfg.out_dir, 'example61_distributional.csv')}")
    _write(cfg.out_dir, "example61_summary.json", canonical_json(payload))
    return 0 if (payload["bounded"]["within_ball"] and bound_ok and dist.passed) else 3


def run_example62(cfg: ExperimentConfig, threads: int = 1) -> int:
    _require(cfg.experiment, "experiment", {"kind"},
             {"n_modes", "b", "small_rate", "q_base", "q_decay"})
    ex, run = cfg.experiment, cfg.run
    model = example62_model(n_modes=int(ex.get("n_modes", 8)),
                            b=float(ex.get("b", 0.5)),
                            small_rate=float(ex.get("small_rate", 1.0)),
                            q_base=float(ex.get("q_base", 0.09)),
                            q_decay=float(ex.get("q_decay", 2.0)))
    payload, ok = _check_payload(model)
    payload["spectrum"] = {"omega": model.omega,
                           "eigenvalues": [float(v) for v in model.semigroup.eigenvalues],
                           "lipschitz_gate": model.coefficients.lipschitz_L,
                           "gate_formula": "max(2/5, ||Q^(1/2)||, small_rate^(1/p)/3, "
                                           "large_rate^(1/p)/3)"}
    if not ok:
        _write(cfg.out_dir, "example62_summary.json", canonical_json(payload))
        return 3

    # zero-noise single-mode decay control
    from .presets import example62_model as _build
    m1 = _build(n_modes=1, b=0.0, small_rate=0.0, q_base=0.0, drift_scale=0.0)
    noise = sample_noise(m1.wiener, m1.jumps, (0.0, 0.5), run.seed)
    path = integrate(m1, noise, 0.0, 0.5, [1.0], run.step)
    exact = float(np.exp(-np.pi**2 * 0.5))
    payload["mode_decay"] = {"relative_error":
                             abs(float(path.values[-1, 0]) - exact) / exact}

    obs = np.linspace(run.window[0], run.window[1], 11)
    res = bounded_ensemble(model, run.window, run.tolerance, run.n_paths,
                           run.seed, obs, run.step, threads=threads)
    msq, se = res.mean_sq_norm()
    plan = pullback_plan(model, run.tolerance)
    payload["bounded"] = {"t_pull": plan.t_pull, "margin": plan.margin,
                          "radius": plan.radius,
                          "max_second_moment": float(msq.max()),
                          "within_ball": bool(np.all(msq <= plan.radius**2 + 3 * se))}
    _write(cfg.out_dir, "example62_summary.json", canonical_json(payload))
    return 0 if payload["bounded"]["within_ball"] else 3


_RUNNERS = {"check": run_check, "simulate": run_simulate, "bounded": run_bounded,
            "recurrence": run_recurrence, "stability": run_stability,
            "example61": run_example61, "example62": run_example62}

_EXAMPLE_DEFAULTS = {
    "example61": {"run": {"window": [0.0, 10.0], "step": 0.01, "n_paths": 300,
                          "seed": 1, "tolerance": 0.05},
                  "experiment": {"kind": "example61"}},
    "example62": {"run": {"window": [0.0, 2.0], "step": 0.005, "n_paths": 200,
                          "seed": 1, "tolerance": 0.05},
                  "experiment": {"kind": "example62"}},
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="levylab",
        description="Seeded experiments on jump diffusions with recurrent "
                    "coefficients: hypothesis checks, bounded-solution pullback, "
                    "recurrence metrics, stability bounds.")
    parser.add_argument("command", choices=sorted(_RUNNERS))
    parser.add_argument("--config", help="JSON experiment configuration")
    parser.add_argument("--seed", type=int, help="override run.seed")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for path ensembles")
    parser.add_argument("--out", help="override output.directory")
    args = parser.parse_args(argv)

    try:
        if args.config:
            cfg = load_config(args.config)
        elif args.command in _EXAMPLE_DEFAULTS:
            cfg = parse_config(dict(_EXAMPLE_DEFAULTS[args.command]))
        else:
            raise ConfigError(f"--config is required for '{args.command}'")
        if cfg.experiment.get("kind") != args.command:
            raise ConfigError(f"experiment.kind: config says "
                              f"{cfg.experiment.get('kind')!r}, command is "
                              f"{args.command!r}")
        if args.seed is not None:
            cfg = ExperimentConfig(model=cfg.model,
                                   run=RunSection(cfg.run.window, cfg.run.step,
                                                  cfg.run.n_paths, args.seed,
                                                  cfg.run.tolerance),
                                   experiment=cfg.experiment,
                                   out_dir=cfg.out_dir, formats=cfg.formats,
                                   raw=cfg.raw)
        if args.out:
            cfg = ExperimentConfig(model=cfg.model, run=cfg.run,
                                   experiment=cfg.experiment, out_dir=args.out,
                                   formats=cfg.formats, raw=cfg.raw)
        return _RUNNERS[args.command](cfg, threads=max(1, args.threads))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ThresholdError as exc:
        print(f"threshold violation: {exc}", file=sys.stderr)
        return 3
    except NumericalBlowupError as exc:
        print(f"numerical blowup: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
