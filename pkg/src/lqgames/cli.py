"""Command-line interface: regenerate every tabular artifact from one binary.

Subcommands
    nash     gains.csv, riccati.csv, diagnostics.txt, nominal_traj.csv
    moments  moments.csv, bounds.txt, table1.csv
    sweep    sweep.csv, sigma_trace.csv, deltax_samples.csv, nominal_traj.csv

All numeric CSV fields use shortest round-trip decimal formatting, so
reruns with identical configuration are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from .compensator import optimal_gains
from .config import RunConfig, default_config, default_moments_config, dump_config, load_config
from .deviation import Ar1Params
from .errors import ConfigError, InvalidParams, LqGamesError, SingularStageSystem, SweepCellError
from .game import check_assumptions, nominal_rollout, solve_feedback_nash
from .harness import run_ensemble, run_trial, sweep
from .moments import bound_certificate, propagate_moments, quadratic_scaling_table
from .rng import derive_seed

EXIT_OK = 0
EXIT_CONFIG_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SOLVER = 4
EXIT_IO = 5

# Seed-stream tag for the trace-cell ensemble, distinct from sweep cells
# (which derive from two-index tuples).
TRACE_STREAM = 0


def _fmt(v) -> str:
    """Shortest decimal that round-trips to the same binary value."""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _write_kv(path: str, pairs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in pairs:
            fh.write(f"{key}: {value}\n")


def _matrix_rows(stage: int, name: str, M: np.ndarray):
    for r in range(M.shape[0]):
        for c in range(M.shape[1]):
            yield (stage, name, r, c, M[r, c])


def _traj_rows(cfg: RunConfig, nash):
    traj = nominal_rollout(cfg.game, nash)
    for k, x in enumerate(traj.states):
        for i, v in enumerate(x):
            yield (k, f"x{i + 1}", v, cfg.trials, cfg.base_seed)
    for k in range(cfg.game.N):
        for i, v in enumerate(traj.u1[k]):
            yield (k, f"u1_{i + 1}", v, cfg.trials, cfg.base_seed)
        for i, v in enumerate(traj.u2[k]):
            yield (k, f"u2_{i + 1}", v, cfg.trials, cfg.base_seed)


def cmd_nash(cfg: RunConfig, out_dir: str) -> None:
    nash = solve_feedback_nash(cfg.game)
    report = check_assumptions(cfg.game, nash)
    gains_rows = []
    for k in range(cfg.game.N):
        gains_rows.extend(_matrix_rows(k, "K1", nash.K1[k]))
        gains_rows.extend(_matrix_rows(k, "K2", nash.K2[k]))
    _write_csv(os.path.join(out_dir, "gains.csv"),
               ["stage", "matrix_name", "row", "col", "value"], gains_rows)
    ric_rows = []
    for k in range(cfg.game.N + 1):
        ric_rows.extend(_matrix_rows(k, "P1", nash.P1[k]))
        ric_rows.extend(_matrix_rows(k, "P2", nash.P2[k]))
    _write_csv(os.path.join(out_dir, "riccati.csv"),
               ["stage", "matrix_name", "row", "col", "value"], ric_rows)
    _write_kv(os.path.join(out_dir, "diagnostics.txt"), [
        ("max_spectral_radius", _fmt(nash.max_spectral_radius)),
        ("schur_stable", str(report.is_schur_stable).lower()),
        ("max_spectral_norm", _fmt(nash.max_spectral_norm)),
        ("norm_contractive", str(report.is_norm_contractive).lower()),
        ("min_stage_solve_conditioning", _fmt(nash.min_stage_solve_conditioning)),
        ("min_stage_system_margin", _fmt(report.min_stage_system_margin)),
        ("controllability_rank", report.controllability_rank),
        ("controllable", str(report.is_controllable).lower()),
    ])
    _write_csv(os.path.join(out_dir, "nominal_traj.csv"),
               ["stage", "series", "value", "M", "base_seed"],
               _traj_rows(cfg, nash))


def cmd_moments(cfg: RunConfig, out_dir: str) -> None:
    if cfg.rho is None:
        raise ConfigError("ar1.rho", "moments requires a scalar rho "
                                     "(got a grid or nothing)", kind="value")
    sigma0s = cfg.sigma0_values()
    if not sigma0s:
        raise ConfigError("ar1", "moments requires sigma0 or sigma0_grid", kind="value")
    nash = solve_feedback_nash(cfg.game)
    base_sigma0 = sigma0s[0]
    params = Ar1Params(rho=cfg.rho, sigma0=base_sigma0, m2=cfg.game.m2)
    series = propagate_moments(nash, params, cfg.game.N)
    _write_csv(os.path.join(out_dir, "moments.csv"),
               ["k", "trace_Sigma", "spectral_norm_Sigma", "frobenius_C"],
               [(k, series.trace_Sigma[k],
                 float(np.linalg.norm(series.Sigma[k], 2)),
                 float(np.linalg.norm(series.C[k], "fro")))
                for k in range(cfg.game.N + 1)])
    cert = bound_certificate(nash, params, series)
    _write_kv(os.path.join(out_dir, "bounds.txt"), [
        ("rho", _fmt(params.rho)),
        ("sigma0", _fmt(params.sigma0)),
        ("c", _fmt(cert.c)),
        ("beta", _fmt(cert.beta)),
        ("C1", _fmt(cert.C1)),
        ("C2", _fmt(cert.C2)),
        ("valid", str(cert.valid).lower()),
        ("bound_holds", str(cert.bound_holds).lower()),
        ("observed_sup_trace", _fmt(cert.observed_sup_trace)),
        ("reason", cert.reason),
    ])
    rows = quadratic_scaling_table(nash, cfg.rho, sigma0s)
    _write_csv(os.path.join(out_dir, "table1.csv"),
               ["sigma0", "max_trace_Sigma", "ratio_to_baseline"],
               [(r.sigma0, r.max_trace_Sigma, r.ratio_to_baseline) for r in rows])


def cmd_sweep(cfg: RunConfig, out_dir: str) -> None:
    rhos = cfg.rho_values()
    sigma0s = cfg.sigma0_values()
    if not rhos or not sigma0s:
        raise ConfigError("ar1", "sweep requires rho (or rho_grid) and "
                                 "sigma0 (or sigma0_grid)", kind="value")
    rows = sweep(cfg.game, rhos, sigma0s, cfg.trials, cfg.base_seed,
                 threads=cfg.threads)
    _write_csv(os.path.join(out_dir, "sweep.csv"),
               ["rho", "sigma0", "mean_J1_uncomp", "mean_J1_comp",
                "reduction", "halfwidth", "M", "base_seed"],
               [(r.rho, r.sigma0, r.mean_J1_uncomp, r.mean_J1_comp,
                 r.mean_reduction, r.halfwidth, r.M, r.base_seed) for r in rows])

    # Trace cell: analytic vs empirical covariance trace, plus a capped
    # subset of deviation-state sample paths.
    nash = solve_feedback_nash(cfg.game)
    params = Ar1Params(rho=cfg.trace.rho, sigma0=cfg.trace.sigma0, m2=cfg.game.m2)
    series = propagate_moments(nash, params, cfg.game.N)
    gains = optimal_gains(nash, series, params)
    cell_seed = derive_seed(cfg.base_seed, TRACE_STREAM)
    stats = run_ensemble(cfg.game, nash, gains, params, cfg.trace.trials,
                         cell_seed, threads=cfg.threads)
    _write_csv(os.path.join(out_dir, "sigma_trace.csv"),
               ["k", "analytic_trace", "mc_trace", "M", "base_seed"],
               [(k, series.trace_Sigma[k], float(np.trace(stats.empirical_Sigma[k])),
                 cfg.trace.trials, cfg.base_seed)
                for k in range(cfg.game.N + 1)])
    sample_rows = []
    for m in range(min(cfg.sample_trials, cfg.trace.trials)):
        trial = run_trial(cfg.game, nash, gains, params,
                          derive_seed(cell_seed, m))
        for k, dx in enumerate(trial.dx_path):
            for i, v in enumerate(dx):
                sample_rows.append((m, k, i, v, cfg.trace.trials, cfg.base_seed))
    _write_csv(os.path.join(out_dir, "deltax_samples.csv"),
               ["trial", "k", "component", "value", "M", "base_seed"], sample_rows)
    _write_csv(os.path.join(out_dir, "nominal_traj.csv"),
               ["stage", "series", "value", "M", "base_seed"],
               _traj_rows(cfg, nash))


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lqgame",
        description="Finite-horizon LQ game experiments: equilibrium solve, "
                    "moment propagation, and paired Monte Carlo sweeps.")
    p.add_argument("--dump-default-config", metavar="PATH",
                   help="write the default sweep configuration to PATH and exit")
    sub = p.add_subparsers(dest="command")
    for name, doc in (("nash", "solve the feedback Nash equilibrium"),
                      ("moments", "propagate covariances and the scaling table"),
                      ("sweep", "paired Monte Carlo sweep over the deviation grid")):
        sp = sub.add_parser(name, help=doc)
        sp.add_argument("--config", metavar="PATH", help="JSON run configuration")
        sp.add_argument("--out", metavar="DIR", help="output directory")
        sp.add_argument("--seed", type=int, help="override mc.base_seed")
        sp.add_argument("--trials", type=int, help="override mc.trials")
        sp.add_argument("--threads", type=int, help="override mc.threads")
    return p


def _resolve_config(args) -> RunConfig:
    if args.config is not None:
        cfg = load_config(args.config)
    elif args.command == "moments":
        cfg = default_moments_config()
    else:
        cfg = default_config()
    if args.seed is not None:
        cfg.base_seed = args.seed
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError("--trials", "must be >= 1", kind="value")
        cfg.trials = args.trials
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads", "must be >= 1", kind="value")
        cfg.threads = args.threads
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.dump_default_config:
        try:
            dump_config(default_config(), args.dump_default_config)
        except OSError as e:
            print(f"lqgame: i/o error: {e}", file=sys.stderr)
            return EXIT_IO
        return EXIT_OK

    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG_PARSE

    try:
        cfg = _resolve_config(args)
    except OSError as e:
        print(f"lqgame: i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as e:
        print(f"lqgame: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG_PARSE if e.kind == "parse" else EXIT_VALIDATION

    out_dir = args.out if args.out is not None else cfg.out_dir
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        print(f"lqgame: i/o error: {e}", file=sys.stderr)
        return EXIT_IO

    try:
        if args.command == "nash":
            cmd_nash(cfg, out_dir)
        elif args.command == "moments":
            cmd_moments(cfg, out_dir)
        else:
            cmd_sweep(cfg, out_dir)
    except ConfigError as e:
        print(f"lqgame: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG_PARSE if e.kind == "parse" else EXIT_VALIDATION
    except (SingularStageSystem, SweepCellError) as e:
        print(f"lqgame: solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except InvalidParams as e:
        print(f"lqgame: validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"lqgame: i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except LqGamesError as e:
        print(f"lqgame: solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
