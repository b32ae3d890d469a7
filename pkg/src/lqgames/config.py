"""Run configuration: a single JSON file driving every command.

Matrices are row-major nested arrays.  The deviation section holds exactly
one of a scalar or a grid per parameter (``rho``/``rho_grid`` and
``sigma0``/``sigma0_grid``).  Validation errors always name the offending
path in the config tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import benchmark
from .errors import ConfigError, DimensionMismatch, IndefiniteWeight
from .game import GameSpec

__all__ = ["RunConfig", "TraceCell", "parse_config", "load_config",
           "default_config", "dump_config"]

_GAME_KEYS = {"A", "B1", "B2", "Q1", "Q2", "Q1N", "Q2N", "R1", "R2", "N", "x0"}
_MATRIX_KEYS = ("A", "B1", "B2", "Q1", "Q2", "Q1N", "Q2N", "R1", "R2")


@dataclass
class TraceCell:
    """Deviation cell used for the analytic-vs-MC trace comparison."""

    rho: float = 0.5
    sigma0: float = 0.06
    trials: int = 10000


@dataclass
class RunConfig:
    game: GameSpec
    rho: float | None = None
    rho_grid: list[float] | None = None
    sigma0: float | None = None
    sigma0_grid: list[float] | None = None
    trials: int = 500
    base_seed: int = 20260809
    threads: int = 1
    sample_trials: int = 50
    trace: TraceCell = field(default_factory=TraceCell)
    out_dir: str = "out"
    format: str = "csv"

    def rho_values(self) -> list[float]:
        return [self.rho] if self.rho is not None else list(self.rho_grid or [])

    def sigma0_values(self) -> list[float]:
        return [self.sigma0] if self.sigma0 is not None else list(self.sigma0_grid or [])

    def to_dict(self) -> dict:
        g = self.game
        d: dict = {
            "game": {
                "A": g.A.tolist(), "B1": g.B1.tolist(), "B2": g.B2.tolist(),
                "Q1": g.Q1.tolist(), "Q2": g.Q2.tolist(),
                "Q1N": g.Q1N.tolist(), "Q2N": g.Q2N.tolist(),
                "R1": g.R1.tolist(), "R2": g.R2.tolist(),
                "N": g.N, "x0": g.x0.tolist(),
            },
            "ar1": {},
            "mc": {
                "trials": self.trials, "base_seed": self.base_seed,
                "threads": self.threads, "sample_trials": self.sample_trials,
                "trace": {"rho": self.trace.rho, "sigma0": self.trace.sigma0,
                          "trials": self.trace.trials},
            },
            "output": {"directory": self.out_dir, "format": self.format},
        }
        if self.rho is not None:
            d["ar1"]["rho"] = self.rho
        if self.rho_grid is not None:
            d["ar1"]["rho_grid"] = list(self.rho_grid)
        if self.sigma0 is not None:
            d["ar1"]["sigma0"] = self.sigma0
        if self.sigma0_grid is not None:
            d["ar1"]["sigma0_grid"] = list(self.sigma0_grid)
        return d


def _require_mapping(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(path, f"expected an object, got {type(obj).__name__}")
    return obj


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}", "unknown key")


def _parse_matrix(obj, path: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ConfigError(path, "expected a nonempty array of rows")
    width = None
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise ConfigError(f"{path}[{i}]", "expected an array of numbers")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ConfigError(f"{path}[{i}]",
                              f"ragged rows: {len(row)} entries, expected {width}")
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ConfigError(f"{path}[{i}][{j}]", "expected a number")
    return np.array(obj, dtype=float)


def _parse_vector(obj, path: str) -> np.ndarray:
    if not isinstance(obj, list):
        raise ConfigError(path, "expected an array of numbers")
    for i, v in enumerate(obj):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ConfigError(f"{path}[{i}]", "expected a number")
    return np.array(obj, dtype=float)


def _parse_number(obj, path: str) -> float:
    if not isinstance(obj, (int, float)) or isinstance(obj, bool):
        raise ConfigError(path, "expected a number")
    return float(obj)


def _parse_int(obj, path: str) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise ConfigError(path, "expected an integer")
    return obj


def parse_config(data: dict) -> RunConfig:
    """Validate a parsed JSON document into a ``RunConfig``."""
    data = _require_mapping(data, "<root>")
    _reject_unknown(data, {"game", "ar1", "mc", "output"}, "<root>")
    if "game" not in data:
        raise ConfigError("game", "required section is missing")
    game_obj = _require_mapping(data["game"], "game")
    _reject_unknown(game_obj, _GAME_KEYS, "game")
    kwargs = {}
    for key in _MATRIX_KEYS:
        if key not in game_obj:
            raise ConfigError(f"game.{key}", "required matrix is missing")
        kwargs[key] = _parse_matrix(game_obj[key], f"game.{key}")
    if "N" not in game_obj:
        raise ConfigError("game.N", "required horizon is missing")
    kwargs["N"] = _parse_int(game_obj["N"], "game.N")
    kwargs["x0"] = _parse_vector(game_obj.get("x0", [0.0] * kwargs["A"].shape[0]),
                                 "game.x0")
    try:
        spec = GameSpec(**kwargs)
    except (DimensionMismatch, IndefiniteWeight) as e:
        raise ConfigError("game", str(e), kind="value") from e

    cfg = RunConfig(game=spec)

    ar1 = _require_mapping(data.get("ar1", {}), "ar1")
    _reject_unknown(ar1, {"rho", "rho_grid", "sigma0", "sigma0_grid"}, "ar1")
    if "rho" in ar1 and "rho_grid" in ar1:
        raise ConfigError("ar1", "exactly one of rho / rho_grid may be set", kind="value")
    if "sigma0" in ar1 and "sigma0_grid" in ar1:
        raise ConfigError("ar1", "exactly one of sigma0 / sigma0_grid may be set", kind="value")
    if "rho" in ar1:
        cfg.rho = _parse_number(ar1["rho"], "ar1.rho")
    if "rho_grid" in ar1:
        cfg.rho_grid = [_parse_number(v, f"ar1.rho_grid[{i}]")
                        for i, v in enumerate(_as_list(ar1["rho_grid"], "ar1.rho_grid"))]
    if "sigma0" in ar1:
        cfg.sigma0 = _parse_number(ar1["sigma0"], "ar1.sigma0")
    if "sigma0_grid" in ar1:
        cfg.sigma0_grid = [_parse_number(v, f"ar1.sigma0_grid[{i}]")
                           for i, v in enumerate(_as_list(ar1["sigma0_grid"],
                                                          "ar1.sigma0_grid"))]

    mc = _require_mapping(data.get("mc", {}), "mc")
    _reject_unknown(mc, {"trials", "base_seed", "threads", "sample_trials", "trace"}, "mc")
    if "trials" in mc:
        cfg.trials = _parse_int(mc["trials"], "mc.trials")
        if cfg.trials < 1:
            raise ConfigError("mc.trials", "must be >= 1", kind="value")
    if "base_seed" in mc:
        cfg.base_seed = _parse_int(mc["base_seed"], "mc.base_seed")
    if "threads" in mc:
        cfg.threads = _parse_int(mc["threads"], "mc.threads")
        if cfg.threads < 1:
            raise ConfigError("mc.threads", "must be >= 1", kind="value")
    if "sample_trials" in mc:
        cfg.sample_trials = _parse_int(mc["sample_trials"], "mc.sample_trials")
        if cfg.sample_trials < 0:
            raise ConfigError("mc.sample_trials", "must be >= 0", kind="value")
    if "trace" in mc:
        tr = _require_mapping(mc["trace"], "mc.trace")
        _reject_unknown(tr, {"rho", "sigma0", "trials"}, "mc.trace")
        cell = TraceCell()
        if "rho" in tr:
            cell.rho = _parse_number(tr["rho"], "mc.trace.rho")
        if "sigma0" in tr:
            cell.sigma0 = _parse_number(tr["sigma0"], "mc.trace.sigma0")
        if "trials" in tr:
            cell.trials = _parse_int(tr["trials"], "mc.trace.trials")
        cfg.trace = cell

    out = _require_mapping(data.get("output", {}), "output")
    _reject_unknown(out, {"directory", "format"}, "output")
    if "directory" in out:
        if not isinstance(out["directory"], str):
            raise ConfigError("output.directory", "expected a string")
        cfg.out_dir = out["directory"]
    if "format" in out:
        if out["format"] != "csv":
            raise ConfigError("output.format", f"unsupported format {out['format']!r}", kind="value")
        cfg.format = out["format"]
    return cfg


def _as_list(obj, path: str) -> list:
    if not isinstance(obj, list) or not obj:
        raise ConfigError(path, "expected a nonempty array")
    return obj


def load_config(path: str) -> RunConfig:
    """Read and validate a config file.

    JSON syntax errors surface as ``ConfigError`` with path ``<file>``;
    unreadable files raise ``OSError``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("<file>", f"invalid JSON: {e}") from e
    return parse_config(data)


def default_config() -> RunConfig:
    """Sweep-oriented default: benchmark game, full deviation grids, the
    standard trace cell, 500 trials.

    The moment/scaling command needs a scalar ``ar1.rho``; edit the dumped
    file accordingly (and set ``ar1.sigma0_grid`` to the scaling grid).
    """
    spec = benchmark.benchmark_game(x0=benchmark.DEMO_X0)
    return RunConfig(game=spec,
                     rho_grid=list(benchmark.RHO_GRID),
                     sigma0_grid=list(benchmark.SIGMA0_GRID))


def default_moments_config() -> RunConfig:
    spec = benchmark.benchmark_game(x0=benchmark.DEMO_X0)
    return RunConfig(game=spec, rho=0.5,
                     sigma0_grid=list(benchmark.SCALING_SIGMA0_GRID))


def dump_config(cfg: RunConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.to_dict(), fh, indent=2)
        fh.write("\n")
