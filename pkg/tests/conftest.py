from __future__ import annotations

import time

import numpy as np
import pytest

from lqgames import (
    Ar1Params,
    GameSpec,
    benchmark_game,
    optimal_gains,
    propagate_moments,
    run_ensemble,
    solve_feedback_nash,
)
from lqgames.benchmark import DEMO_X0


@pytest.fixture(scope="session")
def bench_spec() -> GameSpec:
    return benchmark_game()


@pytest.fixture(scope="session")
def demo_spec() -> GameSpec:
    return benchmark_game(x0=DEMO_X0)


@pytest.fixture(scope="session")
def bench_nash(bench_spec):
    return solve_feedback_nash(bench_spec)


@pytest.fixture(scope="session")
def trace_params() -> Ar1Params:
    # The standard validation cell: sigma0 = 0.06, rho = 0.5.
    return Ar1Params(rho=0.5, sigma0=0.06, m2=3)


@pytest.fixture(scope="session")
def trace_moments(bench_nash, trace_params, bench_spec):
    return propagate_moments(bench_nash, trace_params, bench_spec.N)


@pytest.fixture(scope="session")
def big_ensemble(bench_spec, bench_nash, trace_params, trace_moments):
    """10^4 paired trials at the validation cell, with its wall time."""
    gains = optimal_gains(bench_nash, trace_moments, trace_params)
    t0 = time.perf_counter()
    stats = run_ensemble(bench_spec, bench_nash, gains, trace_params,
                         M=10_000, base_seed=745_991_318)
    elapsed = time.perf_counter() - t0
    return stats, elapsed


def random_game(rng: np.random.Generator, n: int, m1: int, m2: int,
                N: int) -> GameSpec:
    """A random well-posed instance: PSD state weights, PD control weights."""
    A = rng.normal(scale=0.6, size=(n, n))
    B1 = rng.normal(scale=0.8, size=(n, m1))
    B2 = rng.normal(scale=0.8, size=(n, m2))

    def psd(dim):
        M = rng.normal(size=(dim, dim))
        return M.T @ M / dim

    def pd(dim):
        return psd(dim) + np.eye(dim)

    return GameSpec(A=A, B1=B1, B2=B2,
                    Q1=psd(n), Q2=psd(n), Q1N=psd(n), Q2N=psd(n),
                    R1=pd(m1), R2=pd(m2), N=N, x0=rng.normal(size=n))
