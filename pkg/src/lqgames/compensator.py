"""Predictive feedforward compensation for the first player.

The deviation's one-step conditional mean is ``rho * du[k-1]``, so the
compensated policy is ``u1[k] = -K1[k] x[k] - L[k] rho du[k-1]``.  The
gain minimizing the stagewise quadratic

    J_k(L) = tr(L' R1 L Psi_k) + 2 tr(L' R1 K1[k] Gamma_k),
    Psi_k = rho^2 Phi[k-1],  Gamma_k = C[k],

with the covariances frozen at their uncompensated values, is

    L*[k] = -(1 / rho^2) K1[k] C[k] pinv(Phi[k-1]),

the pseudoinverse acting on the support of ``Phi[k-1]``.  Gains are
precomputed for the whole horizon from the frozen moments, never re-derived
online from realized trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deviation import Ar1Params
from .errors import DimensionMismatch, InvalidParams
from .game import NashSolution
from .moments import MomentSeries

__all__ = ["CompensatorGains", "optimal_gains", "stage_objective", "apply_policy"]

# Relative singular-value cutoff for the pseudoinverse of Phi.
PINV_RCOND = 1e-12


@dataclass
class CompensatorGains:
    L: list[np.ndarray]
    frozen_C: list[np.ndarray]
    frozen_Phi: list[np.ndarray]
    rho: float


def optimal_gains(nash: NashSolution, moments: MomentSeries,
                  params: Ar1Params) -> CompensatorGains:
    """Stagewise-optimal compensation gains from frozen uncompensated moments.

    ``L[0] = 0`` always (no deviation history exists at stage 0), and
    ``rho = 0`` short-circuits to all-zero gains: the stage objective is then
    identically zero, so zero preserves the nominal equilibrium policy.
    """
    N = nash.horizon
    m1 = nash.K1[0].shape[0]
    m2 = nash.B2.shape[1]
    if len(moments.C) < N + 1:
        raise DimensionMismatch("moment series shorter than the solution horizon")
    if moments.C[0].shape != (nash.Acl[0].shape[0], m2):
        raise DimensionMismatch("moment series dimensions do not match the solution")
    L = [np.zeros((m1, m2))]
    if params.rho == 0.0:
        L.extend(np.zeros((m1, m2)) for _ in range(1, N))
    else:
        inv_rho2 = 1.0 / params.rho**2
        for k in range(1, N):
            pinv = np.linalg.pinv(moments.Phi[k - 1], rcond=PINV_RCOND)
            L.append(-inv_rho2 * (nash.K1[k] @ moments.C[k] @ pinv))
    return CompensatorGains(L=L, frozen_C=list(moments.C), frozen_Phi=list(moments.Phi),
                            rho=params.rho)


def stage_objective(L: np.ndarray, k: int, nash: NashSolution,
                    moments: MomentSeries, params: Ar1Params) -> float:
    """Frozen-covariance stage objective; convex in ``L`` and zero at
    ``L = 0``."""
    if k < 1:
        raise InvalidParams(f"stage objective defined for k >= 1, got {k}")
    L = np.asarray(L, dtype=float)
    m1 = nash.K1[0].shape[0]
    m2 = nash.B2.shape[1]
    if L.shape != (m1, m2):
        raise DimensionMismatch(f"L: expected shape {(m1, m2)}, got {L.shape}")
    Psi = params.rho**2 * moments.Phi[k - 1]
    Gamma = moments.C[k]
    quad = float(np.trace(L.T @ nash.R1 @ L @ Psi))
    cross = 2.0 * float(np.trace(L.T @ nash.R1 @ nash.K1[k] @ Gamma))
    return quad + cross


def apply_policy(nash: NashSolution, gains: CompensatorGains, x_k: np.ndarray,
                 prev_dev: np.ndarray, k: int) -> np.ndarray:
    """Compensated first-player input ``-K1[k] x - L[k] rho prev_dev``."""
    if not (0 <= k < nash.horizon):
        raise InvalidParams(f"stage {k} outside 0..{nash.horizon - 1}")
    x_k = np.asarray(x_k, dtype=float).reshape(-1)
    prev_dev = np.asarray(prev_dev, dtype=float).reshape(-1)
    if x_k.shape[0] != nash.K1[k].shape[1]:
        raise DimensionMismatch("state dimension does not match the gains")
    if prev_dev.shape[0] != gains.L[k].shape[1]:
        raise DimensionMismatch("deviation dimension does not match the gains")
    return -(nash.K1[k] @ x_k) - gains.L[k] @ (gains.rho * prev_dev)
