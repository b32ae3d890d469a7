"""Exact second-order moments of the uncompensated perturbed closed loop.

With deviation dynamics ``dx[k+1] = Acl[k] dx[k] + B2 du[k]`` driven by the
AR(1) deviation, the state covariance ``Sigma[k] = E[dx dx']`` and the
state-deviation cross-covariance ``C[k] = E[dx du']`` obey

    Sigma[k+1] = Acl Sigma Acl' + B2 Phi B2' + Acl C B2' + B2 C' Acl'
    C[k+1]     = rho Acl C + rho B2 Phi

with ``Phi[k]`` the closed-form marginal deviation covariance.  The bound
certificate uses the conservative envelope ``c = 1``,
``beta = max_k ||Acl[k]||_2`` (submultiplicativity then bounds every
closed-loop product by ``beta^length``), giving

    C1 = 2 c beta rho / (1 - beta rho)
    C2 = (1 + C1) ||B2||_2^2 / (1 - beta^2)

and the guarantee ``||Sigma[k]||_2 <= C2 sigma0^2`` whenever ``beta < 1``.
Both the recursion and the certificate concern the loop WITHOUT predictive
compensation; compensated-loop moments are only observed empirically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deviation import Ar1Params, phi_marginal
from .errors import DimensionMismatch, InvalidParams
from .game import NashSolution

__all__ = [
    "MomentSeries",
    "BoundCertificate",
    "ScalingRow",
    "propagate_moments",
    "quadratic_scaling_table",
    "bound_certificate",
]


@dataclass
class MomentSeries:
    Sigma: list[np.ndarray]
    C: list[np.ndarray]
    Phi: list[np.ndarray]
    trace_Sigma: list[float]


@dataclass
class BoundCertificate:
    c: float
    beta: float
    C1: float
    C2: float
    valid: bool
    observed_sup_trace: float
    bound_holds: bool | None
    reason: str


@dataclass
class ScalingRow:
    sigma0: float
    max_trace_Sigma: float
    ratio_to_baseline: float


def propagate_moments(nash: NashSolution, params: Ar1Params, N: int) -> MomentSeries:
    """Propagate ``Sigma``, ``C`` and ``Phi`` over stages ``0..N``."""
    if N < 1 or N > nash.horizon:
        raise DimensionMismatch(f"horizon {N} not covered by the solved game")
    B2 = nash.B2
    n = nash.Acl[0].shape[0]
    if B2.shape[1] != params.m2:
        raise DimensionMismatch(
            f"deviation channels {params.m2} do not match B2 columns {B2.shape[1]}")
    Sigma = [np.zeros((n, n))]
    C = [np.zeros((n, params.m2))]
    Phi = [phi_marginal(params, 0)]
    for k in range(N):
        Ak = nash.Acl[k]
        Pk = Phi[k]
        Sn = Ak @ Sigma[k] @ Ak.T + B2 @ Pk @ B2.T + Ak @ C[k] @ B2.T + B2 @ C[k].T @ Ak.T
        Sigma.append(0.5 * (Sn + Sn.T))
        C.append(params.rho * (Ak @ C[k]) + params.rho * (B2 @ Pk))
        Phi.append(phi_marginal(params, k + 1))
    return MomentSeries(Sigma=Sigma, C=C, Phi=Phi,
                        trace_Sigma=[float(np.trace(S)) for S in Sigma])


def quadratic_scaling_table(nash: NashSolution, rho: float,
                            sigma0_list: list[float]) -> list[ScalingRow]:
    """Peak covariance trace per deviation scale, with ratios to the first
    entry.  The recursion is exactly quadratic in ``sigma0``, so the ratios
    equal ``(sigma0 / sigma0_base)^2`` up to round-off."""
    if len(sigma0_list) == 0:
        raise InvalidParams("sigma0_list must be nonempty")
    if any(b <= a for a, b in zip(sigma0_list, sigma0_list[1:])):
        raise InvalidParams("sigma0_list must be strictly ascending")
    m2 = nash.B2.shape[1]
    rows = []
    base = None
    for s0 in sigma0_list:
        params = Ar1Params(rho=rho, sigma0=float(s0), m2=m2)
        series = propagate_moments(nash, params, nash.horizon)
        peak = max(series.trace_Sigma)
        if base is None:
            base = peak
        rows.append(ScalingRow(sigma0=float(s0), max_trace_Sigma=peak,
                               ratio_to_baseline=peak / base if base > 0.0 else 1.0))
    return rows


def bound_certificate(nash: NashSolution, params: Ar1Params,
                      moments: MomentSeries) -> BoundCertificate:
    """Uniform-boundedness certificate for the propagated covariances."""
    beta = nash.max_spectral_norm
    c = 1.0
    sup_trace = max(moments.trace_Sigma)
    if beta >= 1.0:
        return BoundCertificate(c=c, beta=beta, C1=np.nan, C2=np.nan, valid=False,
                                observed_sup_trace=sup_trace, bound_holds=None,
                                reason=f"max stage spectral norm {beta:.6g} >= 1; "
                                       "no geometric envelope available")
    rho = params.rho
    C1 = 2.0 * c * beta * rho / (1.0 - beta * rho)
    C2 = (1.0 + C1) * np.linalg.norm(nash.B2, 2) ** 2 / (1.0 - beta**2)
    limit = C2 * params.sigma0**2
    sup_norm = max(float(np.linalg.norm(S, 2)) for S in moments.Sigma)
    holds = bool(sup_norm <= limit)
    return BoundCertificate(c=c, beta=beta, C1=float(C1), C2=float(C2), valid=True,
                            observed_sup_trace=sup_trace, bound_holds=holds,
                            reason="" if holds else
                            f"sup ||Sigma||_2 = {sup_norm:.6g} exceeds C2 sigma0^2 = {limit:.6g}")
