"""First-order Gauss-Markov (AR(1)) execution-deviation model.

The deviation sequence follows ``d[k] = rho * d[k-1] + sigma_w * w[k]``
with ``d[0] = 0`` and standard-normal innovations, under the
variance-preserving parameterization ``sigma_w = sqrt(1 - rho^2) * sigma0``
so the per-channel variance converges to ``sigma0^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams
from .rng import make_generator, standard_normals

__all__ = ["Ar1Params", "DeviationPath", "sample_path", "phi_marginal", "phi_cross"]


@dataclass(frozen=True)
class Ar1Params:
    """Persistence ``rho`` in [0, 1), steady-state scale ``sigma0`` > 0,
    channel count ``m2``."""

    rho: float
    sigma0: float
    m2: int

    def __post_init__(self):
        if not (0.0 <= self.rho < 1.0):
            raise InvalidParams(f"rho must lie in [0, 1), got {self.rho}")
        if not self.sigma0 > 0.0:
            raise InvalidParams(f"sigma0 must be positive, got {self.sigma0}")
        if self.m2 < 1:
            raise InvalidParams(f"m2 must be a positive integer, got {self.m2}")

    @property
    def sigma_w(self) -> float:
        # Recomputed on demand; never stored independently.
        return float(np.sqrt(1.0 - self.rho**2) * self.sigma0)


@dataclass
class DeviationPath:
    values: list[np.ndarray]
    seed: int


def sample_path(params: Ar1Params, N: int, seed: int) -> DeviationPath:
    """One deviation path of length ``N``; identical seed gives an identical
    path bit-for-bit."""
    if N < 1:
        raise InvalidParams(f"N must be >= 1, got {N}")
    gen = make_generator(seed)
    m2 = params.m2
    w = standard_normals(gen, (N - 1) * m2).reshape(max(N - 1, 0), m2)
    sw = params.sigma_w
    values = [np.zeros(m2)]
    for k in range(1, N):
        values.append(params.rho * values[k - 1] + sw * w[k - 1])
    return DeviationPath(values=values, seed=int(seed))


def phi_marginal(params: Ar1Params, k: int) -> np.ndarray:
    """Closed-form marginal covariance ``sigma0^2 (1 - rho^(2k)) I``."""
    if k < 0:
        raise InvalidParams(f"stage index must be >= 0, got {k}")
    return params.sigma0**2 * (1.0 - params.rho ** (2 * k)) * np.eye(params.m2)


def phi_cross(params: Ar1Params, k: int, l: int) -> np.ndarray:
    """Cross-covariance between stages ``k`` and ``l``:
    ``rho^(k-l) * phi_marginal(l)`` for ``k >= l``, transposed otherwise."""
    if k < 0 or l < 0:
        raise InvalidParams(f"stage indices must be >= 0, got ({k}, {l})")
    if k < l:
        return phi_cross(params, l, k).T
    return params.rho ** (k - l) * phi_marginal(params, l)
