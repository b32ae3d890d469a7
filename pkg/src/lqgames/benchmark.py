"""Default three-state benchmark game used throughout the experiments.

A mildly coupled, symmetric, open-loop-stable plant with two fully
actuated players, heavy state weighting on the first coordinate, and a
nine-stage horizon.  The closed loop under the feedback Nash gains is
Schur stable at every stage (worst-stage spectral radius about 0.36).
"""

from __future__ import annotations

import numpy as np

from .game import GameSpec

__all__ = ["benchmark_game", "DEMO_X0", "RHO_GRID", "SIGMA0_GRID", "SCALING_SIGMA0_GRID"]

_A = [[0.7484, 0.2386, 0.0703],
      [0.2386, 0.6585, 0.2795],
      [0.0703, 0.2795, 0.4471]]
_B1 = [[0.3561, 0.0820, 0.0905],
       [0.0820, 0.3496, 0.2702],
       [0.0905, 0.2702, 0.3838]]
_B2 = [[0.2748, 0.0950, 0.0965],
       [0.0950, 0.3439, 0.2671],
       [0.0965, 0.2671, 0.3797]]
_Q = [[50.0, 5.0, 2.0],
      [5.0, 10.0, 3.0],
      [2.0, 3.0, 1.0]]
_R = [[15.0, 2.25, 0.0],
      [2.25, 7.5, 0.0],
      [0.0, 0.0, 3.0]]

HORIZON = 9

# Initial state for qualitative nominal-trajectory demos.  Deviation
# experiments always start from the origin.
DEMO_X0 = np.array([1.0, -0.5, 0.25])

RHO_GRID = [0.0, 0.2, 0.4, 0.6, 0.8, 0.9]
SIGMA0_GRID = [0.02, 0.04, 0.06, 0.08]
SCALING_SIGMA0_GRID = [0.15, 0.30, 0.45, 0.60]


def benchmark_game(x0=None, N: int = HORIZON) -> GameSpec:
    """The benchmark game; ``x0`` defaults to the origin."""
    if x0 is None:
        x0 = np.zeros(3)
    return GameSpec(A=np.array(_A), B1=np.array(_B1), B2=np.array(_B2),
                    Q1=np.array(_Q), Q2=np.array(_Q),
                    Q1N=np.array(_Q), Q2N=np.array(_Q),
                    R1=np.array(_R), R2=np.array(_R),
                    N=N, x0=np.asarray(x0, dtype=float))
