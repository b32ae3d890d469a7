"""Finite-horizon two-player LQ game: problem data, feedback Nash solve,
rollouts, cost evaluation, and well-posedness diagnostics.

The equilibrium is computed by the standard backward coupled Riccati
recursion.  At each stage, with ``P1'``/``P2'`` the next-stage value
matrices, the gains jointly satisfy

    [R1 + B1'P1'B1   B1'P1'B2 ] [K1]   [B1'P1'A]
    [B2'P2'B1   R2 + B2'P2'B2 ] [K2] = [B2'P2'A]

followed by the value updates ``Pi = Qi + Ki'RiKi + Acl'Pi'Acl`` with
``Acl = A - B1 K1 - B2 K2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, IndefiniteWeight, SingularStageSystem

__all__ = [
    "GameSpec",
    "NashSolution",
    "Trajectory",
    "DiagnosticsReport",
    "solve_feedback_nash",
    "nominal_rollout",
    "evaluate_cost",
    "check_assumptions",
]

# Reciprocal-condition floor below which the stage system counts as singular.
RCOND_FLOOR = 1e-12
# Positive-definiteness floor for the control weights.
PD_FLOOR = 1e-12


def _as_matrix(M, name: str, shape: tuple[int, int]) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape != shape:
        raise DimensionMismatch(f"{name}: expected shape {shape}, got {M.shape}")
    return M


def _check_symmetric_psd(M: np.ndarray, name: str) -> None:
    scale = np.linalg.norm(M, 2) if M.size else 0.0
    if not np.allclose(M, M.T, atol=1e-9 * max(scale, 1.0)):
        raise IndefiniteWeight(f"{name} is not symmetric")
    tol = 1e-9 * scale
    if np.linalg.eigvalsh(0.5 * (M + M.T)).min() < -tol:
        raise IndefiniteWeight(f"{name} is not positive semidefinite")


def _check_symmetric_pd(M: np.ndarray, name: str) -> None:
    scale = np.linalg.norm(M, 2)
    if not np.allclose(M, M.T, atol=1e-9 * max(scale, 1.0)):
        raise IndefiniteWeight(f"{name} is not symmetric")
    if np.linalg.eigvalsh(0.5 * (M + M.T)).min() <= PD_FLOOR:
        raise IndefiniteWeight(f"{name} is not positive definite")


@dataclass(frozen=True)
class GameSpec:
    """Full problem statement of the two-player LQ game.

    Dynamics ``x+ = A x + B1 u1 + B2 u2`` over stages ``0..N-1``; each
    player i pays stage costs ``x'Qi x + ui'Ri ui`` plus the terminal
    ``x_N' QiN x_N``.
    """

    A: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    Q1: np.ndarray
    Q2: np.ndarray
    Q1N: np.ndarray
    Q2N: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    N: int
    x0: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"A must be square, got {A.shape}")
        n = A.shape[0]
        B1 = np.asarray(self.B1, dtype=float)
        B2 = np.asarray(self.B2, dtype=float)
        if B1.ndim != 2 or B1.shape[0] != n:
            raise DimensionMismatch(f"B1: expected {n} rows, got shape {B1.shape}")
        if B2.ndim != 2 or B2.shape[0] != n:
            raise DimensionMismatch(f"B2: expected {n} rows, got shape {B2.shape}")
        m1, m2 = B1.shape[1], B2.shape[1]
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B1", B1)
        object.__setattr__(self, "B2", B2)
        for name, shape in (("Q1", (n, n)), ("Q2", (n, n)), ("Q1N", (n, n)),
                            ("Q2N", (n, n)), ("R1", (m1, m1)), ("R2", (m2, m2))):
            object.__setattr__(self, name, _as_matrix(getattr(self, name), name, shape))
        if int(self.N) < 1:
            raise DimensionMismatch(f"N must be a positive integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        if x0.shape[0] != n:
            raise DimensionMismatch(f"x0: expected length {n}, got {x0.shape[0]}")
        object.__setattr__(self, "x0", x0)
        for name in ("Q1", "Q2", "Q1N", "Q2N"):
            _check_symmetric_psd(getattr(self, name), name)
        for name in ("R1", "R2"):
            _check_symmetric_pd(getattr(self, name), name)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m1(self) -> int:
        return self.B1.shape[1]

    @property
    def m2(self) -> int:
        return self.B2.shape[1]


@dataclass
class NashSolution:
    """Stagewise feedback Nash equilibrium and its diagnostics.

    Carries the input matrices ``B1``/``B2`` so downstream moment and
    compensation computations need only the solution object.
    """

    K1: list[np.ndarray]
    K2: list[np.ndarray]
    P1: list[np.ndarray]
    P2: list[np.ndarray]
    Acl: list[np.ndarray]
    B1: np.ndarray
    B2: np.ndarray
    R1: np.ndarray
    max_spectral_radius: float
    max_spectral_norm: float
    min_stage_solve_conditioning: float

    @property
    def horizon(self) -> int:
        return len(self.K1)


@dataclass
class Trajectory:
    states: list[np.ndarray]
    u1: list[np.ndarray]
    u2: list[np.ndarray]


@dataclass
class DiagnosticsReport:
    """Report-only well-posedness checks; flags, never raises."""

    stage_system_margins: list[float] = field(default_factory=list)
    min_stage_system_margin: float = np.inf
    controllability_rank: int = 0
    is_controllable: bool = False
    max_spectral_norm: float = np.inf
    is_norm_contractive: bool = False
    max_spectral_radius: float = np.inf
    is_schur_stable: bool = False


def solve_feedback_nash(spec: GameSpec) -> NashSolution:
    """Backward coupled Riccati recursion for the feedback Nash gains.

    Raises ``SingularStageSystem`` when any stage's joint gain system has
    reciprocal condition below 1e-12, which signals loss of existence or
    uniqueness rather than round-off.
    """
    A, B1, B2 = spec.A, spec.B1, spec.B2
    n, m1, m2, N = spec.n, spec.m1, spec.m2, spec.N
    K1: list[np.ndarray] = [None] * N
    K2: list[np.ndarray] = [None] * N
    P1: list[np.ndarray] = [None] * (N + 1)
    P2: list[np.ndarray] = [None] * (N + 1)
    Acl: list[np.ndarray] = [None] * N
    P1[N] = spec.Q1N.copy()
    P2[N] = spec.Q2N.copy()
    min_rcond = np.inf

    for k in range(N - 1, -1, -1):
        P1n, P2n = P1[k + 1], P2[k + 1]
        S = np.block([
            [spec.R1 + B1.T @ P1n @ B1, B1.T @ P1n @ B2],
            [B2.T @ P2n @ B1, spec.R2 + B2.T @ P2n @ B2],
        ])
        Y = np.vstack([B1.T @ P1n @ A, B2.T @ P2n @ A])
        sv = np.linalg.svd(S, compute_uv=False)
        rcond = float(sv[-1] / sv[0]) if sv[0] > 0.0 else 0.0
        if rcond < RCOND_FLOOR:
            raise SingularStageSystem(k, rcond)
        min_rcond = min(min_rcond, rcond)
        K = np.linalg.solve(S, Y)
        K1[k] = K[:m1]
        K2[k] = K[m1:]
        Acl[k] = A - B1 @ K1[k] - B2 @ K2[k]
        # Symmetrize after every update to suppress floating-point drift.
        P1k = spec.Q1 + K1[k].T @ spec.R1 @ K1[k] + Acl[k].T @ P1n @ Acl[k]
        P2k = spec.Q2 + K2[k].T @ spec.R2 @ K2[k] + Acl[k].T @ P2n @ Acl[k]
        P1[k] = 0.5 * (P1k + P1k.T)
        P2[k] = 0.5 * (P2k + P2k.T)

    radius = max(float(np.max(np.abs(np.linalg.eigvals(M)))) for M in Acl)
    norm = max(float(np.linalg.norm(M, 2)) for M in Acl)
    return NashSolution(K1=K1, K2=K2, P1=P1, P2=P2, Acl=Acl,
                        B1=B1.copy(), B2=B2.copy(), R1=spec.R1.copy(),
                        max_spectral_radius=radius, max_spectral_norm=norm,
                        min_stage_solve_conditioning=float(min_rcond))


def nominal_rollout(spec: GameSpec, nash: NashSolution) -> Trajectory:
    """Deterministic closed-loop rollout from ``spec.x0`` under both
    equilibrium policies."""
    if len(nash.K1) != spec.N or len(nash.Acl) != spec.N:
        raise DimensionMismatch("solution horizon does not match spec.N")
    if nash.K1[0].shape[1] != spec.n:
        raise DimensionMismatch("solution state dimension does not match spec")
    states = [spec.x0.copy()]
    u1, u2 = [], []
    for k in range(spec.N):
        x = states[k]
        u1.append(-nash.K1[k] @ x)
        u2.append(-nash.K2[k] @ x)
        states.append(nash.Acl[k] @ x)
    return Trajectory(states=states, u1=u1, u2=u2)


def evaluate_cost(traj: Trajectory, spec: GameSpec, player: int) -> float:
    """Quadratic cost of one player along a trajectory."""
    if player == 1:
        Q, R, QN, u = spec.Q1, spec.R1, spec.Q1N, traj.u1
    elif player == 2:
        Q, R, QN, u = spec.Q2, spec.R2, spec.Q2N, traj.u2
    else:
        raise ValueError(f"player must be 1 or 2, got {player}")
    if len(traj.states) != spec.N + 1 or len(u) != spec.N:
        raise DimensionMismatch("trajectory length does not match spec.N")
    if traj.states[0].shape[0] != spec.n:
        raise DimensionMismatch("trajectory state dimension does not match spec")
    total = 0.0
    for k in range(spec.N):
        x = traj.states[k]
        total += float(x @ Q @ x) + float(u[k] @ R @ u[k])
    xN = traj.states[spec.N]
    return total + float(xN @ QN @ xN)


def check_assumptions(spec: GameSpec, nash: NashSolution) -> DiagnosticsReport:
    """Well-posedness diagnostics for a solved game.

    Reports (a) the invertibility margin (smallest singular value) of the
    3n x 3n stage matrix built from the value matrices and the control
    penalties, (b) the controllability rank of ``(A, [B1 B2])``, (c) the
    worst-stage spectral norm of the closed loop and (d) its worst-stage
    spectral radius, each with a pass flag.
    """
    n = spec.n
    I = np.eye(n)
    S1 = spec.B1 @ np.linalg.solve(spec.R1, spec.B1.T)
    S2 = spec.B2 @ np.linalg.solve(spec.R2, spec.B2.T)
    Z = np.zeros((n, n))
    margins = []
    for P1k, P2k in zip(nash.P1, nash.P2):
        Mk = np.block([[I, S1, S2], [P1k, -I, Z], [P2k, Z, -I]])
        margins.append(float(np.linalg.svd(Mk, compute_uv=False)[-1]))

    Bbar = np.hstack([spec.B1, spec.B2])
    blocks = [Bbar]
    for _ in range(n - 1):
        blocks.append(spec.A @ blocks[-1])
    ctrb_rank = int(np.linalg.matrix_rank(np.hstack(blocks)))

    return DiagnosticsReport(
        stage_system_margins=margins,
        min_stage_system_margin=min(margins),
        controllability_rank=ctrb_rank,
        is_controllable=ctrb_rank == n,
        max_spectral_norm=nash.max_spectral_norm,
        is_norm_contractive=nash.max_spectral_norm < 1.0,
        max_spectral_radius=nash.max_spectral_radius,
        is_schur_stable=nash.max_spectral_radius < 1.0,
    )
