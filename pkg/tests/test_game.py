from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqgames import (
    DimensionMismatch,
    GameSpec,
    IndefiniteWeight,
    SingularStageSystem,
    Trajectory,
    check_assumptions,
    evaluate_cost,
    nominal_rollout,
    solve_feedback_nash,
)
from lqgames.benchmark import DEMO_X0, benchmark_game

from conftest import random_game


def one_player_best_response(spec, nash, player: int):
    """Independent oracle: freeze the opponent's gains and run the standard
    single-player time-varying Riccati recursion on the drifted system."""
    if player == 1:
        B, Q, QN, R = spec.B1, spec.Q1, spec.Q1N, spec.R1
        K_other, B_other = nash.K2, spec.B2
    else:
        B, Q, QN, R = spec.B2, spec.Q2, spec.Q2N, spec.R2
        K_other, B_other = nash.K1, spec.B1
    P = QN.copy()
    K_br = [None] * spec.N
    for k in range(spec.N - 1, -1, -1):
        Ad = spec.A - B_other @ K_other[k]
        K_br[k] = np.linalg.solve(R + B.T @ P @ B, B.T @ P @ Ad)
        Ac = Ad - B @ K_br[k]
        P = Q + K_br[k].T @ R @ K_br[k] + Ac.T @ P @ Ac
        P = 0.5 * (P + P.T)
    return K_br


class TestGameSpecValidation:
    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            benchmark = benchmark_game()
            GameSpec(A=benchmark.A, B1=benchmark.B1[:, :2], B2=benchmark.B2,
                     Q1=benchmark.Q1, Q2=benchmark.Q2, Q1N=benchmark.Q1N,
                     Q2N=benchmark.Q2N, R1=benchmark.R1, R2=benchmark.R2,
                     N=9, x0=np.zeros(3))

    def test_x0_length_checked(self):
        b = benchmark_game()
        with pytest.raises(DimensionMismatch):
            GameSpec(A=b.A, B1=b.B1, B2=b.B2, Q1=b.Q1, Q2=b.Q2, Q1N=b.Q1N,
                     Q2N=b.Q2N, R1=b.R1, R2=b.R2, N=9, x0=np.zeros(4))

    def test_indefinite_state_weight_rejected(self):
        b = benchmark_game()
        Q_bad = np.array([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
        with pytest.raises(IndefiniteWeight):
            GameSpec(A=b.A, B1=b.B1, B2=b.B2, Q1=Q_bad, Q2=b.Q2, Q1N=b.Q1N,
                     Q2N=b.Q2N, R1=b.R1, R2=b.R2, N=9, x0=np.zeros(3))

    def test_semidefinite_control_weight_rejected(self):
        b = benchmark_game()
        with pytest.raises(IndefiniteWeight):
            GameSpec(A=b.A, B1=b.B1, B2=b.B2, Q1=b.Q1, Q2=b.Q2, Q1N=b.Q1N,
                     Q2N=b.Q2N, R1=np.zeros((3, 3)), R2=b.R2, N=9, x0=np.zeros(3))

    def test_nonpositive_horizon_rejected(self):
        b = benchmark_game()
        with pytest.raises(DimensionMismatch):
            GameSpec(A=b.A, B1=b.B1, B2=b.B2, Q1=b.Q1, Q2=b.Q2, Q1N=b.Q1N,
                     Q2N=b.Q2N, R1=b.R1, R2=b.R2, N=0, x0=np.zeros(3))


class TestSolveFeedbackNash:
    def test_benchmark_spectral_radius(self, bench_nash):
        assert 0.34 <= bench_nash.max_spectral_radius <= 0.38

    def test_terminal_values_exact(self, bench_spec, bench_nash):
        assert np.array_equal(bench_nash.P1[bench_spec.N], bench_spec.Q1N)
        assert np.array_equal(bench_nash.P2[bench_spec.N], bench_spec.Q2N)

    def test_value_matrices_symmetric_psd(self, bench_nash):
        for P in bench_nash.P1 + bench_nash.P2:
            assert np.array_equal(P, P.T)
            scale = np.linalg.norm(P, 2)
            assert np.linalg.eigvalsh(P).min() >= -1e-9 * max(scale, 1.0)

    def test_closed_loop_reconstruction_bitwise(self, bench_spec, bench_nash):
        for k in range(bench_spec.N):
            expected = bench_spec.A - bench_spec.B1 @ bench_nash.K1[k] \
                - bench_spec.B2 @ bench_nash.K2[k]
            assert np.array_equal(bench_nash.Acl[k], expected)

    def test_stagewise_stationarity_residual(self, bench_spec, bench_nash):
        s = bench_spec
        for k in range(s.N):
            P1n, P2n = bench_nash.P1[k + 1], bench_nash.P2[k + 1]
            S = np.block([
                [s.R1 + s.B1.T @ P1n @ s.B1, s.B1.T @ P1n @ s.B2],
                [s.B2.T @ P2n @ s.B1, s.R2 + s.B2.T @ P2n @ s.B2],
            ])
            Y = np.vstack([s.B1.T @ P1n @ s.A, s.B2.T @ P2n @ s.A])
            K = np.vstack([bench_nash.K1[k], bench_nash.K2[k]])
            scale = np.linalg.norm(S, 2) * max(np.linalg.norm(K, 2), 1.0)
            assert np.linalg.norm(S @ K - Y, 2) <= 1e-10 * scale

    def test_zero_weights_give_zero_gains(self):
        spec = GameSpec(A=np.diag([0.5, 0.3]), B1=np.eye(2), B2=np.eye(2),
                        Q1=np.zeros((2, 2)), Q2=np.zeros((2, 2)),
                        Q1N=np.zeros((2, 2)), Q2N=np.zeros((2, 2)),
                        R1=np.eye(2), R2=np.eye(2), N=1, x0=np.zeros(2))
        nash = solve_feedback_nash(spec)
        assert np.array_equal(nash.K1[0], np.zeros((2, 2)))
        assert np.array_equal(nash.K2[0], np.zeros((2, 2)))

    def test_best_response_recovers_gains_benchmark(self, bench_spec, bench_nash):
        for player, gains in ((1, bench_nash.K1), (2, bench_nash.K2)):
            K_br = one_player_best_response(bench_spec, bench_nash, player)
            for k in range(bench_spec.N):
                assert np.max(np.abs(K_br[k] - gains[k])) <= 1e-8

    def test_best_response_recovers_gains_random(self):
        rng = np.random.default_rng(2101)
        for _ in range(10):
            spec = random_game(rng, n=rng.integers(2, 4), m1=rng.integers(1, 3),
                               m2=rng.integers(1, 3), N=int(rng.integers(2, 7)))
            nash = solve_feedback_nash(spec)
            for player, gains in ((1, nash.K1), (2, nash.K2)):
                K_br = one_player_best_response(spec, nash, player)
                for k in range(spec.N):
                    assert np.max(np.abs(K_br[k] - gains[k])) <= 1e-8

    def test_singular_stage_system_detected(self):
        # Nearly rank-one stage system: huge terminal weights against
        # a control penalty sitting just above the definiteness floor.
        spec = GameSpec(A=np.array([[1.0]]), B1=np.array([[1.0]]),
                        B2=np.array([[1.0]]),
                        Q1=np.zeros((1, 1)), Q2=np.zeros((1, 1)),
                        Q1N=np.array([[100.0]]), Q2N=np.array([[100.0]]),
                        R1=np.array([[2e-12]]), R2=np.array([[2e-12]]),
                        N=1, x0=np.zeros(1))
        with pytest.raises(SingularStageSystem) as exc:
            solve_feedback_nash(spec)
        assert exc.value.stage == 0


class TestUnilateralDeviation:
    def test_perturbed_player1_never_profits(self, bench_nash):
        spec = benchmark_game(x0=DEMO_X0)
        nash_cost = evaluate_cost(nominal_rollout(spec, bench_nash), spec, 1)
        rng = np.random.default_rng(77)
        for _ in range(100):
            K1p = [K + rng.normal(scale=0.1, size=K.shape) for K in bench_nash.K1]
            x = spec.x0.copy()
            states, u1, u2 = [x], [], []
            for k in range(spec.N):
                u1.append(-K1p[k] @ x)
                u2.append(-bench_nash.K2[k] @ x)
                x = spec.A @ x + spec.B1 @ u1[-1] + spec.B2 @ u2[-1]
                states.append(x)
            cost = evaluate_cost(Trajectory(states=states, u1=u1, u2=u2), spec, 1)
            assert cost >= nash_cost - 1e-9 * max(1.0, nash_cost)


class TestNominalRollout:
    def test_zero_initial_state(self, bench_spec, bench_nash):
        traj = nominal_rollout(bench_spec, bench_nash)
        assert all(np.array_equal(x, np.zeros(3)) for x in traj.states)
        assert all(np.array_equal(u, np.zeros(3)) for u in traj.u1 + traj.u2)

    def test_unit_vector_propagation(self):
        spec = benchmark_game(x0=np.array([1.0, 0.0, 0.0]), N=1)
        nash = solve_feedback_nash(spec)
        traj = nominal_rollout(spec, nash)
        assert np.allclose(traj.states[1], nash.Acl[0][:, 0], rtol=0, atol=0)

    def test_demo_trajectory_decays(self, bench_nash):
        spec = benchmark_game(x0=DEMO_X0)
        assert bench_nash.max_spectral_norm < 1.0
        traj = nominal_rollout(spec, bench_nash)
        assert np.linalg.norm(traj.states[spec.N]) < np.linalg.norm(traj.states[0])

    def test_rollout_cost_matches_value_function(self, bench_nash):
        spec = benchmark_game(x0=DEMO_X0)
        traj = nominal_rollout(spec, bench_nash)
        for player, P in ((1, bench_nash.P1[0]), (2, bench_nash.P2[0])):
            expected = float(spec.x0 @ P @ spec.x0)
            got = evaluate_cost(traj, spec, player)
            assert abs(got - expected) <= 1e-8 * max(1.0, abs(expected))


class TestEvaluateCost:
    def test_zero_trajectory(self, bench_spec, bench_nash):
        traj = nominal_rollout(bench_spec, bench_nash)
        assert evaluate_cost(traj, bench_spec, 1) == 0.0
        assert evaluate_cost(traj, bench_spec, 2) == 0.0

    def test_single_stage_closed_form(self):
        spec = benchmark_game(x0=DEMO_X0, N=1)
        x0 = spec.x0
        traj = Trajectory(states=[x0, spec.A @ x0],
                          u1=[np.zeros(3)], u2=[np.zeros(3)])
        expected = x0 @ spec.Q1 @ x0 + (spec.A @ x0) @ spec.Q1N @ (spec.A @ x0)
        assert np.isclose(evaluate_cost(traj, spec, 1), expected, rtol=1e-14)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_matches_scalar_loop_oracle(self, seed):
        rng = np.random.default_rng(seed)
        spec = random_game(rng, n=2, m1=2, m2=2, N=4)
        nash = solve_feedback_nash(spec)
        traj = nominal_rollout(spec, nash)
        for player in (1, 2):
            Q = spec.Q1 if player == 1 else spec.Q2
            QN = spec.Q1N if player == 1 else spec.Q2N
            R = spec.R1 if player == 1 else spec.R2
            u = traj.u1 if player == 1 else traj.u2
            total = 0.0
            for k in range(spec.N):
                for i in range(2):
                    for j in range(2):
                        total += traj.states[k][i] * Q[i, j] * traj.states[k][j]
                        total += u[k][i] * R[i, j] * u[k][j]
            for i in range(2):
                for j in range(2):
                    total += traj.states[-1][i] * QN[i, j] * traj.states[-1][j]
            got = evaluate_cost(traj, spec, player)
            assert abs(got - total) <= 1e-12 * max(1.0, abs(total))

    def test_rejects_bad_player(self, bench_spec, bench_nash):
        traj = nominal_rollout(bench_spec, bench_nash)
        with pytest.raises(ValueError):
            evaluate_cost(traj, bench_spec, 3)

    def test_rejects_wrong_length(self, bench_spec, bench_nash):
        traj = nominal_rollout(bench_spec, bench_nash)
        bad = Trajectory(states=traj.states[:-1], u1=traj.u1, u2=traj.u2)
        with pytest.raises(DimensionMismatch):
            evaluate_cost(bad, bench_spec, 1)


class TestCheckAssumptions:
    def test_benchmark_controllable_and_stable(self, bench_spec, bench_nash):
        report = check_assumptions(bench_spec, bench_nash)
        # Oracle: Kalman controllability matrix assembled independently.
        Bbar = np.hstack([bench_spec.B1, bench_spec.B2])
        kalman = np.hstack([Bbar, bench_spec.A @ Bbar,
                            bench_spec.A @ bench_spec.A @ Bbar])
        assert np.linalg.matrix_rank(kalman) == 3
        assert report.controllability_rank == 3
        assert report.is_controllable
        assert report.is_schur_stable
        assert report.is_norm_contractive
        assert report.min_stage_system_margin > 0.0
        assert len(report.stage_system_margins) == bench_spec.N + 1

    def test_uncontrollable_pair_flagged(self):
        spec = GameSpec(A=np.eye(2), B1=np.zeros((2, 1)), B2=np.zeros((2, 1)),
                        Q1=np.eye(2), Q2=np.eye(2), Q1N=np.eye(2), Q2N=np.eye(2),
                        R1=np.eye(1), R2=np.eye(1), N=2, x0=np.zeros(2))
        nash = solve_feedback_nash(spec)
        report = check_assumptions(spec, nash)
        assert report.controllability_rank == 0
        assert not report.is_controllable
        assert not report.is_schur_stable  # identity loop is not a contraction
