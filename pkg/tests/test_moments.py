from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqgames import (
    Ar1Params,
    DimensionMismatch,
    InvalidParams,
    MomentSeries,
    NashSolution,
    bound_certificate,
    propagate_moments,
    quadratic_scaling_table,
    solve_feedback_nash,
)
from conftest import random_game


def stub_solution(acl_value: float, b2_value: float = 1.0) -> NashSolution:
    """Scalar single-stage solution with a prescribed closed-loop norm."""
    I1 = np.eye(1)
    return NashSolution(K1=[np.zeros((1, 1))], K2=[np.zeros((1, 1))],
                        P1=[I1, I1], P2=[I1, I1],
                        Acl=[np.array([[acl_value]])],
                        B1=I1.copy(), B2=np.array([[b2_value]]), R1=I1.copy(),
                        max_spectral_radius=abs(acl_value),
                        max_spectral_norm=abs(acl_value),
                        min_stage_solve_conditioning=1.0)


class TestPropagateMoments:
    def test_initial_conditions(self, bench_nash, trace_params, bench_spec):
        series = propagate_moments(bench_nash, trace_params, bench_spec.N)
        assert np.array_equal(series.Sigma[0], np.zeros((3, 3)))
        assert np.array_equal(series.C[0], np.zeros((3, 3)))
        assert np.array_equal(series.Phi[0], np.zeros((3, 3)))
        assert len(series.Sigma) == bench_spec.N + 1

    def test_sigma_symmetric_psd(self, trace_moments):
        for S in trace_moments.Sigma:
            assert np.array_equal(S, S.T)
            scale = max(np.linalg.norm(S, 2), 1.0)
            assert np.linalg.eigvalsh(S).min() >= -1e-9 * scale

    def test_degenerate_scale_gives_zero_moments(self, bench_nash, bench_spec):
        params = Ar1Params(rho=0.5, sigma0=1e-300, m2=3)
        series = propagate_moments(bench_nash, params, bench_spec.N)
        assert all(np.max(np.abs(S)) == 0.0 for S in series.Sigma)
        assert all(np.max(np.abs(C)) == 0.0 for C in series.C)

    def test_white_noise_annihilates_cross_covariance(self, bench_nash, bench_spec):
        params = Ar1Params(rho=0.0, sigma0=0.3, m2=3)
        series = propagate_moments(bench_nash, params, bench_spec.N)
        assert all(np.array_equal(C, np.zeros((3, 3))) for C in series.C)
        # Memoryless Lyapunov oracle for k >= 1.
        B2 = bench_nash.B2
        S = np.zeros((3, 3))
        for k in range(bench_spec.N):
            phi = params.sigma0**2 * (0.0 if k == 0 else 1.0)
            S = bench_nash.Acl[k] @ S @ bench_nash.Acl[k].T + phi * B2 @ B2.T
            assert np.allclose(series.Sigma[k + 1], S, rtol=1e-12, atol=1e-300)

    def test_horizon_must_be_covered(self, bench_nash):
        with pytest.raises(DimensionMismatch):
            propagate_moments(bench_nash, Ar1Params(rho=0.5, sigma0=1.0, m2=3), 10)

    def test_channel_count_checked(self, bench_nash, bench_spec):
        with pytest.raises(DimensionMismatch):
            propagate_moments(bench_nash, Ar1Params(rho=0.5, sigma0=1.0, m2=2),
                              bench_spec.N)

    def test_doubling_scale_quadruples_moments_bitwise(self, bench_nash, bench_spec):
        a = propagate_moments(bench_nash, Ar1Params(rho=0.5, sigma0=0.06, m2=3),
                              bench_spec.N)
        b = propagate_moments(bench_nash, Ar1Params(rho=0.5, sigma0=0.12, m2=3),
                              bench_spec.N)
        for Sa, Sb in zip(a.Sigma, b.Sigma):
            assert np.array_equal(4.0 * Sa, Sb)
        for Ca, Cb in zip(a.C, b.C):
            assert np.array_equal(4.0 * Ca, Cb)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), alpha=st.floats(0.1, 10.0),
           rho=st.floats(0.0, 0.95))
    def test_general_quadratic_scaling(self, seed, alpha, rho):
        rng = np.random.default_rng(seed)
        spec = random_game(rng, n=2, m1=2, m2=2, N=4)
        nash = solve_feedback_nash(spec)
        s0 = 0.3
        a = propagate_moments(nash, Ar1Params(rho=rho, sigma0=s0, m2=2), 4)
        b = propagate_moments(nash, Ar1Params(rho=rho, sigma0=alpha * s0, m2=2), 4)
        for Sa, Sb in zip(a.Sigma, b.Sigma):
            assert np.allclose(alpha**2 * Sa, Sb,
                               rtol=1e-12, atol=1e-12 * max(np.max(np.abs(Sb)), 1e-30))
        for Ca, Cb in zip(a.C, b.C):
            assert np.allclose(alpha**2 * Ca, Cb,
                               rtol=1e-12, atol=1e-12 * max(np.max(np.abs(Cb)), 1e-30))


class TestScalingTable:
    def test_benchmark_ratios_are_exact_squares(self, bench_nash):
        rows = quadratic_scaling_table(bench_nash, 0.5, [0.15, 0.30, 0.45, 0.60])
        ratios = [r.ratio_to_baseline for r in rows]
        assert abs(ratios[0] - 1.0) <= 1e-10
        assert abs(ratios[1] - 4.0) <= 1e-10
        assert abs(ratios[2] - 9.0) <= 1e-10
        assert abs(ratios[3] - 16.0) <= 1e-10

    def test_ratios_independent_of_persistence(self, bench_nash):
        for rho in (0.0, 0.3, 0.9):
            rows = quadratic_scaling_table(bench_nash, rho, [0.1, 0.2])
            assert abs(rows[1].ratio_to_baseline - 4.0) <= 1e-10

    def test_single_entry(self, bench_nash):
        rows = quadratic_scaling_table(bench_nash, 0.5, [0.15])
        assert len(rows) == 1 and rows[0].ratio_to_baseline == 1.0

    def test_rejects_bad_grids(self, bench_nash):
        with pytest.raises(InvalidParams):
            quadratic_scaling_table(bench_nash, 0.5, [])
        with pytest.raises(InvalidParams):
            quadratic_scaling_table(bench_nash, 0.5, [0.3, 0.2])

    def test_peak_trace_rises_through_moderate_persistence(self, bench_nash):
        """Peak covariance grows with persistence up to rho = 0.8; at 0.9 the
        short horizon cuts off the variance warm-up and the peak drops.
        The full-grid monotonicity claim fails there, by a genuine property
        of the variance-preserving parameterization on this horizon."""
        peaks = {}
        for rho in (0.0, 0.2, 0.4, 0.6, 0.8, 0.9):
            rows = quadratic_scaling_table(bench_nash, rho, [0.06])
            peaks[rho] = rows[0].max_trace_Sigma
        grid = [0.0, 0.2, 0.4, 0.6, 0.8]
        assert all(peaks[b] >= peaks[a] for a, b in zip(grid, grid[1:]))
        assert peaks[0.9] < peaks[0.8]  # documented warm-up effect


class TestBoundCertificate:
    def test_white_noise_constants(self, bench_nash, bench_spec):
        params = Ar1Params(rho=0.0, sigma0=0.06, m2=3)
        series = propagate_moments(bench_nash, params, bench_spec.N)
        cert = bound_certificate(bench_nash, params, series)
        beta = bench_nash.max_spectral_norm
        assert cert.C1 == 0.0
        assert np.isclose(cert.C2,
                          np.linalg.norm(bench_nash.B2, 2) ** 2 / (1 - beta**2),
                          rtol=1e-14)

    def test_fixed_constant_arithmetic(self):
        # beta = 0.5, c = 1, rho = 0.8, ||B2|| = 1.
        nash = stub_solution(0.5)
        params = Ar1Params(rho=0.8, sigma0=1.0, m2=1)
        series = propagate_moments(nash, params, 1)
        cert = bound_certificate(nash, params, series)
        assert np.isclose(cert.C1, 4.0 / 3.0, rtol=1e-14)
        assert np.isclose(cert.C2, 28.0 / 9.0, rtol=1e-14)

    def test_benchmark_certificate_holds(self, bench_nash, trace_params,
                                         trace_moments):
        cert = bound_certificate(bench_nash, trace_params, trace_moments)
        assert cert.valid and cert.bound_holds
        limit = cert.C2 * trace_params.sigma0**2
        for S in trace_moments.Sigma:
            assert np.linalg.norm(S, 2) <= limit

    def test_expanding_loop_reported_invalid(self):
        nash = stub_solution(1.1)
        params = Ar1Params(rho=0.5, sigma0=1.0, m2=1)
        series = propagate_moments(nash, params, 1)
        cert = bound_certificate(nash, params, series)
        assert not cert.valid
        assert cert.bound_holds is None
        assert "1" in cert.reason
