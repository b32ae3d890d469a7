#!/usr/bin/env python3
"""Scan the peak state-covariance trace across persistence values.

The analytic recursion is exactly quadratic in sigma0, so at fixed sigma0
the scan characterizes how temporal correlation shapes the deviation
energy over the horizon.  Optionally locates the persistence value whose
peak trace matches a target (bisection on each monotone branch).

Usage:
    python scripts/persistence_scan.py [--sigma0 0.15] [--target 9.802e-3]
"""

from __future__ import annotations

import argparse

import numpy as np

from lqgames import Ar1Params, benchmark_game, propagate_moments, solve_feedback_nash


def peak_trace(nash, rho: float, sigma0: float, N: int) -> float:
    params = Ar1Params(rho=rho, sigma0=sigma0, m2=3)
    return max(propagate_moments(nash, params, N).trace_Sigma)


def bisect(f, lo, hi, tol=1e-12):
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) < tol or hi - lo < 1e-14:
            return mid
        if flo * fm <= 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sigma0", type=float, default=0.15)
    ap.add_argument("--target", type=float, default=None,
                    help="locate rho whose peak trace equals this value")
    args = ap.parse_args()

    spec = benchmark_game()
    nash = solve_feedback_nash(spec)

    print(f"# peak_k tr(Sigma_k) at sigma0 = {args.sigma0}")
    print("rho      peak_trace")
    grid = list(np.round(np.arange(0.0, 1.0, 0.05), 2)) + [0.99]
    values = {}
    for rho in grid:
        values[rho] = peak_trace(nash, rho, args.sigma0, spec.N)
        print(f"{rho:0.2f}   {values[rho]:.6e}")
    peak_rho = max(values, key=values.get)
    print(f"# maximum over the scan at rho = {peak_rho:0.2f} "
          f"({values[peak_rho]:.6e}); the drop toward rho -> 1 is the "
          f"variance warm-up effect of the variance-preserving scaling")

    if args.target is not None:
        f = lambda r: peak_trace(nash, r, args.sigma0, spec.N) - args.target
        hits = []
        for lo, hi in ((0.0, peak_rho), (peak_rho, 0.999999)):
            root = bisect(f, lo, hi)
            if root is not None:
                hits.append(root)
        if hits:
            for r in hits:
                print(f"# peak trace equals {args.target:.6e} at rho = {r:.6f}")
        else:
            print(f"# no rho in [0, 1) reaches {args.target:.6e} at "
                  f"sigma0 = {args.sigma0}")


if __name__ == "__main__":
    main()
