"""Deterministic random-number plumbing.

All randomness in the library flows through a counter-based generator
(Philox) keyed by explicit 64-bit seed tokens.  Streams are split with
``derive_seed``, a stable hash of a base seed and integer indices, so
trial-level parallelism can never change results.  Normal variates are
produced by a Box-Muller transform of uniform draws; the number of raw
draws per request is fixed (no rejection sampling).
"""

from __future__ import annotations

import numpy as np

__all__ = ["derive_seed", "make_generator", "standard_normals"]


def derive_seed(base_seed: int, *indices: int) -> int:
    """Hash ``base_seed`` and a tuple of stream indices into a 64-bit token."""
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=tuple(int(i) for i in indices))
    return int(ss.generate_state(1, np.uint64)[0])


def make_generator(seed: int) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed token."""
    key = np.random.SeedSequence(entropy=int(seed)).generate_state(2, np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def standard_normals(gen: np.random.Generator, count: int) -> np.ndarray:
    """``count`` i.i.d. standard normals via Box-Muller.

    Consumes exactly ``2 * ceil(count / 2)`` uniforms regardless of the
    values drawn, keeping the draw budget per call fixed.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return np.empty(0)
    npairs = (count + 1) // 2
    u = gen.random((npairs, 2))
    # 1 - u lies in (0, 1], avoiding log(0).
    r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    theta = 2.0 * np.pi * u[:, 1]
    z = np.empty(2 * npairs)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:count]
