"""Seeded, counter-based random streams.

Every stochastic routine in the package draws from a Philox stream keyed
by ``(seed, stream index)``. Philox is counter-based, so a given key yields
the same bits on every platform, and independent chains get disjoint keys
instead of sharing one sequential state.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Return the generator for stream ``index`` of ``seed``."""
    key = (int(seed) & _MASK64) | ((int(index) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def box_muller(gen: np.random.Generator, shape) -> np.ndarray:
    """Standard normal variates from pairs of uniforms."""
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    n = int(np.prod(shape, dtype=np.int64))
    half = (n + 1) // 2
    u = gen.random((2, half))
    # 1 - u lies in (0, 1], keeping the log finite
    r = np.sqrt(-2.0 * np.log1p(-u[0]))
    theta = 2.0 * np.pi * u[1]
    z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])
    return z[:n].reshape(shape)


def partial_shuffle(gen: np.random.Generator, n_total: int, n_pick: int) -> np.ndarray:
    """First ``n_pick`` entries of a Fisher-Yates shuffle of ``range(n_total)``."""
    perm = np.arange(n_total)
    n_pick = min(n_pick, n_total)
    offsets = gen.integers(0, n_total - np.arange(n_pick))
    for i, off in enumerate(offsets):
        j = i + int(off)
        perm[i], perm[j] = perm[j], perm[i]
    return perm[:n_pick].copy()
