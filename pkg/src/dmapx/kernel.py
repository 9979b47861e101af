"""Gaussian affinities and the kernel density sums built from them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .dataset import PointCloud
from .errors import CapacityError, DegenerateCloudError
from .rng import stream

DEFAULT_MEMORY_BUDGET = 2 * 1024**3  # bytes for one dense N x N float64 matrix


@dataclass(frozen=True)
class KernelParams:
    """Bandwidth ``epsilon`` (squared length) and optional truncation radius squared."""

    epsilon: float
    cutoff_r2: Optional[float] = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        # only entries below exp(-9) may be dropped
        if self.cutoff_r2 is not None and self.cutoff_r2 < 18.0 * self.epsilon:
            raise ValueError(f"cutoff_r2 must be >= 18*epsilon = {18.0 * self.epsilon}")


@dataclass(frozen=True)
class KernelMatrix:
    K: np.ndarray
    epsilon: float

    @property
    def n(self) -> int:
        return self.K.shape[0]


@dataclass(frozen=True)
class DensityEstimate:
    q: np.ndarray


def squared_distances(cloud: PointCloud) -> np.ndarray:
    """Dense symmetric matrix of squared distances (each pair computed once)."""
    if cloud.n == 1:
        return np.zeros((1, 1))
    return squareform(pdist(cloud.points, "sqeuclidean"))


def gaussian_kernel_matrix(
    cloud: PointCloud, params: KernelParams, memory_budget: int = DEFAULT_MEMORY_BUDGET
) -> KernelMatrix:
    """``K_ij = exp(-|x_i - x_j|^2 / (2 epsilon))``.

    Entries beyond ``params.cutoff_r2`` are set to exactly zero. The
    ``1/sqrt(2 pi epsilon)^d`` prefactor is omitted; it cancels in every
    normalisation built on ``K``.
    """
    need = 8 * cloud.n * cloud.n
    if need > memory_budget:
        raise CapacityError(
            f"a dense {cloud.n}x{cloud.n} kernel needs {need / 2**20:.0f} MiB, over the "
            f"{memory_budget / 2**20:.0f} MiB budget; subsample the cloud or raise the budget"
        )
    D2 = squared_distances(cloud)
    K = np.exp(D2 / (-2.0 * params.epsilon))
    if params.cutoff_r2 is not None:
        K[D2 > params.cutoff_r2] = 0.0
    np.fill_diagonal(K, 1.0)
    K.setflags(write=False)
    return KernelMatrix(K, float(params.epsilon))


def density_estimate(km: KernelMatrix) -> DensityEstimate:
    """Row sums ``q_i = sum_j K_ij``, the unnormalised kernel density at each point."""
    q = np.sum(km.K, axis=1)
    q.setflags(write=False)
    return DensityEstimate(q)


def epsilon_heuristic(cloud: PointCloud, seed: int = 0, n_pairs: int = 10_000) -> float:
    """Bandwidth at which the median pair has affinity 0.1.

    Takes the median squared distance over all pairs (or ``n_pairs`` seeded
    random pairs for large clouds) and divides by ``2 ln 10``.
    """
    n = cloud.n
    if n < 2:
        raise ValueError("epsilon_heuristic needs at least two points")
    pts = cloud.points
    if n * (n - 1) // 2 <= n_pairs:
        d2 = pdist(pts, "sqeuclidean")
    else:
        gen = stream(seed)
        i = gen.integers(0, n, n_pairs)
        j = (i + gen.integers(1, n, n_pairs)) % n
        d2 = np.sum((pts[i] - pts[j]) ** 2, axis=1)
    med = float(np.median(d2))
    if med == 0.0:
        raise DegenerateCloudError("median pairwise distance is zero (points are identical)")
    return med / (2.0 * np.log(10.0))
