"""Clustering and summary statistics on diffusion-map coordinates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import InsufficientDataError
from .kernel import DensityEstimate
from .rng import stream


def sign_cluster(psi) -> np.ndarray:
    """Label 1 where ``psi > 0`` and 0 elsewhere (exact zeros included)."""
    psi = np.asarray(psi, dtype=float)
    if not np.all(np.isfinite(psi)):
        raise ValueError("psi must be finite")
    return (psi > 0).astype(np.int64)


@dataclass
class ConfusionReport:
    errors: int
    permutation: Dict[int, int]
    per_class_counts: np.ndarray  # rows: predicted label, columns: true label

    @property
    def misclassified(self) -> int:
        return self.errors

    def to_json(self) -> dict:
        return {
            "errors": int(self.errors),
            "permutation": {str(k): int(v) for k, v in self.permutation.items()},
            "per_class_counts": self.per_class_counts.tolist(),
        }


def confusion_report(pred, truth) -> ConfusionReport:
    """Misclassification count minimised over relabelings of ``pred``.

    ``permutation`` maps each predicted label to the true label it is
    matched with.
    """
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape:
        raise ValueError(f"pred and truth differ in shape: {pred.shape} vs {truth.shape}")
    if pred.size and (pred.min() < 0 or truth.min() < 0):
        raise ValueError("labels must be nonnegative")
    k = int(max(pred.max(initial=-1), truth.max(initial=-1))) + 1
    if k > 6:
        raise ValueError("confusion_report supports at most 6 labels")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (pred, truth), 1)
    best, best_perm = None, None
    for perm in itertools.permutations(range(k)):
        hits = sum(counts[p, perm[p]] for p in range(k))
        err = pred.size - hits
        if best is None or err < best:
            best, best_perm = err, perm
    return ConfusionReport(int(best), {p: int(best_perm[p]) for p in range(k)}, counts)


@dataclass
class QuadraticFit:
    a: float
    b: float
    c: float
    r2: float
    n_used: int

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "r2": self.r2, "n_used": self.n_used}


def density_trim_mask(density, trim_q: float) -> np.ndarray:
    """Boolean mask dropping the ``floor(trim_q * N)`` lowest-density points."""
    if not 0 <= trim_q < 0.5:
        raise ValueError("trim_q must lie in [0, 0.5)")
    q = np.asarray(density.q if isinstance(density, DensityEstimate) else density, dtype=float)
    keep = np.ones(q.size, dtype=bool)
    keep[np.argsort(q, kind="stable")[: int(np.floor(trim_q * q.size))]] = False
    return keep


def quadratic_fit_r2(u, v, trim_q: float = 0.0, density=None) -> QuadraticFit:
    """Least-squares fit ``v ~ a u^2 + b u + c`` after trimming sparse points."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError("u and v must have the same shape")
    if not 0 <= trim_q < 0.5:
        raise ValueError("trim_q must lie in [0, 0.5)")
    keep = np.ones(u.size, dtype=bool) if density is None else density_trim_mask(density, trim_q)
    u, v = u[keep], v[keep]
    if u.size < 10:
        raise InsufficientDataError(f"only {u.size} points left after trimming; need at least 10")
    # centre and scale u so the design matrix is well conditioned
    mu, sd = u.mean(), u.std() or 1.0
    t = (u - mu) / sd
    X = np.column_stack([t * t, t, np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(X, v, rcond=None)
    resid = v - X @ coef
    ss_tot = np.sum((v - v.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    # back to the original parametrisation
    a = coef[0] / sd**2
    b = coef[1] / sd - 2 * coef[0] * mu / sd**2
    c = coef[0] * mu**2 / sd**2 - coef[1] * mu / sd + coef[2]
    return QuadraticFit(float(a), float(b), float(c), float(r2), int(u.size))


@dataclass
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    degenerate: bool = False
    restart: int = field(default=0)


def _kmeanspp(X, k, gen):
    n = X.shape[0]
    centers = [X[gen.integers(n)]]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = gen.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(d2), gen.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers.append(X[idx])
        d2 = np.minimum(d2, np.sum((X - X[idx]) ** 2, axis=1))
    return np.array(centers)


def _lloyd(X, centers, max_iter):
    for _ in range(max_iter):
        dist = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        labels = np.argmin(dist, axis=1)
        new = centers.copy()
        for j in range(centers.shape[0]):
            members = X[labels == j]
            if len(members):
                new[j] = members.mean(axis=0)
        if np.array_equal(new, centers):
            break
        centers = new
    dist = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    labels = np.argmin(dist, axis=1)
    inertia = float(np.sum(dist[np.arange(X.shape[0]), labels]))
    return labels, centers, inertia


def kmeans(coords, k: int, seed: int = 0, n_init: int = 50, max_iter: int = 300) -> KMeansResult:
    """Lloyd's algorithm with k-means++ seeding, best of ``n_init`` restarts.

    Restart ``r`` seeds from stream ``(seed, r)``; ties in inertia go to the
    lowest restart. An all-identical input returns a single cluster with
    ``degenerate=True``.
    """
    X = np.asarray(coords, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= N = {n}")
    if np.all(X == X[0]):
        return KMeansResult(np.zeros(n, dtype=np.int64), X[:1].copy(), 0.0, degenerate=True)
    best: Optional[KMeansResult] = None
    for r in range(n_init):
        labels, centers, inertia = _lloyd(X, _kmeanspp(X, k, stream(seed, r)), max_iter)
        if best is None or inertia < best.inertia:
            best = KMeansResult(labels.astype(np.int64), centers, inertia, restart=r)
    return best


def purity(pred, truth) -> float:
    """Fraction of points whose cluster's majority true label equals their own."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    total = 0
    for c in np.unique(pred):
        _, counts = np.unique(truth[pred == c], return_counts=True)
        total += counts.max()
    return total / pred.size
