"""The alpha-family of diffusion operators on a point cloud.

Starting from a Gaussian kernel ``K`` and its density sums ``q``:

* ``K_alpha = K_ij / (q_i^alpha q_j^alpha)``  (anisotropic kernel)
* ``d = K_alpha 1``                          (degree vector)
* ``M_b = D^-1 K_alpha``                     (row-stochastic, backward operator)
* ``M_s = D^-1/2 K_alpha D^-1/2``            (symmetric conjugate)

``alpha = 0`` is the normalised graph Laplacian, ``alpha = 1/2`` recovers
the backward Fokker-Planck operator of the sampling potential and
``alpha = 1`` the Laplace-Beltrami operator, independent of the density.

Eigenpairs are computed from ``M_s`` (real spectrum, orthonormal vectors)
and mapped back: right eigenvectors of ``M_b`` are ``psi = D^-1/2 v`` and
left eigenvectors are ``phi = D^1/2 v``, scaled so that
``sum_i pi_i psi_a(i) psi_b(i) = delta_ab`` and ``phi_a = pi * psi_a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DisconnectedGraphError, EigensolverError
from .kernel import DensityEstimate, KernelMatrix

DEGENERATE_TOL = 1e-10


@dataclass(frozen=True)
class DiffusionParams:
    alpha: float = 0.5
    k: int = 6
    m: int = 1

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.m < 0 or int(self.m) != self.m:
            raise ValueError("m must be a nonnegative integer")


def check_alpha(alpha: float):
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")


@dataclass(frozen=True)
class MarkovEnsemble:
    K_alpha: np.ndarray
    d: np.ndarray
    M_s: np.ndarray
    pi: np.ndarray
    alpha: float
    epsilon: float

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def backward_matrix(self) -> np.ndarray:
        """Row-stochastic transition matrix ``D^-1 K_alpha``."""
        return self.K_alpha / self.d[:, None]

    def forward_matrix(self) -> np.ndarray:
        """Column-stochastic transpose of the backward matrix; propagates densities."""
        return self.backward_matrix().T

    def apply_backward(self, f: np.ndarray) -> np.ndarray:
        return (self.K_alpha @ f) / (self.d if f.ndim == 1 else self.d[:, None])


def _symmetric(a: np.ndarray) -> np.ndarray:
    out = 0.5 * (a + a.T)
    out.setflags(write=False)
    return out


def anisotropic_normalize(km: KernelMatrix, density: DensityEstimate, alpha: float) -> MarkovEnsemble:
    """Divide ``K`` by ``q^alpha`` at both endpoints, then build the Markov operators.

    Raises
    ------
    DisconnectedGraphError
        If a point has (numerically) no neighbours, i.e. a degree below 1e-300.
    """
    check_alpha(alpha)
    q = np.asarray(density.q, dtype=float)
    if q.shape != (km.n,):
        raise ValueError("density length does not match the kernel")
    if np.any(q <= 0):
        raise ValueError("density estimate must be strictly positive")
    w = q ** (-alpha)
    K_alpha = _symmetric(km.K * w[:, None] * w[None, :])
    d = K_alpha.sum(axis=1)
    if np.any(d < 1e-300):
        bad = int(np.argmin(d))
        raise DisconnectedGraphError(
            f"point {bad} is disconnected/isolated (degree {d[bad]:.3g}); increase epsilon"
        )
    s = 1.0 / np.sqrt(d)
    M_s = _symmetric(K_alpha * s[:, None] * s[None, :])
    pi = d / d.sum()
    for arr in (d, pi):
        arr.setflags(write=False)
    return MarkovEnsemble(K_alpha, d, M_s, pi, float(alpha), km.epsilon)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Top-``k`` eigenpairs, eigenvalues descending.

    ``psi[:, a]`` are right eigenvectors of ``M_b`` (psi_0 == 1), ``phi[:, a]``
    left eigenvectors, ``v[:, a]`` orthonormal eigenvectors of ``M_s``.
    """

    lambdas: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    v: np.ndarray

    @property
    def k(self) -> int:
        return self.lambdas.shape[0]


def _canonical_basis(V: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of span(V) built from projected unit vectors.

    Coordinates are visited in index order; each projection ``V V^T e_i`` is
    Gram-Schmidt orthogonalised against those already accepted.
    """
    r = V.shape[1]
    rows = V  # row i holds the V-coordinates of the projection of e_i
    cutoff = 1e-3 * np.max(np.linalg.norm(rows, axis=1))
    basis = []
    for i in range(V.shape[0]):
        c = rows[i].copy()
        for b in basis:
            c -= (b @ c) * b
        nrm = np.linalg.norm(c)
        if nrm > cutoff:
            basis.append(c / nrm)
            if len(basis) == r:
                break
    B = np.column_stack(basis)
    # one more pass removes the rounding left by classical Gram-Schmidt
    B, _ = np.linalg.qr(B)
    return V @ B


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def spectral_decompose(ens: MarkovEnsemble, k: int) -> SpectralDecomposition:
    """Leading ``k`` eigenpairs of the ensemble, with a deterministic basis and sign.

    Eigenvalues closer than 1e-10 are treated as one eigenspace whose basis is
    fixed by :func:`_canonical_basis`; compare such eigenvectors through their
    projector, not individually.
    """
    n = ens.n
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= N = {n}, got {k}")
    try:
        if k == n:
            lam, v = scipy.linalg.eigh(ens.M_s)
        else:
            lam, v = scipy.linalg.eigh(ens.M_s, subset_by_index=[n - k, n - 1])
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"symmetric eigensolver failed on a {n}x{n} matrix: {exc}") from exc
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(v))):
        raise EigensolverError("eigensolver returned non-finite values")
    order = np.argsort(-lam, kind="stable")
    lam, v = lam[order], v[:, order]

    start = 0
    while start < k:
        stop = start + 1
        while stop < k and lam[stop - 1] - lam[stop] < DEGENERATE_TOL:
            stop += 1
        if stop - start > 1:
            v[:, start:stop] = _canonical_basis(v[:, start:stop])
        start = stop
    v = _fix_signs(v)

    scale = np.sqrt(ens.d.sum() / ens.d)
    psi = v * scale[:, None]
    phi = ens.pi[:, None] * psi
    for arr in (lam, psi, phi, v):
        arr.setflags(write=False)
    return SpectralDecomposition(lam, psi, phi, v)


@dataclass(frozen=True)
class DiffusionEmbedding:
    """``coords[:, j-1] = lambda_j^m psi_j`` for ``j = 1..k-1``."""

    coords: np.ndarray
    lambdas: np.ndarray
    m: int


def embed(dec: SpectralDecomposition, m: int = 1) -> DiffusionEmbedding:
    """Diffusion map at time ``m``; the trivial constant pair is dropped."""
    if m < 0:
        raise ValueError("m must be >= 0")
    lam = dec.lambdas[1:]
    coords = dec.psi[:, 1:] * (lam**m)[None, :]
    return DiffusionEmbedding(coords, dec.lambdas.copy(), int(m))


def diffusion_distance(ens: MarkovEnsemble, dec: SpectralDecomposition, i: int, j: int, m: int) -> float:
    """Distance between points ``i`` and ``j`` after ``m`` steps, from the spectrum.

    Exact when ``dec`` holds all ``N`` eigenpairs; with fewer pairs it is the
    truncated (never larger) approximation.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    for idx in (i, j):
        if not 0 <= idx < ens.n:
            raise IndexError(f"point id {idx} out of range")
    lam = dec.lambdas[1:]
    diff = dec.psi[i, 1:] - dec.psi[j, 1:]
    return float(np.sqrt(np.sum(lam ** (2 * m) * diff**2)))


def apply_discrete_generator(ens: MarkovEnsemble, f, epsilon: float) -> np.ndarray:
    """Finite-bandwidth generator ``(M_b f - f) / (epsilon / 2)``.

    One step of ``M_b`` moves a walker by a Gaussian of variance ``epsilon``
    per coordinate, which is diffusion time ``epsilon / 2`` for the generator
    ``lap f - 2(1 - alpha) grad f . grad U``.
    """
    f = np.asarray(f, dtype=float)
    if f.shape[0] != ens.n:
        raise ValueError(f"f has length {f.shape[0]}, expected {ens.n}")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    # sum_j M_ij (f_j - f_i): exactly zero on constants, no cancellation against f
    out = np.empty(ens.n)
    for lo in range(0, ens.n, 512):
        hi = min(lo + 512, ens.n)
        rows = ens.K_alpha[lo:hi]
        out[lo:hi] = np.sum(rows * (f[None, :] - f[lo:hi, None]), axis=1) / ens.d[lo:hi]
    return out * (2.0 / epsilon)
