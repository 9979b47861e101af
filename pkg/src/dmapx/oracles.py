"""Closed-form reference results used as ground truth.

Everything here is independent of the discrete pipeline in
:mod:`dmapx.diffusion`: analytic spectra and eigenfunctions of the
Ornstein-Uhlenbeck case, the two-well approximation, the limiting
generators of the alpha-family, and a brute-force eigenvalue routine for
small matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import hermite as _herm

from .errors import UnsupportedInputError
from .potentials import PotentialSpec, evaluate


@dataclass(frozen=True)
class OUParams:
    tau: float
    epsilon: float

    def __post_init__(self):
        if not (self.tau > 0 and self.epsilon > 0):
            raise ValueError("tau and epsilon must be positive")


# -- Ornstein-Uhlenbeck -----------------------------------------------------


def ou_spectrum(p: OUParams, kmax: int) -> List[float]:
    """``(tau / (tau + epsilon))^k`` for ``k = 0..kmax-1``."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    mu = p.tau / (p.tau + p.epsilon)
    return [mu**k for k in range(kmax)]


def ou_kernel_density(p: OUParams, x) -> np.ndarray:
    """Continuum ``p_epsilon`` for N(0, tau) data and a unit-mass Gaussian kernel."""
    s = p.tau + p.epsilon
    x = np.asarray(x, dtype=float)
    return np.exp(-(x**2) / (2 * s)) / np.sqrt(2 * np.pi * s)


def ou_eigenfunction(p: OUParams, k: int, x, kind: str = "symmetric") -> np.ndarray:
    """Unnormalised eigenfunction ``k`` (0 or 1) of the finite-epsilon OU operators.

    ``kind`` selects the symmetric operator (``x^k exp(-x^2 / 4(tau+eps))``),
    the backward one (divide by ``sqrt(p_eps)``: ``1`` and ``x``) or the
    forward one (multiply by ``sqrt(p_eps)``).
    """
    if k not in (0, 1):
        raise UnsupportedInputError("closed forms are only available for k = 0 and k = 1")
    x = np.asarray(x, dtype=float)
    s = p.tau + p.epsilon
    poly = np.ones_like(x) if k == 0 else x
    if kind == "symmetric":
        return poly * np.exp(-(x**2) / (4 * s))
    if kind == "backward":
        return poly
    if kind == "forward":
        return poly * np.exp(-(x**2) / (2 * s))
    raise ValueError(f"kind must be symmetric, backward or forward, not {kind!r}")


def tensor_spectrum(taus: Sequence[float], epsilon: float, kmax: int) -> List[Tuple[float, Tuple[int, ...]]]:
    """Leading ``kmax`` products ``prod_a mu_a^{i_a}`` of a separable harmonic potential.

    ``mu_a = tau_a / (tau_a + epsilon)``. Sorted by value descending, ties by
    multi-index. Total degree ``kmax - 1`` suffices: any index of higher degree
    is dominated by at least ``kmax`` others.
    """
    taus = np.asarray(taus, dtype=float).ravel()
    if np.any(taus <= 0) or not epsilon > 0:
        raise ValueError("tau and epsilon must be positive")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    mu = taus / (taus + epsilon)
    out = []
    for idx in itertools.product(range(kmax), repeat=taus.size):
        if sum(idx) <= kmax - 1:
            val = 1.0
            for m, e in zip(mu, idx):
                val *= m**e
            out.append((val, idx))
    out.sort(key=lambda t: (-t[0], t[1]))
    return out[:kmax]


def hermite_eigenfunction(tau: float, k: int, x, alpha: float = 0.0) -> np.ndarray:
    """Continuum (epsilon -> 0) backward eigenfunction ``k <= 4`` for ``U = x^2 / 2 tau``.

    The generator ``f'' - 2(1-alpha) x f' / tau`` is solved by the physicists'
    Hermite polynomial ``H_k(x sqrt((1-alpha)/tau))``.
    """
    if not 0 <= k <= 4:
        raise UnsupportedInputError("only k <= 4 is tabulated")
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1) for a normalisable OU eigenproblem")
    y = np.asarray(x, dtype=float) * np.sqrt((1 - alpha) / tau)
    return _herm.hermval(y, [0] * k + [1])


def hermite_eigenvalue(tau: float, k: int, alpha: float = 0.0) -> float:
    """Generator eigenvalue ``-2 k (1 - alpha) / tau`` matching :func:`hermite_eigenfunction`."""
    return -2.0 * k * (1.0 - alpha) / tau


# -- two wells --------------------------------------------------------------


def doublewell_psi1(xL, xR, tauL, tauR, epsilon, x) -> np.ndarray:
    """``(phi_L - phi_R) / (phi_L + phi_R)`` from the single-well forward ground states.

    Evaluated as ``tanh`` of half the log ratio so that points far from both
    wells do not produce 0/0.
    """
    if not xL < xR:
        raise ValueError("need xL < xR")
    if min(tauL, tauR, epsilon) <= 0:
        raise ValueError("widths and epsilon must be positive")
    x = np.asarray(x, dtype=float)

    def log_phi(c, t):
        s = t + epsilon
        return 0.5 * np.log(t / s) - (x - c) ** 2 / (2 * s)

    return np.tanh(0.5 * (log_phi(xL, tauL) - log_phi(xR, tauR)))


# -- limiting generators ------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """A smooth function with analytic gradient and Laplacian (vectorised like potentials)."""

    __test__ = False  # keep pytest from collecting this class

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    grad: Callable[[np.ndarray], np.ndarray]
    lap: Callable[[np.ndarray], np.ndarray]


def _e0(x):
    g = np.zeros_like(x)
    g[..., 0] = 1.0
    return g


def sine_testfn() -> TestFunction:
    def grad(x):
        g = np.zeros_like(x)
        g[..., 0] = np.cos(x[..., 0])
        return g

    return TestFunction("sin", lambda x: np.sin(x[..., 0]), grad, lambda x: -np.sin(x[..., 0]))


def linear_testfn() -> TestFunction:
    return TestFunction("linear", lambda x: x[..., 0].copy(), _e0, lambda x: np.zeros(x.shape[:-1]))


def gauss_testfn() -> TestFunction:
    def value(x):
        return np.exp(-0.5 * np.sum(x * x, axis=-1))

    def lap(x):
        r2 = np.sum(x * x, axis=-1)
        return (r2 - x.shape[-1]) * np.exp(-0.5 * r2)

    return TestFunction("gauss", value, lambda x: -x * value(x)[..., None], lap)


def boltzmann_testfn(spec: PotentialSpec) -> TestFunction:
    """``exp(-U)`` with derivatives from the potential's closed forms."""

    def value(x):
        return np.exp(-spec.value(x))

    def grad(x):
        return -spec.grad(x) * value(x)[..., None]

    def lap(x):
        g = spec.grad(x)
        return (np.sum(g * g, axis=-1) - spec.lap(x)) * value(x)

    return TestFunction("boltzmann", value, grad, lap)


TEST_FUNCTIONS = {"sin": sine_testfn, "linear": linear_testfn, "gauss": gauss_testfn}


def backward_generator_reference(spec: PotentialSpec, alpha: float, f: TestFunction, x) -> np.ndarray:
    """``lap f - 2 (1 - alpha) grad f . grad U``."""
    x = spec.check_point(x)
    _, gU, _ = evaluate(spec, x)
    return f.lap(x) - 2.0 * (1.0 - alpha) * np.sum(f.grad(x) * gU, axis=-1)


def forward_generator_reference(spec: PotentialSpec, alpha: float, f: TestFunction, x) -> np.ndarray:
    """``lap f - 2 alpha grad f . grad U + (2 alpha - 1) f (|grad U|^2 - lap U)``."""
    x = spec.check_point(x)
    _, gU, lapU = evaluate(spec, x)
    V = np.sum(gU * gU, axis=-1) - lapU
    return f.lap(x) - 2.0 * alpha * np.sum(f.grad(x) * gU, axis=-1) + (2.0 * alpha - 1.0) * f.value(x) * V


# -- brute-force linear algebra ----------------------------------------------


def _symmetrize(A: np.ndarray) -> np.ndarray:
    """Symmetric matrix diagonally similar to ``A``, or raise if none exists."""
    n = A.shape[0]
    scale = np.max(np.abs(A)) or 1.0
    if np.allclose(A, A.T, rtol=0, atol=1e-12 * scale):
        return 0.5 * (A + A.T)
    if np.any(A * A.T < 0) or np.any((A == 0) != (A.T == 0)):
        raise UnsupportedInputError("matrix is not similar to a symmetric one; spectrum may be complex")
    # h_j / h_i = sqrt(A_ji / A_ij) along a spanning tree of the nonzero pattern
    h = np.full(n, np.nan)
    for root in range(n):
        if not np.isnan(h[root]):
            continue
        h[root] = 1.0
        todo = [root]
        while todo:
            i = todo.pop()
            for j in range(n):
                if j != i and A[i, j] != 0 and np.isnan(h[j]):
                    h[j] = h[i] * np.sqrt(A[j, i] / A[i, j])
                    todo.append(j)
    S = A * h[None, :] / h[:, None]
    if not np.allclose(S, S.T, rtol=0, atol=1e-10 * scale):
        raise UnsupportedInputError("matrix is not similar to a symmetric one; spectrum may be complex")
    return 0.5 * (S + S.T)


def _count_below(S: np.ndarray, x: float) -> int:
    """Eigenvalues of symmetric ``S`` below ``x``: negative pivots of LDL^T of ``S - x I``."""
    n = S.shape[0]
    A = S - x * np.eye(n)
    tiny = 1e-300
    count = 0
    for k in range(n):
        piv = A[k, k]
        if piv == 0.0:
            piv = -tiny
        if piv < 0:
            count += 1
        if k + 1 < n:
            col = A[k + 1 :, k] / piv
            A[k + 1 :, k + 1 :] -= np.outer(col, A[k, k + 1 :])
    return count


def brute_force_spectrum(A, max_n: int = 6) -> np.ndarray:
    """Eigenvalues (descending, with multiplicity) of a small real-spectrum matrix.

    Uses Sylvester inertia counts and bisection on the symmetrised matrix; no
    library eigensolver is involved.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or n < 1:
        raise ValueError("A must be a square matrix")
    if n > max_n:
        raise ValueError(f"brute force limited to n <= {max_n}")
    S = _symmetrize(A)
    r = np.max(np.sum(np.abs(S), axis=1)) + 1.0
    eig = np.empty(n)
    for k in range(n):
        # smallest x with count_below(x) > k brackets the (k+1)-th smallest eigenvalue
        lo, hi = -r, r
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if _count_below(S, mid) > k:
                hi = mid
            else:
                lo = mid
        eig[k] = 0.5 * (lo + hi)
    return eig[::-1]


def diffusion_distance_bruteforce(M_b: np.ndarray, pi: np.ndarray, i: int, j: int, m: int) -> float:
    """``|| (M_b^m)_i - (M_b^m)_j ||`` in the ``1/pi`` weighted norm, by matrix powers."""
    P = np.linalg.matrix_power(np.asarray(M_b, dtype=float), m)
    diff = P[i] - P[j]
    return float(np.sqrt(np.sum(diff * diff / pi)))
