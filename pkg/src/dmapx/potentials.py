"""Analytic potentials ``U(x)`` with closed-form gradients and Laplacians.

Every evaluator is vectorised over leading axes: ``x`` has shape ``(..., d)``,
``U`` and the Laplacian come back with shape ``(...)`` and the gradient with
shape ``(..., d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class PotentialSpec:
    name: str
    dim: int
    params: Mapping[str, float]
    value: Callable[[np.ndarray], np.ndarray]
    grad: Callable[[np.ndarray], np.ndarray]
    lap: Callable[[np.ndarray], np.ndarray]
    # reference box (lo, hi) used by property tests and as a sampling hint
    box: Tuple[np.ndarray, np.ndarray] = field(default=None)

    def check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 and self.dim == 1:
            x = x[None]
        if x.shape[-1:] != (self.dim,):
            raise ValueError(f"{self.name} expects points of dimension {self.dim}, got shape {x.shape}")
        return x


def evaluate(spec: PotentialSpec, x) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(U, grad U, lap U)`` at ``x``."""
    x = spec.check_point(x)
    return spec.value(x), spec.grad(x), spec.lap(x)


def schrodinger_potential(spec: PotentialSpec, x) -> np.ndarray:
    """``|grad U|^2 - lap U``, the potential of the equivalent Schrodinger operator."""
    _, g, lap = evaluate(spec, x)
    return np.sum(g * g, axis=-1) - lap


# -- catalog ---------------------------------------------------------------


def constant(dim: int = 1, level: float = 0.0) -> PotentialSpec:
    lo, hi = -np.ones(dim), np.ones(dim)
    return PotentialSpec(
        name="constant",
        dim=dim,
        params={"level": float(level)},
        value=lambda x: np.full(x.shape[:-1], float(level)),
        grad=lambda x: np.zeros_like(x),
        lap=lambda x: np.zeros(x.shape[:-1]),
        box=(lo, hi),
    )


def parabolicNd(taus: Sequence[float]) -> PotentialSpec:
    """Harmonic potential ``sum_j x_j^2 / (2 tau_j)``."""
    taus = np.asarray(taus, dtype=float).ravel()
    if taus.size < 1 or np.any(taus <= 0):
        raise ValueError("all tau must be positive")
    inv = 1.0 / taus
    half = 4.0 * np.sqrt(taus)
    params = {f"tau{j + 1}": float(t) for j, t in enumerate(taus)}
    return PotentialSpec(
        name="parabolicNd",
        dim=taus.size,
        params=params,
        value=lambda x: 0.5 * np.sum(x * x * inv, axis=-1),
        grad=lambda x: x * inv,
        lap=lambda x: np.full(x.shape[:-1], inv.sum()),
        box=(-half, half),
    )


def parabolic1d(tau: float = 1.0) -> PotentialSpec:
    """Ornstein-Uhlenbeck potential ``x^2 / (2 tau)``."""
    spec = parabolicNd([tau])
    return PotentialSpec("parabolic1d", 1, {"tau": float(tau)}, spec.value, spec.grad, spec.lap, spec.box)


def _dw_value(x):
    a, b = x[..., 0], x[..., 1]
    return a**4 / 4 - 25.0 / 12.0 * a**3 + 4.5 * a**2 + 12.5 * b**2


def _dw_grad(x):
    a, b = x[..., 0], x[..., 1]
    return np.stack([a**3 - 6.25 * a**2 + 9.0 * a, 25.0 * b], axis=-1)


def _dw_lap(x):
    a = x[..., 0]
    return 3.0 * a**2 - 12.5 * a + 9.0 + 25.0


def doublewell2d() -> PotentialSpec:
    """Asymmetric double well with minima (0,0), (4,0) and a saddle at x=2.25."""
    return PotentialSpec(
        "doublewell2d", 2, {}, _dw_value, _dw_grad, _dw_lap,
        box=(np.array([-2.0, -1.0]), np.array([6.0, 1.0])),
    )


def _bump(s, c):
    """exp(-(s-c)^2) with first and second derivatives."""
    g = np.exp(-((s - c) ** 2))
    return g, -2.0 * (s - c) * g, (4.0 * (s - c) ** 2 - 2.0) * g


def triplewell2d(beta: float = 2.0) -> PotentialSpec:
    """Three-well potential: deep wells near (+-1, 0), a shallow one near (0, 5/3).

    ``beta`` multiplies the whole potential, so samples of ``exp(-U)`` are
    already at inverse temperature ``beta``.
    """
    beta = float(beta)

    def parts(x):
        u, v = x[..., 0], x[..., 1]
        A = _bump(u, 0.0)
        B1 = _bump(v, 1.0 / 3.0)
        B2 = _bump(v, 5.0 / 3.0)
        C = _bump(v, 0.0)
        D1 = _bump(u, 1.0)
        D2 = _bump(u, -1.0)
        return A, B1, B2, C, D1, D2

    def value(x):
        A, B1, B2, C, D1, D2 = parts(x)
        return 3 * beta * A[0] * (B1[0] - B2[0]) - 5 * beta * C[0] * (D1[0] + D2[0])

    def grad(x):
        A, B1, B2, C, D1, D2 = parts(x)
        gx = 3 * beta * A[1] * (B1[0] - B2[0]) - 5 * beta * C[0] * (D1[1] + D2[1])
        gy = 3 * beta * A[0] * (B1[1] - B2[1]) - 5 * beta * C[1] * (D1[0] + D2[0])
        return np.stack([gx, gy], axis=-1)

    def lap(x):
        A, B1, B2, C, D1, D2 = parts(x)
        first = A[2] * (B1[0] - B2[0]) + A[0] * (B1[2] - B2[2])
        second = C[0] * (D1[2] + D2[2]) + C[2] * (D1[0] + D2[0])
        return 3 * beta * first - 5 * beta * second

    return PotentialSpec(
        "triplewell2d", 2, {"beta": beta}, value, grad, lap,
        box=(np.array([-2.5, -2.5]), np.array([2.5, 2.5])),
    )


CATALOG = {
    "parabolic1d": parabolic1d,
    "parabolicNd": parabolicNd,
    "doublewell2d": doublewell2d,
    "triplewell2d": triplewell2d,
}


def from_string(text: str) -> PotentialSpec:
    """Build a catalog potential from ``name[:key=value,...]``.

    ``parabolicNd`` takes ``tau1=..,tau2=..,...``; the others take their
    keyword parameters directly, e.g. ``parabolic1d:tau=1.0``.
    """
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in CATALOG:
        raise ValueError(f"unknown potential {name!r}; choose from {sorted(CATALOG)}")
    kwargs = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad potential parameter {item!r}, expected key=value")
        try:
            kwargs[key.strip()] = float(val)
        except ValueError:
            raise ValueError(f"potential parameter {key.strip()!r} is not a number: {val!r}") from None
    if name == "parabolicNd":
        keys = sorted(kwargs, key=lambda k: int(k[3:]) if k.startswith("tau") and k[3:].isdigit() else -1)
        if not keys or any(not (k.startswith("tau") and k[3:].isdigit()) for k in keys):
            raise ValueError("parabolicNd needs parameters tau1=..,tau2=..")
        return parabolicNd([kwargs[k] for k in keys])
    try:
        return CATALOG[name](**kwargs)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name}: {exc}") from None


# -- minimisation ----------------------------------------------------------


@dataclass
class MinimaSearch:
    """Deduplicated minima plus the starts that failed to converge."""

    minima: List[np.ndarray]
    failed: List[int]

    def __iter__(self):
        return iter(self.minima)

    def __len__(self):
        return len(self.minima)


def _descend(spec, x, tol, max_steps):
    step0 = 0.1
    u = spec.value(x)
    for _ in range(max_steps):
        g = spec.grad(x)
        gn = np.linalg.norm(g)
        if gn < tol:
            return x, True
        step = step0
        # once the Armijo decrease is below the rounding noise of U, switch to
        # requiring a smaller gradient norm, which stays resolvable near a minimum
        noisy = 0.5 * step * gn * gn < 1e-12 * max(1.0, abs(u))
        while True:
            trial = x - step * g
            ut = spec.value(trial)
            if noisy:
                if np.linalg.norm(spec.grad(trial)) < gn:
                    break
            elif ut <= u - 0.5 * step * gn * gn:
                break
            step *= 0.5
            if step < 1e-300:
                return x, False
        x, u = trial, ut
    return x, bool(np.linalg.norm(spec.grad(x)) < tol)


def locate_minima(spec: PotentialSpec, starts, tol: float = 1e-6, max_steps: int = 100_000) -> MinimaSearch:
    """Refine each start by backtracking gradient descent.

    Points within ``10 * tol`` of an already accepted minimum are merged.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    found: List[np.ndarray] = []
    failed = []
    for k, s in enumerate(starts):
        x0 = spec.check_point(s).astype(float).copy()
        x, ok = _descend(spec, x0, tol, max_steps)
        if not ok:
            failed.append(k)
            continue
        if all(np.linalg.norm(x - m) > 10 * tol for m in found):
            found.append(x)
    return MinimaSearch(found, failed)
