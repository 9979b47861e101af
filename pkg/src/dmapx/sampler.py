"""Equilibrium samplers for ``p = exp(-U)``.

``langevin_sample`` integrates the overdamped Langevin equation
``dx = -grad U dt + sqrt(2) dw`` with Euler-Maruyama; ``gaussian_direct_sample``
draws exactly from the Gaussian equilibrium of a harmonic potential.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .dataset import PointCloud
from .errors import StepSizeBlowupError
from .potentials import PotentialSpec
from .rng import box_muller, stream

_BLOCK = 4096


@dataclass(frozen=True)
class SamplerConfig:
    """Integration and thinning settings.

    ``burn_in`` defaults to ``10_000 * thin`` steps. ``n_chains`` independent
    chains, each with its own stream, are advanced in lockstep and their kept
    samples concatenated chain by chain. ``noise_scale`` exists for tests
    (0 gives the deterministic gradient flow).
    """

    n_keep: int
    seed: int = 0
    x0: Sequence[float] = (0.0,)
    dt: float = 0.01
    thin: int = 10
    burn_in: Optional[int] = None
    box: Optional[Tuple[Sequence[float], Sequence[float]]] = None
    n_chains: int = 1
    noise_scale: float = 1.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.thin < 1:
            raise ValueError("thin must be >= 1")
        if self.n_keep < 1:
            raise ValueError("n_keep must be >= 1")
        if self.n_chains < 1:
            raise ValueError("n_chains must be >= 1")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        if not np.all(np.isfinite(x0)):
            raise ValueError("x0 must be finite")
        if self.box is not None:
            lo, hi = (np.asarray(b, dtype=float) for b in self.box)
            if lo.shape != x0.shape or hi.shape != x0.shape:
                raise ValueError("box bounds must match the dimension of x0")
            if np.any(x0 < lo) or np.any(x0 > hi):
                raise ValueError("x0 lies outside the confinement box")

    @property
    def burn_in_steps(self) -> int:
        return 10_000 * self.thin if self.burn_in is None else int(self.burn_in)


def langevin_sample(spec: PotentialSpec, cfg: SamplerConfig) -> PointCloud:
    """Kept states of an Euler-Maruyama run of the overdamped Langevin SDE.

    With ``cfg.box`` set, a proposal that leaves the box is rejected and the
    chain repeats its current state.

    Raises
    ------
    StepSizeBlowupError
        If a drift increment exceeds ten times the coordinate scale.
    """
    x0 = spec.check_point(np.atleast_1d(np.asarray(cfg.x0, dtype=float)))
    d = spec.dim
    n_chains = cfg.n_chains
    per_chain = -(-cfg.n_keep // n_chains)
    n_steps = cfg.burn_in_steps + cfg.thin * per_chain
    gens = [stream(cfg.seed, c) for c in range(n_chains)]
    if cfg.box is not None:
        lo, hi = (np.asarray(b, dtype=float) for b in cfg.box)
    sigma = np.sqrt(2.0 * cfg.dt) * cfg.noise_scale

    x = np.tile(x0, (n_chains, 1))
    out = np.empty((per_chain, n_chains, d))
    kept = 0
    step = 0
    while step < n_steps:
        block = min(_BLOCK, n_steps - step)
        noise = np.stack([box_muller(g, (block, d)) for g in gens], axis=1)
        for b in range(block):
            drift = spec.grad(x) * cfg.dt
            scale = np.maximum(1.0, np.max(np.abs(x), axis=1))
            if np.any(np.max(np.abs(drift), axis=1) > 10.0 * scale):
                raise StepSizeBlowupError(
                    f"drift increment exceeded 10x the coordinate scale at step {step + b}; "
                    f"reduce dt (currently {cfg.dt})"
                )
            prop = x - drift + sigma * noise[b]
            if cfg.box is not None:
                inside = np.all((prop >= lo) & (prop <= hi), axis=1)
                x = np.where(inside[:, None], prop, x)
            else:
                x = prop
            done = step + b + 1
            if done > cfg.burn_in_steps and (done - cfg.burn_in_steps) % cfg.thin == 0:
                out[kept] = x
                kept += 1
        step += block
    samples = out.transpose(1, 0, 2).reshape(-1, d)[: cfg.n_keep]
    return PointCloud(samples)


def gaussian_direct_sample(taus, n: int, seed: int) -> PointCloud:
    """``n`` i.i.d. draws with independent coordinates ``x_j ~ N(0, tau_j)``."""
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(taus <= 0):
        raise ValueError("all variances must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    z = box_muller(stream(seed), (n, taus.size))
    return PointCloud(z * np.sqrt(taus))
