"""End-to-end recipes for the worked examples.

Each recipe is deterministic in its seeds and returns a :class:`RecipeResult`
holding a JSON-ready summary plus the arrays behind it. The command line
``reproduce`` subcommand and the acceptance tests both go through here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from . import analysis, oracles
from .dataset import LabeledPointCloud, PointCloud, load_points, subsample
from .diffusion import (
    DiffusionEmbedding,
    MarkovEnsemble,
    SpectralDecomposition,
    anisotropic_normalize,
    apply_discrete_generator,
    embed,
    spectral_decompose,
)
from .kernel import DensityEstimate, KernelMatrix, KernelParams, density_estimate, epsilon_heuristic, gaussian_kernel_matrix
from .potentials import PotentialSpec, doublewell2d, locate_minima, triplewell2d
from .sampler import SamplerConfig, gaussian_direct_sample, langevin_sample


@dataclass
class DiffusionMap:
    """Everything computed for one (cloud, epsilon, alpha, k) run."""

    cloud: PointCloud
    kernel: KernelMatrix
    density: DensityEstimate
    ensemble: MarkovEnsemble
    spectrum: SpectralDecomposition

    def embedding(self, m: int = 1) -> DiffusionEmbedding:
        return embed(self.spectrum, m)


def diffusion_map(cloud: PointCloud, epsilon: float, alpha: float, k: int) -> DiffusionMap:
    km = gaussian_kernel_matrix(cloud, KernelParams(epsilon))
    de = density_estimate(km)
    ens = anisotropic_normalize(km, de, alpha)
    return DiffusionMap(cloud, km, de, ens, spectral_decompose(ens, min(k, cloud.n)))


@dataclass
class RecipeResult:
    summary: Dict
    points: Optional[LabeledPointCloud] = None
    dmap: Optional[DiffusionMap] = None
    extra: Dict = field(default_factory=dict)


def _rel(a, b):
    return float(abs(a - b) / abs(b))


# -- spectra and generators on Ornstein-Uhlenbeck data -------------------------


def ou_check(n=4000, tau=1.0, epsilon=0.2, kmax=4, seed=1, alpha=0.0) -> RecipeResult:
    """Computed versus analytic eigenvalues for direct N(0, tau) samples."""
    cloud = gaussian_direct_sample([tau], n, seed)
    dm = diffusion_map(cloud, epsilon, alpha, kmax)
    analytic = oracles.ou_spectrum(oracles.OUParams(tau, epsilon), kmax)
    computed = dm.spectrum.lambdas.tolist()
    summary = {
        "recipe": "oracle-ou",
        "n": n, "tau": tau, "epsilon": epsilon, "alpha": alpha, "seed": seed,
        "computed": computed,
        "analytic": analytic,
        "rel_error": [_rel(c, a) for c, a in zip(computed, analytic)],
    }
    return RecipeResult(summary, LabeledPointCloud(cloud), dm)


def equilibrium_sample(spec: PotentialSpec, n: int, seed: int) -> PointCloud:
    """Exact draws for harmonic potentials, a Langevin run otherwise."""
    if spec.name in ("parabolic1d", "parabolicNd"):
        return gaussian_direct_sample(list(spec.params.values()), n, seed)
    lo, hi = spec.box
    x0 = locate_minima(spec, [0.5 * (lo + hi)]).minima
    x0 = x0[0] if x0 else 0.5 * (lo + hi)
    return langevin_sample(spec, SamplerConfig(n_keep=n, seed=seed, x0=tuple(x0), n_chains=8))


def generator_check(
    spec: PotentialSpec, alpha: float, epsilon: float, n: int = 8000, testfn: str = "sin",
    seed: int = 1, central: float = 0.8, cloud: Optional[PointCloud] = None,
) -> RecipeResult:
    """Median |discrete - limiting| backward generator over the densest ``central`` fraction."""
    if testfn not in oracles.TEST_FUNCTIONS:
        raise ValueError(f"unknown test function {testfn!r}")
    f = oracles.TEST_FUNCTIONS[testfn]()
    cloud = cloud if cloud is not None else equilibrium_sample(spec, n, seed)
    km = gaussian_kernel_matrix(cloud, KernelParams(epsilon))
    de = density_estimate(km)
    ens = anisotropic_normalize(km, de, alpha)
    x = cloud.points
    discrete = apply_discrete_generator(ens, f.value(x), epsilon)
    reference = oracles.backward_generator_reference(spec, alpha, f, x)
    keep = de.q >= np.quantile(de.q, 1.0 - central)
    dev = np.abs(discrete - reference)[keep]
    summary = {
        "recipe": "generator-check",
        "potential": spec.name, "alpha": alpha, "epsilon": epsilon, "n": cloud.n,
        "testfn": testfn, "seed": seed,
        "median_abs_deviation": float(np.median(dev)),
        "max_abs_deviation": float(np.max(dev)),
        "n_used": int(keep.sum()),
    }
    return RecipeResult(summary, LabeledPointCloud(cloud), extra={"discrete": discrete, "reference": reference, "mask": keep})


# -- worked examples -----------------------------------------------------------


def harmonic(n=3500, taus=(1.0, 1.0 / 25.0), epsilon=0.25, alpha=0.5, k=4, seed=11, trim=0.05) -> RecipeResult:
    """Slow-variable structure for a 2-D harmonic potential with separated time scales."""
    cloud = gaussian_direct_sample(taus, n, seed)
    dm = diffusion_map(cloud, epsilon, alpha, k)
    keep = analysis.density_trim_mask(dm.density, trim)
    psi = dm.spectrum.psi
    corr = float(np.corrcoef(psi[keep, 1], cloud.points[keep, 0])[0, 1])
    fit = analysis.quadratic_fit_r2(psi[:, 1], psi[:, 2], trim, dm.density)
    analytic = [v for v, _ in oracles.tensor_spectrum(taus, epsilon, k)]
    summary = {
        "recipe": "fig-harmonic",
        "n": n, "taus": list(taus), "epsilon": epsilon, "alpha": alpha, "seed": seed,
        "lambdas": dm.spectrum.lambdas.tolist(),
        "tensor_spectrum_alpha0": analytic,
        "corr_psi1_x1": corr,
        "parabola_fit": fit.to_json(),
    }
    return RecipeResult(summary, LabeledPointCloud(cloud), dm)


def doublewell(
    n_total=40_000, n_sub=1200, epsilon=0.25, alpha=0.5, k=4, seed=3, sub_seed=7, n_chains=8,
    barrier=2.25, margin=0.5,
) -> RecipeResult:
    """Sign of the first nontrivial eigenvector versus the two wells."""
    spec = doublewell2d()
    full = langevin_sample(spec, SamplerConfig(n_keep=n_total, seed=seed, x0=(0.0, 0.0), n_chains=n_chains))
    cloud = subsample(full, n_sub, sub_seed)
    dm = diffusion_map(cloud, epsilon, alpha, k)
    x = cloud.points[:, 0]
    psi1 = dm.spectrum.psi[:, 1]
    right = x > barrier
    far = np.abs(x - barrier) > margin
    rep = analysis.confusion_report(analysis.sign_cluster(psi1[far]), right[far].astype(int))
    agreement = 1.0 - rep.errors / int(far.sum())
    gap = abs(psi1[right].mean() - psi1[~right].mean()) if right.any() and (~right).any() else 0.0
    spread = [float(psi1[m].std() / gap) if gap > 0 else float("inf") for m in (~right, right)]
    # closed-form shape from locally harmonic wells (U ~ (x - c)^2 / 2 tau near each minimum)
    tauL, tauR = 1.0 / 9.0, 1.0 / 7.0
    shape = oracles.doublewell_psi1(0.0, 4.0, tauL, tauR, epsilon, x)
    summary = {
        "recipe": "fig-doublewell",
        "n_total": n_total, "n_sub": n_sub, "epsilon": epsilon, "alpha": alpha, "seed": seed,
        "lambdas": dm.spectrum.lambdas.tolist(),
        "occupancy_right": float(np.mean(full.points[:, 0] > barrier)),
        "sign_agreement_away_from_barrier": float(agreement),
        "n_away_from_barrier": int(far.sum()),
        "within_well_spread_over_gap": spread,
        "corr_with_two_well_shape": float(abs(np.corrcoef(psi1, shape)[0, 1])),
    }
    return RecipeResult(summary, LabeledPointCloud(cloud), dm, extra={"full": full})


def triplewell(
    n_total=80_000, n_sub=1400, beta=2.0, epsilon=0.1, alpha=0.5, k=4, seed=5, sub_seed=7, n_chains=8,
    kmeans_seed=1,
) -> RecipeResult:
    """k-means on the first two diffusion coordinates versus nearest-well membership."""
    spec = triplewell2d(beta)
    wells = locate_minima(spec, [(-1.0, 0.0), (1.0, 0.0), (0.0, 5.0 / 3.0)], tol=1e-8).minima
    box = ((-2.5, -2.5), (2.5, 2.5))
    full = langevin_sample(
        spec, SamplerConfig(n_keep=n_total, seed=seed, x0=tuple(wells[0]), box=box, n_chains=n_chains)
    )
    cloud = subsample(full, n_sub, sub_seed)
    dm = diffusion_map(cloud, epsilon, alpha, k)
    W = np.array(wells)
    truth = np.argmin(np.sum((cloud.points[:, None, :] - W[None]) ** 2, axis=2), axis=1)
    km = analysis.kmeans(dm.spectrum.psi[:, 1:3], 3, seed=kmeans_seed)
    summary = {
        "recipe": "fig-triplewell",
        "n_total": n_total, "n_sub": n_sub, "beta": beta, "epsilon": epsilon, "alpha": alpha, "seed": seed,
        "wells": [w.tolist() for w in wells],
        "well_counts": np.bincount(truth, minlength=3).tolist(),
        "lambdas": dm.spectrum.lambdas.tolist(),
        "kmeans_purity": float(analysis.purity(km.labels, truth)),
        "kmeans_errors": analysis.confusion_report(km.labels, truth).errors,
    }
    return RecipeResult(
        summary, LabeledPointCloud(cloud, truth), dm, extra={"kmeans": km.labels, "truth": truth, "full": full}
    )


def minmax_scale(points: np.ndarray) -> np.ndarray:
    lo, hi = points.min(axis=0), points.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    return (points - lo) / span


IRIS_EPS_FACTORS = (0.5, 1.0, 2.0, 4.0, 8.0)


def _isolates(labels: np.ndarray, cls_mask: np.ndarray) -> bool:
    inside = np.unique(labels[cls_mask])
    return inside.size == 1 and not np.any(labels[~cls_mask] == inside[0])


def iris(path, factors: Sequence[float] = IRIS_EPS_FACTORS, alpha: float = 0.0, seed: int = 0) -> RecipeResult:
    """Sign clustering on iris: class 1 against the rest, then classes 2 and 3 alone.

    Features are min-max scaled on each run's own input, and the bandwidth is
    swept as multiples of :func:`epsilon_heuristic` on that input.
    """
    data = load_points(path, has_labels=True)
    if data.labels is None or data.n_classes != 3:
        raise ValueError("iris recipe expects a labelled file with exactly 3 classes")
    y = data.labels
    full = PointCloud(minmax_scale(data.cloud.points))
    rest = y != 0
    pair = PointCloud(minmax_scale(data.cloud.points[rest]))
    h_full, h_pair = epsilon_heuristic(full, seed), epsilon_heuristic(pair, seed)
    sweep = []
    for fac in factors:
        lab_full = analysis.sign_cluster(diffusion_map(full, fac * h_full, alpha, 3).spectrum.psi[:, 1])
        lab_pair = analysis.sign_cluster(diffusion_map(pair, fac * h_pair, alpha, 3).spectrum.psi[:, 1])
        rep = analysis.confusion_report(lab_pair, y[rest] - 1)
        sweep.append({
            "factor": fac,
            "epsilon_full": fac * h_full,
            "epsilon_pair": fac * h_pair,
            "class1_separated": bool(_isolates(lab_full, y == 0)),
            "pair_errors": rep.errors,
            "pair_report": rep.to_json(),
        })
    errs = [s["pair_errors"] for s in sweep]
    summary = {
        "recipe": "iris",
        "alpha": alpha,
        "class_names": list(data.label_names),
        "sweep": sweep,
        "pair_errors_range": [min(errs), max(errs)],
    }
    return RecipeResult(summary, data)


def circle_density_sample(n: int = 1000, seed: int = 42, amplitude: float = 0.9) -> PointCloud:
    """Unit-circle points with angular density proportional to ``1 + amplitude cos(theta)``."""
    from .rng import stream

    gen = stream(seed)
    kept = []
    total = 0
    while total < n:
        theta = 2.0 * np.pi * gen.random(2 * n)
        u = gen.random(2 * n)
        acc = theta[u * (1.0 + amplitude) < 1.0 + amplitude * np.cos(theta)]
        kept.append(acc)
        total += acc.size
    theta = np.concatenate(kept)[:n]
    return PointCloud(np.column_stack([np.cos(theta), np.sin(theta)]))


def circle(n=1000, epsilon=0.01, seed=42, alphas=(0.0, 1.0)) -> RecipeResult:
    """Radius spread of the first two coordinates on a non-uniformly sampled circle."""
    cloud = circle_density_sample(n, seed)
    per_alpha = {}
    for a in alphas:
        dm = diffusion_map(cloud, epsilon, a, 3)
        lam = dm.spectrum.lambdas
        r = np.hypot(dm.spectrum.psi[:, 1], dm.spectrum.psi[:, 2])
        per_alpha[str(a)] = {
            "lambdas": lam.tolist(),
            "pair_rel_diff": float(abs(lam[1] - lam[2]) / lam[1]),
            "pair_gap_rel_diff": float(abs(lam[1] - lam[2]) / (1.0 - lam[1])),
            "radius_cov": float(r.std() / r.mean()),
        }
    return RecipeResult({"recipe": "circle", "n": n, "epsilon": epsilon, "seed": seed, "alphas": per_alpha},
                        LabeledPointCloud(cloud))
