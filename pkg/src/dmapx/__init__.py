"""Diffusion maps, spectral clustering and reaction coordinates.

The pipeline is kernel -> density -> alpha-normalised Markov ensemble ->
spectral decomposition -> embedding::

    from dmapx import gaussian_kernel_matrix, KernelParams, density_estimate
    from dmapx import anisotropic_normalize, spectral_decompose, embed

    km = gaussian_kernel_matrix(cloud, KernelParams(epsilon=0.25))
    ens = anisotropic_normalize(km, density_estimate(km), alpha=0.5)
    coords = embed(spectral_decompose(ens, k=4), m=1).coords
"""

from .dataset import LabeledPointCloud, PointCloud, load_points, subsample, write_points
from .diffusion import (
    DiffusionEmbedding,
    DiffusionParams,
    MarkovEnsemble,
    SpectralDecomposition,
    anisotropic_normalize,
    apply_discrete_generator,
    diffusion_distance,
    embed,
    spectral_decompose,
)
from .kernel import DensityEstimate, KernelMatrix, KernelParams, density_estimate, epsilon_heuristic, gaussian_kernel_matrix
from .potentials import PotentialSpec, evaluate, locate_minima, schrodinger_potential
from .sampler import SamplerConfig, gaussian_direct_sample, langevin_sample

__version__ = "0.1.0"

__all__ = [
    "LabeledPointCloud", "PointCloud", "load_points", "subsample", "write_points",
    "DiffusionEmbedding", "DiffusionParams", "MarkovEnsemble", "SpectralDecomposition",
    "anisotropic_normalize", "apply_discrete_generator", "diffusion_distance", "embed", "spectral_decompose",
    "DensityEstimate", "KernelMatrix", "KernelParams", "density_estimate", "epsilon_heuristic",
    "gaussian_kernel_matrix",
    "PotentialSpec", "evaluate", "locate_minima", "schrodinger_potential",
    "SamplerConfig", "gaussian_direct_sample", "langevin_sample",
]
