import numpy as np
import pytest

from dmapx.dataset import PointCloud
from dmapx.diffusion import (
    DiffusionParams,
    anisotropic_normalize,
    apply_discrete_generator,
    diffusion_distance,
    embed,
    spectral_decompose,
)
from dmapx.errors import DisconnectedGraphError
from dmapx.kernel import DensityEstimate, KernelParams, density_estimate, gaussian_kernel_matrix
from dmapx.oracles import brute_force_spectrum, diffusion_distance_bruteforce


def ensemble(cloud, eps, alpha):
    km = gaussian_kernel_matrix(cloud, KernelParams(eps))
    return anisotropic_normalize(km, density_estimate(km), alpha)


def simplex(n):
    """Vertices of a regular simplex in R^n (unit basis vectors)."""
    return PointCloud(np.eye(n))


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.5, 1.0])
def test_uniform_density_makes_alpha_irrelevant(alpha):
    base = ensemble(simplex(5), 0.7, 0.0).backward_matrix()
    other = ensemble(simplex(5), 0.7, alpha).backward_matrix()
    assert np.max(np.abs(base - other)) <= 1e-14


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_two_point_backward_matrix(alpha):
    ens = ensemble(PointCloud([[0.0], [1.0]]), 0.5, alpha)
    w = np.exp(-1.0)
    expect = np.array([[1, w], [w, 1]]) / (1 + w)
    assert np.allclose(ens.backward_matrix(), expect, rtol=0, atol=1e-15)


def test_alpha_zero_rows_are_kernel_over_density(random_cloud):
    c = random_cloud(20, 2, seed=2)
    km = gaussian_kernel_matrix(c, KernelParams(0.5))
    q = density_estimate(km).q
    ens = anisotropic_normalize(km, DensityEstimate(q), 0.0)
    assert np.allclose(ens.backward_matrix(), km.K / q[:, None], rtol=1e-14)


def test_two_point_spectrum():
    dec = spectral_decompose(ensemble(PointCloud([[0.0], [1.0]]), 0.5, 0.5), 2)
    w = np.exp(-1.0)
    assert np.allclose(dec.lambdas, [1.0, (1 - w) / (1 + w)], atol=1e-14)


def test_equilateral_spectrum_and_degenerate_subspace():
    pts = PointCloud([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
    ens = ensemble(pts, 0.5, 0.0)
    w = np.exp(-1.0)
    dec = spectral_decompose(ens, 3)
    mu = (1 - w) / (1 + 2 * w)
    assert np.allclose(dec.lambdas, [1.0, mu, mu], atol=1e-14)
    assert np.allclose(brute_force_spectrum(ens.backward_matrix()), [1.0, mu, mu], atol=1e-12)
    # compare the 2-D eigenspace through its projector, not vector by vector
    V = dec.v[:, 1:]
    P = V @ V.T
    u = np.ones(3) / np.sqrt(3)
    assert np.linalg.norm(P - (np.eye(3) - np.outer(u, u))) < 1e-12


def test_degenerate_basis_is_deterministic():
    pts = PointCloud([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
    a = spectral_decompose(ensemble(pts, 0.5, 0.0), 3).psi
    b = spectral_decompose(ensemble(pts, 0.5, 0.0), 3).psi
    assert np.array_equal(a, b)


@pytest.mark.parametrize("seed", range(20))
def test_conjugation_invariants(random_cloud, seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(5, 201))
    c = random_cloud(n, int(rng.integers(1, 4)), seed=seed)
    alpha = float(rng.choice([0.0, 0.5, 1.0]))
    ens = ensemble(c, 0.5, alpha)
    dec = spectral_decompose(ens, n)
    Mb = ens.backward_matrix()
    lam_b = np.sort(np.linalg.eigvals(Mb).real)[::-1]
    assert np.max(np.abs(lam_b - dec.lambdas)) <= 1e-10
    assert dec.lambdas[0] == pytest.approx(1.0, abs=1e-10)
    assert np.all(np.abs(dec.lambdas) <= 1 + 1e-10)
    # right and left eigenrelations with unit-normalised vectors
    for a in range(min(n, 8)):
        psi = dec.psi[:, a] / np.max(np.abs(dec.psi[:, a]))
        phi = dec.phi[:, a] / np.max(np.abs(dec.phi[:, a]))
        assert np.max(np.abs(Mb @ psi - dec.lambdas[a] * psi)) <= 1e-8
        assert np.max(np.abs(Mb.T @ phi - dec.lambdas[a] * phi)) <= 1e-8
    # row-stochastic, stationary, detailed balance, pi-orthonormal
    assert np.max(np.abs(Mb.sum(axis=1) - 1)) <= 1e-12
    assert np.max(np.abs(ens.pi @ Mb - ens.pi)) <= 1e-12
    flux = ens.pi[:, None] * Mb
    assert np.max(np.abs(flux - flux.T)) <= 1e-12
    gram = dec.psi.T @ (ens.pi[:, None] * dec.psi)
    assert np.allclose(gram, np.eye(n), atol=1e-8)
    assert np.std(dec.psi[:, 0]) <= 1e-8


def test_sign_convention(random_cloud):
    dec = spectral_decompose(ensemble(random_cloud(30), 0.5, 0.5), 5)
    for a in range(5):
        col = dec.psi[:, a]
        assert col[np.argmax(np.abs(col))] > 0


def test_embed_time_scaling(random_cloud):
    dec = spectral_decompose(ensemble(random_cloud(30), 0.5, 0.5), 4)
    assert np.array_equal(embed(dec, 0).coords, dec.psi[:, 1:])
    e2 = embed(dec, 2).coords
    assert np.allclose(e2[:, 0], dec.lambdas[1] ** 2 * dec.psi[:, 1], rtol=1e-14)
    norms = np.linalg.norm(embed(dec, 5).coords, axis=0)
    assert np.all(np.diff(norms) <= 1e-12)


def test_embed_with_eigenvalue_point_eight():
    # two points with (1 - w) / (1 + w) = 0.8
    w = 1 / 9
    d2 = -np.log(w)  # epsilon 0.5 gives K = exp(-d2)
    ens = ensemble(PointCloud([[0.0], [np.sqrt(d2)]]), 0.5, 0.0)
    dec = spectral_decompose(ens, 2)
    assert dec.lambdas[1] == pytest.approx(0.8, abs=1e-14)
    assert np.allclose(embed(dec, 2).coords[:, 0], 0.64 * dec.psi[:, 1], rtol=1e-13)
    tail = embed(dec, 200).coords
    assert np.max(np.abs(tail)) <= 1e-15 * np.max(np.abs(dec.psi)) * 2


@pytest.mark.parametrize("m", [1, 2, 3])
def test_diffusion_distance_matches_matrix_powers(random_cloud, m):
    ens = ensemble(random_cloud(50, 2, seed=4), 0.5, 0.5)
    dec = spectral_decompose(ens, 50)
    Mb = ens.backward_matrix()
    for i, j in [(0, 1), (3, 17), (10, 49)]:
        ref = diffusion_distance_bruteforce(Mb, ens.pi, i, j, m)
        assert abs(diffusion_distance(ens, dec, i, j, m) - ref) <= 1e-8
    assert diffusion_distance(ens, dec, 5, 5, m) == 0.0


def test_truncated_distance_is_smaller(random_cloud):
    ens = ensemble(random_cloud(40, 2, seed=5), 0.5, 0.0)
    full = spectral_decompose(ens, 40)
    part = spectral_decompose(ens, 5)
    for i, j in [(0, 1), (2, 30)]:
        assert diffusion_distance(ens, part, i, j, 2) <= diffusion_distance(ens, full, i, j, 2) + 1e-12


def test_generator_kills_constants(random_cloud):
    ens = ensemble(random_cloud(60), 0.3, 0.5)
    assert np.all(apply_discrete_generator(ens, np.full(60, 3.7), 0.3) == 0.0)


def test_generator_on_eigenvector(random_cloud):
    eps = 0.3
    ens = ensemble(random_cloud(60), eps, 0.5)
    dec = spectral_decompose(ens, 2)
    psi = dec.psi[:, 1]
    out = apply_discrete_generator(ens, psi, eps)
    # one step of the chain spans diffusion time epsilon / 2
    assert np.max(np.abs(out - 2 * (dec.lambdas[1] - 1) / eps * psi)) <= 1e-8


def test_generator_length_mismatch(random_cloud):
    ens = ensemble(random_cloud(10), 0.3, 0.5)
    with pytest.raises(ValueError):
        apply_discrete_generator(ens, np.zeros(9), 0.3)


def test_disconnected_point():
    km = gaussian_kernel_matrix(PointCloud([[0.0], [1e3]]), KernelParams(1e-3))
    with pytest.raises(DisconnectedGraphError, match="epsilon"):
        # huge alpha-weights push the degree below the floor
        anisotropic_normalize(km, DensityEstimate(np.array([1e300, 1e300])), 1.0)


def test_params_validation():
    with pytest.raises(ValueError):
        DiffusionParams(alpha=1.5)
    with pytest.raises(ValueError):
        DiffusionParams(m=-1)
    with pytest.raises(ValueError):
        spectral_decompose(ensemble(PointCloud([[0.0], [1.0]]), 0.5, 0.0), 3)
