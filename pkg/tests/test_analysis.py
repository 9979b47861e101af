import json

import numpy as np
import pytest

from dmapx.analysis import (
    confusion_report,
    density_trim_mask,
    kmeans,
    purity,
    quadratic_fit_r2,
    sign_cluster,
)
from dmapx.errors import InsufficientDataError


def test_sign_cluster_examples():
    assert sign_cluster([-0.9, -0.8, 0.7, 0.9]).tolist() == [0, 0, 1, 1]
    assert sign_cluster([0.1, 2.0]).tolist() == [1, 1]
    assert sign_cluster([0.0, -0.0]).tolist() == [0, 0]


def test_sign_cluster_rejects_nan():
    with pytest.raises(ValueError):
        sign_cluster([np.nan, 1.0])


def test_sign_convention_does_not_change_errors():
    rng = np.random.default_rng(0)
    psi = rng.normal(size=200)
    truth = (rng.random(200) < 0.5).astype(int)
    a = confusion_report(sign_cluster(psi), truth).errors
    b = confusion_report(sign_cluster(-psi), truth).errors
    c = confusion_report(sign_cluster(3.5 * psi), truth).errors
    # -psi also flips exact zeros, which a continuous draw never hits
    assert a == b == c


def test_confusion_identity_and_swap():
    truth = np.array([0, 0, 1, 1, 2, 2])
    assert confusion_report(truth, truth).errors == 0
    swapped = np.array([1, 1, 0, 0, 2, 2])
    rep = confusion_report(swapped, truth)
    assert rep.errors == 0
    assert rep.permutation == {0: 1, 1: 0, 2: 2}


def test_confusion_counts_errors_and_serialises():
    rep = confusion_report([0, 0, 0, 1], [0, 0, 1, 1])
    assert rep.errors == 1
    doc = json.loads(json.dumps(rep.to_json()))
    assert set(doc) == {"errors", "permutation", "per_class_counts"}


def test_confusion_length_mismatch():
    with pytest.raises(ValueError):
        confusion_report([0, 1], [0])


def test_quadratic_fit_exact():
    u = np.linspace(-1, 1, 50)
    fit = quadratic_fit_r2(u, 2 * u**2 - u + 0.5)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)
    assert (fit.a, fit.b, fit.c) == pytest.approx((2.0, -1.0, 0.5), abs=1e-10)


def test_quadratic_fit_noise():
    rng = np.random.default_rng(0)
    assert quadratic_fit_r2(rng.normal(size=1000), rng.normal(size=1000)).r2 <= 0.05


def test_quadratic_fit_affine_invariance():
    rng = np.random.default_rng(1)
    u = rng.normal(size=300)
    v = u**2 + 0.3 * rng.normal(size=300)
    base = quadratic_fit_r2(u, v).r2
    assert abs(quadratic_fit_r2(-2.5 * u + 7.0, v).r2 - base) <= 1e-10


def test_quadratic_fit_trimming():
    u = np.linspace(-1, 1, 20)
    dens = np.arange(20.0)
    fit = quadratic_fit_r2(u, u**2, trim_q=0.25, density=dens)
    assert fit.n_used == 15
    with pytest.raises(InsufficientDataError):
        quadratic_fit_r2(u[:12], u[:12] ** 2, trim_q=0.25, density=dens[:12])


def test_trim_mask_drops_lowest():
    keep = density_trim_mask(np.array([5.0, 1.0, 3.0, 2.0]), 0.25)
    assert keep.tolist() == [True, False, True, True]
    with pytest.raises(ValueError):
        density_trim_mask(np.ones(4), 0.5)


def test_kmeans_triplets():
    X = np.array([[0, 0], [0.1, 0], [0, 0.1], [5, 5], [5.1, 5], [5, 5.1], [-5, 5], [-5.1, 5], [-5, 5.1]])
    res = kmeans(X, 3, seed=0)
    truth = np.repeat([0, 1, 2], 3)
    assert confusion_report(res.labels, truth).errors == 0
    assert purity(res.labels, truth) == 1.0


def test_kmeans_single_cluster():
    X = np.random.default_rng(0).normal(size=(20, 2))
    assert np.all(kmeans(X, 1).labels == 0)


def test_kmeans_degenerate():
    res = kmeans(np.ones((6, 2)), 3)
    assert res.degenerate
    assert np.all(res.labels == 0)


def test_kmeans_deterministic():
    X = np.random.default_rng(2).normal(size=(100, 2))
    a, b = kmeans(X, 4, seed=3), kmeans(X, 4, seed=3)
    assert np.array_equal(a.labels, b.labels)
    assert a.inertia == b.inertia


def test_kmeans_bad_k():
    with pytest.raises(ValueError):
        kmeans(np.zeros((3, 1)) + np.arange(3)[:, None], 4)
