import numpy as np

from dmapx.rng import box_muller, partial_shuffle, stream


def test_same_key_same_bits():
    a = stream(7, 3).random(16)
    b = stream(7, 3).random(16)
    assert np.array_equal(a, b)


def test_distinct_indices_give_distinct_streams():
    a = stream(7, 0).random(8)
    b = stream(7, 1).random(8)
    c = stream(8, 0).random(8)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_box_muller_moments_and_shape():
    z = box_muller(stream(1), (50_001,))
    assert z.shape == (50_001,)
    assert np.all(np.isfinite(z))
    assert abs(z.mean()) < 0.02
    assert abs(z.var() - 1.0) < 0.02


def test_box_muller_odd_2d_shape():
    assert box_muller(stream(0), (3, 3)).shape == (3, 3)


def test_partial_shuffle_is_a_sample_without_replacement():
    idx = partial_shuffle(stream(2), 100, 30)
    assert idx.size == 30
    assert np.unique(idx).size == 30
    assert idx.min() >= 0 and idx.max() < 100


def test_partial_shuffle_full_is_permutation():
    idx = partial_shuffle(stream(2), 10, 50)
    assert sorted(idx.tolist()) == list(range(10))
