import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dmapx.dataset import LabeledPointCloud, PointCloud, load_points, subsample, write_points
from dmapx.errors import ParseError


def test_iris_loads_with_three_balanced_classes(iris_path):
    data = load_points(iris_path, has_labels=True)
    assert data.cloud.n == 150
    assert data.cloud.dim == 4
    assert data.n_classes == 3
    assert np.bincount(data.labels).tolist() == [50, 50, 50]
    assert data.label_names[0] == "Iris-setosa"


def test_single_row_without_labels(tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("x0,x1\n0.0,0.0\n")
    data = load_points(p)
    assert data.cloud.points.shape == (1, 2)
    assert data.labels is None


def test_non_numeric_coordinate_names_row(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x0,x1\n1.0,abc\n")
    with pytest.raises(ParseError, match="row 1") as err:
        load_points(p)
    assert err.value.row == 1


def test_ragged_row(tmp_path):
    p = tmp_path / "ragged.csv"
    p.write_text("x0,x1\n1,2\n3\n")
    with pytest.raises(ParseError, match="row 2"):
        load_points(p)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_points(tmp_path / "nope.csv")


def test_crlf_and_numeric_labels(tmp_path):
    p = tmp_path / "crlf.csv"
    p.write_bytes(b"x0,label\r\n1.5,7\r\n2.5,3\r\n3.5,7\r\n")
    data = load_points(p, has_labels=True)
    assert data.cloud.points[:, 0].tolist() == [1.5, 2.5, 3.5]
    # first-appearance order, not numeric order
    assert data.labels.tolist() == [0, 1, 0]
    assert data.label_names == ("7", "3")


def test_pointcloud_rejects_nonfinite():
    with pytest.raises(ValueError):
        PointCloud([[0.0, np.nan]])
    with pytest.raises(ValueError):
        PointCloud(np.empty((0, 2)))


def test_ids_are_range():
    pc = PointCloud(np.zeros((5, 3)))
    assert pc.ids.tolist() == [0, 1, 2, 3, 4]


def test_labels_must_be_contiguous():
    with pytest.raises(ValueError):
        LabeledPointCloud(PointCloud(np.zeros((3, 1))), np.array([0, 2, 2]))


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 20), st.integers(1, 4)),
              elements=st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False)))
def test_write_load_round_trip_is_bit_exact(tmp_path_factory, pts):
    p = tmp_path_factory.mktemp("rt") / "pts.csv"
    write_points(p, PointCloud(pts))
    back = load_points(p).cloud.points
    assert np.array_equal(back.view(np.uint64), pts.view(np.uint64))


def test_written_files_use_lf(tmp_path):
    p = tmp_path / "w.csv"
    write_points(p, PointCloud([[0.1, 0.2]]))
    raw = p.read_bytes()
    assert b"\r" not in raw
    assert raw.startswith(b"x0,x1\n")


def test_labels_round_trip(tmp_path, iris_path):
    data = load_points(iris_path, has_labels=True)
    p = tmp_path / "iris.csv"
    write_points(p, data)
    back = load_points(p, has_labels=True)
    assert np.array_equal(back.labels, data.labels)
    assert back.label_names == data.label_names


def test_subsample_saturates_to_full_cloud(random_cloud):
    pc = random_cloud(n=10)
    sub = subsample(pc, 25, seed=3)
    assert np.array_equal(sub.points, pc.points)


def test_subsample_large_is_reproducible():
    pc = PointCloud(np.arange(40000, dtype=float)[:, None])
    a = subsample(pc, 1200, seed=7)
    b = subsample(pc, 1200, seed=7)
    assert a.n == 1200
    assert np.array_equal(a.points, b.points)
    assert np.unique(a.points).size == 1200
    assert a.ids.tolist() == list(range(1200))


def test_subsample_seeds_differ():
    pc = PointCloud(np.arange(100, dtype=float)[:, None])
    a = set(subsample(pc, 50, seed=1).points[:, 0])
    b = set(subsample(pc, 50, seed=2).points[:, 0])
    assert a != b


def test_subsample_labeled_keeps_labels(iris_path):
    data = load_points(iris_path, has_labels=True)
    sub = subsample(data, 30, seed=0)
    assert sub.cloud.n == 30
    assert sub.labels.min() == 0
    # each kept point keeps its class name
    full_names = [data.label_names[v] for v in data.labels]
    idx = [int(np.flatnonzero((data.cloud.points == row).all(1))[0]) for row in sub.cloud.points]
    assert [sub.label_names[v] for v in sub.labels] == [full_names[i] for i in idx]


def test_subsample_rejects_zero():
    with pytest.raises(ValueError):
        subsample(PointCloud([[0.0]]), 0, seed=0)
