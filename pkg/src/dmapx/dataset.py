"""Point clouds, CSV ingestion and seeded subsampling."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ParseError
from .rng import partial_shuffle, stream


@dataclass(frozen=True)
class PointCloud:
    """``N`` points in ``R^d``; row ``i`` has id ``i``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"points must be an N x d array with N, d >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain NaN or Inf")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def ids(self) -> np.ndarray:
        return np.arange(self.n)

    def __len__(self):
        return self.n

    def take(self, idx) -> "PointCloud":
        return PointCloud(self.points[np.asarray(idx)])


@dataclass(frozen=True)
class LabeledPointCloud:
    """A cloud with optional integer class labels ``0..n_classes-1``."""

    cloud: PointCloud
    labels: Optional[np.ndarray] = None
    label_names: tuple = field(default=())

    def __post_init__(self):
        if self.labels is None:
            return
        lab = np.array(self.labels, dtype=np.int64, copy=True)
        if lab.shape != (self.cloud.n,):
            raise ValueError(f"expected {self.cloud.n} labels, got shape {lab.shape}")
        if lab.min() != 0 or set(np.unique(lab)) != set(range(lab.max() + 1)):
            raise ValueError("labels must be contiguous integers starting at 0")
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @property
    def n_classes(self) -> int:
        return 0 if self.labels is None else int(self.labels.max()) + 1

    def take(self, idx) -> "LabeledPointCloud":
        idx = np.asarray(idx)
        if self.labels is None:
            return LabeledPointCloud(self.cloud.take(idx))
        # relabel so the subset is again contiguous, in first-appearance order
        sub = self.labels[idx]
        order = list(dict.fromkeys(sub.tolist()))
        remap = {old: new for new, old in enumerate(order)}
        names = tuple(self.label_names[o] for o in order) if self.label_names else ()
        return LabeledPointCloud(self.cloud.take(idx), np.array([remap[v] for v in sub.tolist()]), names)


def load_points(path: Union[str, os.PathLike], has_labels: bool = False) -> LabeledPointCloud:
    """Read a points CSV with one header row.

    With ``has_labels`` the last column holds class labels (any strings,
    numeric ones included), mapped to integers by order of first appearance.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("file is empty, a header row is required")
    header, body = rows[0], rows[1:]
    if not body:
        raise ParseError("no data rows")
    n_cols = len(header)
    n_coord = n_cols - 1 if has_labels else n_cols
    if n_coord < 1:
        raise ParseError("no coordinate columns")

    coords = np.empty((len(body), n_coord))
    raw_labels = []
    for i, row in enumerate(body, start=1):
        if len(row) != n_cols:
            raise ParseError(f"expected {n_cols} fields, found {len(row)}", row=i)
        for j in range(n_coord):
            try:
                coords[i - 1, j] = float(row[j])
            except ValueError:
                raise ParseError(f"non-numeric coordinate {row[j]!r} in column {j}", row=i) from None
        if not np.all(np.isfinite(coords[i - 1])):
            raise ParseError("non-finite coordinate", row=i)
        if has_labels:
            raw_labels.append(row[-1].strip())

    cloud = PointCloud(coords)
    if not has_labels:
        return LabeledPointCloud(cloud)
    names = tuple(dict.fromkeys(raw_labels))
    index = {name: k for k, name in enumerate(names)}
    return LabeledPointCloud(cloud, np.array([index[s] for s in raw_labels]), names)


def _atomic_write_text(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_float(v: float) -> str:
    return format(float(v), ".17g")


def write_points(path, data: Union[PointCloud, LabeledPointCloud]):
    """Write a points CSV that :func:`load_points` reads back bit-exactly."""
    if isinstance(data, PointCloud):
        data = LabeledPointCloud(data)
    pts = data.cloud.points
    cols = [f"x{j}" for j in range(pts.shape[1])]
    labels = data.labels
    if labels is not None:
        cols.append("label")
        names = data.label_names or tuple(str(k) for k in range(data.n_classes))
    lines = [",".join(cols)]
    for i, row in enumerate(pts):
        fields = [format_float(v) for v in row]
        if labels is not None:
            fields.append(names[labels[i]])
        lines.append(",".join(fields))
    _atomic_write_text(path, "\n".join(lines) + "\n")


def write_table(path, header: Sequence[str], rows):
    """Write a numeric CSV table; ints stay ints, floats get 17 digits."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, (int, np.integer)) else format_float(v) for v in row))
    _atomic_write_text(path, "\n".join(lines) + "\n")


def subsample_indices(n_total: int, n: int, seed: int) -> np.ndarray:
    """Sorted indices of a uniform without-replacement draw of ``min(n, n_total)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n >= n_total:
        return np.arange(n_total)
    return np.sort(partial_shuffle(stream(seed), n_total, n))


def subsample(cloud, n: int, seed: int):
    """Uniformly subsample ``cloud`` (a plain or labeled cloud) to ``n`` points.

    The selection depends only on ``(N, n, seed)``; chosen points keep their
    original relative order and are re-indexed from 0.
    """
    base = cloud.cloud if isinstance(cloud, LabeledPointCloud) else cloud
    idx = subsample_indices(base.n, n, seed)
    return cloud.take(idx)
