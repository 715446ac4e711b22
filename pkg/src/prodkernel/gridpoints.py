"""Grid-like point sets: Cartesian factors, canonical enumeration order,
projections, completion of scattered sets to covering grids.

The canonical order enumerates the grid with the *last* factor running
fastest; for two factors of sizes (N1, N2) the k-th point (1-based) is

    x_k = (x^1_{ceil(k / N2)}, x^2_{(k - 1) mod N2 + 1}).

Every Kronecker identity in the package assumes this single convention.
Point equality uses rounding to 12 significant digits, so coordinates from
closed-form constructions (e.g. 2^-j * k) compare reliably.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from prodkernel.exceptions import SizeLimitError
from prodkernel.linalg import MAX_DENSE_ENTRIES

CANONICAL_DIGITS = 12


def canonical_key(point) -> tuple:
    """Hashable key of a point after rounding to 12 significant digits."""
    pt = np.atleast_1d(np.asarray(point, dtype=np.float64))
    return tuple(float(f"{v:.{CANONICAL_DIGITS}g}") for v in pt)


@dataclass(frozen=True)
class ComponentPointSet:
    """Ordered, pairwise distinct points in one factor space."""

    dim: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(f"expected points of dimension {self.dim}, got shape {pts.shape}")
        keys = {canonical_key(p) for p in pts}
        if len(keys) != len(pts):
            raise ValueError("component points must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class GridPointSet:
    """Cartesian product of component point sets."""

    factors: tuple
    total_dim: int = field(init=False)

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a grid needs at least one factor")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "total_dim", sum(f.dim for f in factors))

    @property
    def sizes(self) -> tuple:
        return tuple(len(f) for f in self.factors)

    def __len__(self):
        n = 1
        for f in self.factors:
            n *= len(f)
        return n


def index_decompose(k: int, sizes) -> tuple:
    """Multi-index (1-based) of the k-th grid point in canonical order.

    ``k`` runs from 1 to prod(sizes); the returned tuple (j_1, ..., j_M)
    selects point j_i from factor i, with the last factor fastest.
    """
    sizes = tuple(int(s) for s in sizes)
    total = int(np.prod(sizes))
    if not 1 <= k <= total:
        raise ValueError(f"index {k} out of range 1..{total}")
    return tuple(int(j) + 1 for j in np.unravel_index(k - 1, sizes))


def enumerate_grid(g: GridPointSet) -> np.ndarray:
    """All grid points in canonical order, as an (N, total_dim) array."""
    sizes = g.sizes
    total = len(g)
    if total * g.total_dim > MAX_DENSE_ENTRIES:
        raise SizeLimitError(
            f"enumerated grid would have {total * g.total_dim} entries "
            f"(limit {MAX_DENSE_ENTRIES})"
        )
    if total == 0:
        return np.zeros((0, g.total_dim))
    blocks = []
    for i, f in enumerate(g.factors):
        inner = int(np.prod(sizes[i + 1 :], dtype=np.int64)) if i + 1 < len(sizes) else 1
        outer = total // (len(f) * inner)
        block = np.repeat(f.points, inner, axis=0)
        blocks.append(np.tile(block, (outer, 1)))
    return np.hstack(blocks)


def project(points, pk) -> list:
    """Distinct coordinate-slice values per component, in first-occurrence order."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != pk.total_dim:
        raise ValueError(
            f"expected points of dimension {pk.total_dim}, got shape {points.shape}"
        )
    out = []
    for comp, sl in zip(pk.components, pk.slices()):
        seen = {}
        for p in points[:, sl]:
            key = canonical_key(p)
            if key not in seen:
                seen[key] = p
        out.append(ComponentPointSet(comp.dim, np.array(list(seen.values()))))
    return out


def embed_scattered(points, pk) -> GridPointSet:
    """Smallest covering grid whose factors are the distinct coordinate slices.

    Every input point appears in the enumerated grid (duplicate projected
    coordinates are de-duplicated here).
    """
    points = np.asarray(points, dtype=np.float64)
    keys = {canonical_key(p) for p in points}
    if len(keys) != len(points):
        raise ValueError("scattered points must be pairwise distinct")
    return GridPointSet(tuple(project(points, pk)))


def write_points_csv(path, points):
    """Write points to CSV: one point per row, columns ``x1,...,xd``."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(points.shape[1])])
        for row in points:
            writer.writerow([repr(float(v)) for v in row])


def read_points_csv(path) -> np.ndarray:
    """Read a point set written by :func:`write_points_csv`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header != [f"x{i + 1}" for i in range(len(header))]:
            raise ValueError(f"{path}: expected header x1,...,xd, got {header!r}")
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        return np.zeros((0, len(header)))
    out = np.asarray(rows, dtype=np.float64)
    if out.shape[1] != len(header):
        raise ValueError(f"{path}: ragged rows")
    return out
