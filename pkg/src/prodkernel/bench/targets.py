"""Test targets and component point-set ladders for the experiments."""

from __future__ import annotations

import numpy as np

from prodkernel.gridpoints import ComponentPointSet


def franke(x, y):
    """Franke's function, the standard bivariate test target."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return (
        0.75 * np.exp(-((9 * x - 2) ** 2 + (9 * y - 2) ** 2) / 4)
        + 0.75 * np.exp(-((9 * x + 1) ** 2) / 49 - ((9 * y + 1) ** 2) / 10)
        + 0.5 * np.exp(-((9 * x - 7) ** 2 + (9 * y - 3) ** 2) / 4)
        - 0.2 * np.exp(-((9 * x - 4) ** 2) - (9 * y - 7) ** 2)
    )


def franke_points(points):
    """Franke's function on an (n, 2) array of points."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    return franke(points[:, 0], points[:, 1])


def franke_restriction(y0: float = 0.25):
    """Univariate restriction ``x -> f(x, y0)`` as an oracle on (n, 1) arrays."""

    def target(points):
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return franke(points[:, 0], y0)

    return target


def make_xj(j: int) -> ComponentPointSet:
    """Equispaced ladder set ``{k / 2^j : k = 0..2^j}`` with 2^j + 1 points."""
    if not 1 <= j <= 12:
        raise ValueError(f"ladder index must be in 1..12, got {j}")
    n = 2**j
    return ComponentPointSet(1, np.arange(n + 1) / n)


def uniform_axis(count: int, lo: float = 0.0, hi: float = 1.0) -> ComponentPointSet:
    """Equispaced points on [lo, hi] as a univariate component set."""
    if count < 2:
        raise ValueError("need at least two points per axis")
    return ComponentPointSet(1, np.linspace(lo, hi, count))
