import numpy as np
import pytest

from prodkernel import ComponentKernel, Family, ProductKernel


def max_rel_diff(A, B):
    """Max entrywise difference, relative to the magnitude of B."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    scale = max(float(np.max(np.abs(B))), 1e-300)
    return float(np.max(np.abs(A - B))) / scale


def seeded_points(rng, n, dim, lo=0.0, hi=1.0, min_sep=None):
    """n seeded points in [lo, hi]^dim, optionally with a minimum separation."""
    if min_sep is None:
        return rng.uniform(lo, hi, size=(n, dim))
    pts = []
    while len(pts) < n:
        cand = rng.uniform(lo, hi, size=dim)
        if all(np.linalg.norm(cand - p) >= min_sep for p in pts):
            pts.append(cand)
    return np.array(pts)


@pytest.fixture
def askey8():
    return ComponentKernel(Family.ASKEY, (8.0,))


@pytest.fixture
def wendland13():
    return ComponentKernel(Family.WENDLAND13)


@pytest.fixture
def askey_w13_product(askey8, wendland13):
    return ProductKernel((askey8, wendland13))
