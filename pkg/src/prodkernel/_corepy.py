"""Pure-NumPy kernel evaluation, the fallback for the compiled extension.

Family codes match ``_core.pyx``: 0 = Askey, 1 = Wendland C6 (d=1),
2 = Wendland C6 (d=3), 3 = Gaussian.  ``p0`` carries the family parameter
(Askey exponent or Gaussian width); it is ignored by the Wendland families.
"""

import numpy as np

ASKEY = 0
WENDLAND13 = 1
WENDLAND33 = 2
GAUSSIAN = 3


def _profile(family, p0, r):
    """Radial profile evaluated on an array of nonnegative radii."""
    if family == GAUSSIAN:
        return np.exp(-p0 * r * r)
    u = np.maximum(1.0 - r, 0.0)
    if family == ASKEY:
        return u**p0
    u2 = u * u
    u4 = u2 * u2
    if family == WENDLAND13:
        poly = ((315.0 * r + 285.0) * r + 105.0) * r + 15.0
        return u4 * u2 * u * poly
    if family == WENDLAND33:
        poly = ((32.0 * r + 25.0) * r + 8.0) * r + 1.0
        return u4 * u4 * poly
    raise ValueError(f"unknown family code {family}")


def cross_gram(family, p0, shape, X, Y):
    """Kernel cross matrix ``(k(x_i, y_j))`` for one component kernel.

    X is (n, d), Y is (m, d); returns (n, m).  The radius argument is
    ``shape * ||x - y||``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    if X.shape[1] == 1:
        r = np.abs(X[:, 0, None] - Y[None, :, 0])
    else:
        diff = X[:, None, :] - Y[None, :, :]
        r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return _profile(family, p0, shape * r)
