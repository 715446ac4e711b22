"""Dense symmetric linear algebra: Kronecker products, Cholesky, triangular
solves, spectral extremes.

Matrices are plain float64 ndarrays in row-major order.  Factorizations and
eigensolves are backed by LAPACK (via numpy/scipy); the module adds the
contracts used across the package: the Kronecker entry convention

    (A (x) B)[j, k] = A[j // p, k // q] * B[j % p, k % q],   B being p x q,

a size guard for dense results, and a shared numerical-rank notion for
Cholesky pivots.
"""

import numpy as np
import scipy.linalg
from scipy.linalg.lapack import dpotrf

from prodkernel.exceptions import NotPositiveDefiniteError, SizeLimitError

# Largest number of entries a dense result may have (desk-scale safety).
MAX_DENSE_ENTRIES = 2**26

# A Cholesky pivot at or below PIVOT_RTOL * max(diag(A)) counts as numerically
# semi-definite (e.g. duplicate points) rather than round-off.
PIVOT_RTOL = 1e-13

# Relative asymmetry above this is rejected by the symmetric operations.
SYMMETRY_RTOL = 1e-12


def _as_matrix(A):
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {A.shape}")
    return A


def _check_symmetric(A, what):
    scale = np.max(np.abs(A)) if A.size else 0.0
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"{what} needs a square matrix, got {A.shape}")
    if A.size and np.max(np.abs(A - A.T)) > SYMMETRY_RTOL * scale:
        raise ValueError(f"{what} needs a symmetric matrix")


def kron(A, B):
    """Kronecker product with a size guard on the dense result."""
    A = _as_matrix(A)
    B = _as_matrix(B)
    entries = A.shape[0] * B.shape[0] * A.shape[1] * B.shape[1]
    if entries > MAX_DENSE_ENTRIES:
        raise SizeLimitError(
            f"Kronecker result would have {entries} entries "
            f"(limit {MAX_DENSE_ENTRIES})"
        )
    return np.kron(A, B)


def cholesky(A):
    """Lower Cholesky factor of a symmetric positive definite matrix.

    Raises :class:`NotPositiveDefiniteError` (carrying the 0-based failing
    index) if factorization breaks down or any pivot falls at or below
    ``PIVOT_RTOL * max(diag(A))``.
    """
    A = _as_matrix(A)
    _check_symmetric(A, "cholesky")
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    diag_scale = float(np.max(np.diagonal(A)))
    if diag_scale <= 0.0:
        raise NotPositiveDefiniteError(
            "matrix has no positive diagonal entry", int(np.argmax(np.diagonal(A)))
        )
    c, info = dpotrf(A, lower=1, clean=1, overwrite_a=0)
    if info > 0:
        raise NotPositiveDefiniteError(
            f"factorization failed at row {info - 1}", info - 1
        )
    if info < 0:
        raise ValueError(f"illegal value in argument {-info} of dpotrf")
    pivots = np.diagonal(c) ** 2
    bad = np.nonzero(pivots <= PIVOT_RTOL * diag_scale)[0]
    if bad.size:
        raise NotPositiveDefiniteError(
            f"pivot {pivots[bad[0]]:.3e} at row {bad[0]} is below the "
            f"numerical-rank tolerance",
            int(bad[0]),
        )
    return c


def _check_solvable(L, b):
    L = _as_matrix(L)
    b = np.asarray(b, dtype=np.float64)
    if L.shape[0] != L.shape[1]:
        raise ValueError(f"triangular solve needs a square matrix, got {L.shape}")
    if b.shape[0] != L.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {L.shape}, rhs {b.shape}")
    if L.size and np.any(np.diagonal(L) == 0.0):
        raise ZeroDivisionError("triangular matrix has a zero diagonal entry")
    return L, b


def solve_lower(L, b):
    """Solve ``L x = b`` by forward substitution (L lower triangular)."""
    L, b = _check_solvable(L, b)
    if L.shape[0] == 0:
        return np.zeros_like(b)
    return scipy.linalg.solve_triangular(L, b, lower=True)


def solve_upper(L, b):
    """Solve ``L^T x = b`` by back substitution, given the lower factor L."""
    L, b = _check_solvable(L, b)
    if L.shape[0] == 0:
        return np.zeros_like(b)
    return scipy.linalg.solve_triangular(L, b, lower=True, trans="T")


def sym_eig_extremes(A):
    """Smallest and largest eigenvalue of a symmetric matrix."""
    A = _as_matrix(A)
    _check_symmetric(A, "sym_eig_extremes")
    w = np.linalg.eigvalsh(A)
    return float(w[0]), float(w[-1])


def cond2(A):
    """Spectral condition number ``sigma_max / sigma_min`` of an SPD matrix."""
    lo, hi = sym_eig_extremes(A)
    if lo <= 0.0:
        raise NotPositiveDefiniteError(
            f"smallest eigenvalue {lo:.3e} is not positive", 0
        )
    return hi / lo


def _apply_mode(solve, mats, T):
    """Apply ``solve(mats[i], .)`` along every axis i of tensor T."""
    for i, M in enumerate(mats):
        if M.shape[0] != T.shape[i]:
            raise ValueError(
                f"axis {i} has length {T.shape[i]} but factor is {M.shape[0]} x {M.shape[1]}"
            )
        moved = np.moveaxis(T, i, 0)
        rest = int(np.prod(moved.shape[1:], dtype=np.int64))
        flat = moved.reshape(M.shape[0], rest)
        solved = solve(M, flat) if M.shape[0] else flat
        T = np.moveaxis(solved.reshape(moved.shape), 0, i)
    return T


def kron_solve_lower(Ls, b):
    """Solve ``(L_1 (x) ... (x) L_M) x = b`` by axis-wise forward substitution.

    ``b`` is a vector in the canonical order (last factor fastest), or a
    tensor with one axis per factor.  An empty factor list treats the system
    as the 1 x 1 identity.
    """
    return _kron_solve(solve_lower, Ls, b)


def kron_solve_upper(Ls, b):
    """Solve ``(L_1 (x) ... (x) L_M)^T x = b`` given the lower factors."""
    return _kron_solve(solve_upper, Ls, b)


def _kron_solve(solve, Ls, b):
    Ls = [_as_matrix(L) for L in Ls]
    b = np.asarray(b, dtype=np.float64)
    sizes = tuple(L.shape[0] for L in Ls)
    was_vector = b.ndim == 1
    T = b.reshape(sizes) if was_vector else b
    if T.shape != sizes:
        raise ValueError(f"rhs of shape {b.shape} does not match factor sizes {sizes}")
    out = _apply_mode(solve, Ls, T)
    return out.reshape(-1) if was_vector else out
