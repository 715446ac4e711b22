"""Newton bases for kernel spaces, per component and in tensor form.

The Newton basis of a kernel space on centers ``x_1, ..., x_m`` is the
native-space-orthonormal basis obtained by Gram-Schmidt in center order
(Pazouki & Schaback 2011).  Its Vandermonde matrix at the centers,
``L[j, k] = n_k(x_j)``, is lower triangular and coincides with the Cholesky
factor of the interpolation matrix; the diagonal carries the power values
``L[k, k] = P_{X_{k-1}}(x_k)``.  Basis functions are represented implicitly
by (centers, L) and evaluated by the forward recursion

    n_k(x) = (K(x, x_k) - sum_{j<k} L[k, j] n_j(x)) / L[k, k],

never as explicit coefficient expansions, so extending by one center costs
O(m) per evaluation point.

For a product kernel on a grid the tensor Newton basis consists of products
of component Newton functions; its Vandermonde matrix on the grid is the
Kronecker product of the component Vandermonde matrices under the canonical
ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from prodkernel import linalg
from prodkernel.exceptions import BasisBreakdownError
from prodkernel.gridpoints import GridPointSet
from prodkernel.interpolation import NEGATIVE_RADICAND_RTOL
from prodkernel.kernels import ComponentKernel, ProductKernel, _as_points

# Squared power values at or below BREAKDOWN_RTOL * K(x, x) count as
# numerically rank-deficient; same notion as linalg.PIVOT_RTOL.
BREAKDOWN_RTOL = linalg.PIVOT_RTOL


@dataclass(frozen=True)
class NewtonBasis:
    """Newton basis of one component kernel, held as (centers, Vandermonde)."""

    kernel: ComponentKernel
    centers: np.ndarray
    vandermonde: np.ndarray

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=np.float64).reshape(-1, self.kernel.dim)
        L = np.asarray(self.vandermonde, dtype=np.float64)
        if L.shape != (len(centers), len(centers)):
            raise ValueError("Vandermonde matrix must be square of order len(centers)")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "vandermonde", L)

    def __len__(self):
        return len(self.centers)

    @property
    def power_diag(self) -> np.ndarray:
        """Power values ``P_{X_{k-1}}(x_k)`` along the construction."""
        return np.diagonal(self.vandermonde)


def _breakdown_tol(kernel: ComponentKernel) -> float:
    return BREAKDOWN_RTOL * kernel.value_at_zero()


def empty_basis(kernel: ComponentKernel) -> NewtonBasis:
    return NewtonBasis(kernel, np.zeros((0, kernel.dim)), np.zeros((0, 0)))


def newton_build(kernel: ComponentKernel, points) -> NewtonBasis:
    """Build the Newton basis on the given centers, in the given order.

    Columns are produced by the update recursion itself (no external
    factorization); raises :class:`BasisBreakdownError` with the offending
    0-based index when a squared power value falls to the numerical-rank
    tolerance, e.g. for duplicate centers.
    """
    points = _as_points(points, kernel.dim)
    m = len(points)
    L = np.zeros((m, m))
    tol = _breakdown_tol(kernel)
    for k in range(m):
        # values of the k-th basis numerator at centers k..m-1
        col = kernel.gram(points[k:], points[k : k + 1])[:, 0]
        if k:
            col -= L[k:, :k] @ L[k, :k]
        pivot = col[0]
        if pivot <= tol:
            raise BasisBreakdownError(
                f"degenerate center at index {k}: squared power value "
                f"{pivot:.3e} is at or below tolerance {tol:.3e}",
                k,
            )
        L[k:, k] = col / math.sqrt(pivot)
    return NewtonBasis(kernel, points, L)


def newton_eval_many(basis: NewtonBasis, points) -> np.ndarray:
    """Values of all basis functions at many points, as an (n, m) array."""
    points = _as_points(points, basis.kernel.dim)
    if len(basis) == 0:
        return np.zeros((len(points), 0))
    crosses = basis.kernel.gram(basis.centers, points)
    return linalg.solve_lower(basis.vandermonde, crosses).T


def newton_eval(basis: NewtonBasis, x) -> np.ndarray:
    """Values ``(n_1(x), ..., n_m(x))`` via the forward recursion."""
    return newton_eval_many(basis, np.atleast_2d(np.asarray(x, dtype=np.float64)))[0]


def newton_extend(basis: NewtonBasis, x_new) -> NewtonBasis:
    """Extend a basis by one center; identical to a full rebuild.

    Raises :class:`BasisBreakdownError` if the new center is (numerically) in
    the span of the existing ones, e.g. a repeated center.
    """
    x_new = np.asarray(x_new, dtype=np.float64).reshape(1, -1)
    row = newton_eval_many(basis, x_new)[0]
    pivot = basis.kernel.value_at_zero() - float(row @ row)
    if pivot <= _breakdown_tol(basis.kernel):
        raise BasisBreakdownError(
            f"degenerate center at index {len(basis)}: squared power value "
            f"{pivot:.3e} is at or below tolerance {_breakdown_tol(basis.kernel):.3e}",
            len(basis),
        )
    return _extend_with_row(basis, x_new[0], row, math.sqrt(pivot))


def _extend_with_row(basis: NewtonBasis, x_new, row, power) -> NewtonBasis:
    """Extension primitive given precomputed basis values at the new center."""
    m = len(basis)
    L = np.zeros((m + 1, m + 1))
    L[:m, :m] = basis.vandermonde
    L[m, :m] = row
    L[m, m] = power
    centers = np.vstack([basis.centers, np.asarray(x_new, dtype=np.float64).reshape(1, -1)])
    return NewtonBasis(basis.kernel, centers, L)


def power_from_basis_many(basis: NewtonBasis, points) -> np.ndarray:
    """Power values ``P_X`` at many points, from the orthonormal expansion
    ``P_X(x)^2 = K(x, x) - sum_k n_k(x)^2`` (clamped at zero)."""
    vals = newton_eval_many(basis, points)
    kxx = basis.kernel.value_at_zero()
    rad = kxx - np.einsum("ij,ij->i", vals, vals)
    low = np.min(rad) if len(rad) else 0.0
    if low < -NEGATIVE_RADICAND_RTOL * kxx:
        raise ArithmeticError(
            f"squared power value {low:.3e} is negative beyond round-off"
        )
    return np.sqrt(np.maximum(rad, 0.0))


def power_from_basis(basis: NewtonBasis, x) -> float:
    return float(power_from_basis_many(basis, np.atleast_2d(np.asarray(x, dtype=np.float64)))[0])


def power_product(pk: ProductKernel, component_powers, diagonal_values) -> float:
    """Power function of the product kernel on a grid, from component powers:

        P_X(x)^2 = prod_i K_i(x^i, x^i) - prod_i (K_i(x^i, x^i) - P_{X^i}(x^i)^2).
    """
    powers = np.asarray(component_powers, dtype=np.float64)
    diags = np.asarray(diagonal_values, dtype=np.float64)
    if powers.shape != diags.shape:
        raise ValueError("component power and diagonal vectors must have equal length")
    if np.any(powers < 0.0) or np.any(diags < powers**2):
        raise ValueError("need K_i(x,x) >= P_i(x)^2 >= 0 for every component")
    rad = float(np.prod(diags) - np.prod(diags - powers**2))
    return _clamped_power(rad, float(np.prod(diags)))


def _clamped_power(radicand: float, scale: float) -> float:
    if radicand < -NEGATIVE_RADICAND_RTOL * scale:
        raise ArithmeticError(
            f"squared power value {radicand:.3e} is negative beyond round-off"
        )
    return math.sqrt(max(radicand, 0.0))


@dataclass(frozen=True)
class TensorNewtonBasis:
    """Newton basis of a product kernel on a grid: products of component
    Newton functions, one basis per component."""

    component_bases: tuple

    def __post_init__(self):
        object.__setattr__(self, "component_bases", tuple(self.component_bases))

    @classmethod
    def from_grid(cls, pk: ProductKernel, g: GridPointSet) -> "TensorNewtonBasis":
        if len(pk.components) != len(g.factors):
            raise ValueError("grid factor count does not match component count")
        return cls(tuple(
            newton_build(comp, factor.points)
            for comp, factor in zip(pk.components, g.factors)
        ))

    @property
    def sizes(self) -> tuple:
        return tuple(len(b) for b in self.component_bases)


def tensor_vandermonde(tb: TensorNewtonBasis, g: GridPointSet) -> np.ndarray:
    """Evaluation matrix of the tensor basis on a grid: the Kronecker product
    of the component evaluation matrices (canonical ordering)."""
    if len(tb.component_bases) != len(g.factors):
        raise ValueError("grid factor count does not match basis count")
    blocks = [
        newton_eval_many(b, factor.points)
        for b, factor in zip(tb.component_bases, g.factors)
    ]
    return reduce(linalg.kron, blocks)


def newton_coeffs(tb: TensorNewtonBasis, values) -> np.ndarray:
    """Coefficients of the grid interpolant in the tensor Newton basis.

    ``values`` are the target values in canonical grid order; the triangular
    system with the Kronecker-factored Vandermonde matrix is solved axis by
    axis.
    """
    values = np.asarray(values, dtype=np.float64)
    Ls = [b.vandermonde for b in tb.component_bases]
    return linalg.kron_solve_lower(Ls, values)


def tensor_newton_evaluate(tb: TensorNewtonBasis, coeff_tensor, points) -> np.ndarray:
    """Evaluate ``sum c_(j1..jM) prod_i n_(i,j_i)(x^i)`` at full-dim points.

    ``coeff_tensor`` has one axis per component (sizes matching the bases).
    """
    coeff_tensor = np.asarray(coeff_tensor, dtype=np.float64)
    if coeff_tensor.shape != tb.sizes:
        raise ValueError(
            f"coefficient tensor of shape {coeff_tensor.shape} does not match "
            f"basis sizes {tb.sizes}"
        )
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    offset = 0
    out = None
    for i, basis in enumerate(tb.component_bases):
        sl = slice(offset, offset + basis.kernel.dim)
        offset += basis.kernel.dim
        vals = newton_eval_many(basis, points[:, sl])  # (n, m_i)
        if i == 0:
            out = np.tensordot(vals, coeff_tensor, axes=([1], [0]))  # (n, m2..mM)
        else:
            out = np.einsum("tj,tj...->t...", vals, out)
    return np.asarray(out).reshape(len(points))
