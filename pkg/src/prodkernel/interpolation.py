"""Kernel interpolation: matrix assembly (direct and Kronecker-structured),
fitting, evaluation, tensor-product targets, and the power function.

The interpolant has the form ``s(x) = sum_i c_i K(x, x_i)``; its coefficients
solve ``A c = f_X`` with the interpolation matrix ``A = (K(x_i, x_j))``.  On a
grid-like set with the canonical ordering, ``A`` is the Kronecker product of
the per-component interpolation matrices, which is what
:func:`assemble_kronecker` exploits.  The solve uses an unpivoted Cholesky
factorization in the given point order; ill-conditioning is reported via
exceptions, never repaired by regularization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from prodkernel import linalg
from prodkernel.gridpoints import GridPointSet, enumerate_grid
from prodkernel.kernels import ProductKernel

# Radicands of squared power values in [-NEGATIVE_RADICAND_RTOL * K(x,x), 0)
# are round-off and clamp to zero; anything more negative is an error.
NEGATIVE_RADICAND_RTOL = 1e-10


@dataclass(frozen=True)
class Interpolant:
    """Kernel expansion ``s(x) = sum_i coeffs[i] * K(x, centers[i])``."""

    kernel: ProductKernel
    centers: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        centers = np.atleast_2d(np.asarray(self.centers, dtype=np.float64))
        coeffs = np.asarray(self.coeffs, dtype=np.float64).reshape(-1)
        if centers.size == 0:
            centers = centers.reshape(0, self.kernel.total_dim)
        if centers.shape[1] != self.kernel.total_dim:
            raise ValueError(
                f"centers of dimension {centers.shape[1]} do not match "
                f"kernel dimension {self.kernel.total_dim}"
            )
        if len(coeffs) != len(centers):
            raise ValueError("one coefficient per center required")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "coeffs", coeffs)

    def evaluate(self, x) -> float:
        return float(self.evaluate_many(np.atleast_2d(np.asarray(x, dtype=np.float64)))[0])

    def evaluate_many(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if len(self.centers) == 0:
            return np.zeros(len(points))
        return self.kernel.gram(points, self.centers) @ self.coeffs

    def __call__(self, points):
        return self.evaluate_many(points)


@dataclass(frozen=True)
class TensorProductInterpolant:
    """Product of per-component interpolants, ``s(x) = prod_i s_i(x^i)``.

    Stored in factored form; never expanded to the full grid expansion.
    """

    kernel: ProductKernel
    factors: tuple

    def evaluate(self, x) -> float:
        return float(self.evaluate_many(np.atleast_2d(np.asarray(x, dtype=np.float64)))[0])

    def evaluate_many(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        out = np.ones(len(points))
        for s_i, sl in zip(self.factors, self.kernel.slices()):
            out *= s_i.evaluate_many(points[:, sl])
        return out

    def __call__(self, points):
        return self.evaluate_many(points)


def assemble_direct(pk: ProductKernel, points) -> np.ndarray:
    """Interpolation matrix ``(K(x_i, x_j))`` by direct pairwise evaluation."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    return pk.gram(points, points)


def assemble_kronecker(pk: ProductKernel, g: GridPointSet) -> np.ndarray:
    """Interpolation matrix on a grid, as the Kronecker product of the
    per-component matrices (canonical ordering)."""
    if len(g.factors) != len(pk.components):
        raise ValueError(
            f"grid has {len(g.factors)} factors but kernel has "
            f"{len(pk.components)} components"
        )
    blocks = []
    for comp, factor in zip(pk.components, g.factors):
        if comp.dim != factor.dim:
            raise ValueError("factor dimension does not match component dimension")
        blocks.append(comp.gram(factor.points, factor.points))
    return reduce(linalg.kron, blocks)


def fit(pk: ProductKernel, points, values) -> Interpolant:
    """Interpolate values at pairwise distinct points.

    Solves the interpolation system by Cholesky factorization and two
    triangular solves; propagates :class:`NotPositiveDefiniteError` on
    breakdown.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if len(values) != len(points):
        raise ValueError("one value per point required")
    A = assemble_direct(pk, points)
    L = linalg.cholesky(A)
    coeffs = linalg.solve_upper(L, linalg.solve_lower(L, values))
    return Interpolant(pk, points, coeffs)


def evaluate(s, x) -> float:
    """Evaluate an interpolant at a single point."""
    return s.evaluate(x)


def fit_grid(pk: ProductKernel, g: GridPointSet, values) -> Interpolant:
    """Interpolate values given in canonical grid order, assembling the
    matrix via its Kronecker factorization."""
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if len(values) != len(g):
        raise ValueError("one value per grid point required")
    A = assemble_kronecker(pk, g)
    L = linalg.cholesky(A)
    coeffs = linalg.solve_upper(L, linalg.solve_lower(L, values))
    return Interpolant(pk, enumerate_grid(g), coeffs)


def fit_tensor_target(pk: ProductKernel, g: GridPointSet, component_values) -> TensorProductInterpolant:
    """Interpolate a tensor-product target ``f = prod_i f_i`` on a grid.

    ``component_values[i]`` samples ``f_i`` on factor i.  Each component is
    fitted separately; the result evaluates as the product of the component
    interpolants, which coincides with the full grid interpolant of the
    tensor-product data.
    """
    if len(component_values) != len(pk.components):
        raise ValueError(
            f"got {len(component_values)} value vectors for "
            f"{len(pk.components)} components"
        )
    if len(g.factors) != len(pk.components):
        raise ValueError("grid factor count does not match component count")
    factors = []
    for comp, factor, vals in zip(pk.components, g.factors, component_values):
        sub = ProductKernel((comp,))
        factors.append(fit(sub, factor.points, vals))
    return TensorProductInterpolant(pk, tuple(factors))


def _clamped_sqrt(radicand: float, scale: float) -> float:
    if radicand < -NEGATIVE_RADICAND_RTOL * scale:
        raise ArithmeticError(
            f"squared power value {radicand:.3e} is negative beyond round-off "
            f"(scale {scale:.3e})"
        )
    return math.sqrt(max(radicand, 0.0))


def power_function_direct(pk: ProductKernel, points, x) -> float:
    """Power function ``P_X(x) = sqrt(K(x,x) - k_x^T A^{-1} k_x)``.

    ``points`` may be empty, in which case the value is ``sqrt(K(x, x))``.
    """
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    kxx = pk.value_at_zero()
    points = np.asarray(points, dtype=np.float64)
    if points.size == 0:
        return math.sqrt(kxx)
    points = np.atleast_2d(points)
    A = assemble_direct(pk, points)
    L = linalg.cholesky(A)
    kx = pk.gram(points, x)[:, 0]
    z = linalg.solve_lower(L, kx)
    return _clamped_sqrt(kxx - float(z @ z), kxx)


def mse(s, target, eval_points) -> float:
    """Mean squared error of an interpolant against a target oracle.

    ``target`` maps an (n, d) array of points to n values.
    """
    eval_points = np.atleast_2d(np.asarray(eval_points, dtype=np.float64))
    if len(eval_points) == 0:
        raise ValueError("mse needs at least one evaluation point")
    err = s.evaluate_many(eval_points) - np.asarray(target(eval_points), dtype=np.float64)
    return float(np.mean(err**2))
