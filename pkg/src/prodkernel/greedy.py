"""Componentwise P-greedy point selection.

Plain greedy selection destroys grid structure; the componentwise variant
instead grows one *factor* of a grid-like set per iteration.  Each step picks
the component whose power function has the largest sup over its candidate
set, then the maximizing candidate within that component:

    i_n  = argmax_i  max_{y in Omega_i} P_{X_n^i}(y),
    x    = argmax_{y in Omega_i_n} P_{X_n^i_n}(y),

with ties broken by lowest component index, then lowest candidate index.
The grid gains the slab ``X^1 x ... x {x} x ... x X^M``; the new interpolant
coefficients solve a triangular system whose matrix is the Kronecker product
of the *other* components' Newton Vandermonde factors, scaled by the selected
power value.  Candidate power values and basis values are cached per
component and updated incrementally.

Sups over the continuous component domains are realized as maxima over the
finite candidate grids supplied by the caller.  Empty component sets are
handled by the convention ``P_empty(x) = sqrt(K_i(x, x))``, so the first M
steps bootstrap one center into each component under the same rule.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from prodkernel import linalg
from prodkernel.exceptions import CandidatesExhaustedError, PowerBreakdown
from prodkernel.gridpoints import ComponentPointSet, GridPointSet, enumerate_grid
from prodkernel.interpolation import Interpolant
from prodkernel.kernels import ProductKernel
from prodkernel.newton import BREAKDOWN_RTOL, NewtonBasis, _extend_with_row, empty_basis


@dataclass(frozen=True)
class CandidateGrid:
    """Finite candidate sets, one per component."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("need at least one candidate factor")
        for f in factors:
            if not isinstance(f, ComponentPointSet):
                raise TypeError("candidate factors must be ComponentPointSet instances")
            if len(f) == 0:
                raise ValueError("candidate sets must be nonempty")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_arrays(cls, pk: ProductKernel, arrays) -> "CandidateGrid":
        if len(arrays) != len(pk.components):
            raise ValueError("one candidate array per kernel component required")
        return cls(tuple(
            ComponentPointSet(c.dim, np.asarray(a, dtype=np.float64))
            for c, a in zip(pk.components, arrays)
        ))


@dataclass(frozen=True)
class TraceEntry:
    """One greedy iteration: selected component, point, and its sup power."""

    step: int
    component: int
    point: tuple
    sup_power: float


@dataclass(frozen=True)
class GreedyState:
    """Snapshot of a componentwise P-greedy run.

    ``coeffs`` holds the interpolant in the tensor Newton basis, one axis per
    component; ``cand_values`` / ``cand_power2`` cache basis values and
    squared power values on the candidate sets.
    """

    pk: ProductKernel
    candidates: CandidateGrid
    bases: tuple
    cand_values: tuple
    cand_power2: tuple
    selected: tuple
    coeffs: np.ndarray
    step_count: int
    trace: tuple

    @property
    def sizes(self) -> tuple:
        return tuple(len(b) for b in self.bases)

    @property
    def grid_size(self) -> int:
        return int(np.prod(self.sizes, dtype=np.int64))

    def component_sets(self) -> list:
        """Current per-component point sets, in selection order."""
        return [
            ComponentPointSet(b.kernel.dim, b.centers) if len(b) else None
            for b in self.bases
        ]

    def grid(self) -> GridPointSet:
        if any(len(b) == 0 for b in self.bases):
            raise ValueError("grid is empty until every component has a point")
        return GridPointSet(tuple(
            ComponentPointSet(b.kernel.dim, b.centers) for b in self.bases
        ))


def initial_state(pk: ProductKernel, candidates: CandidateGrid) -> GreedyState:
    if len(candidates.factors) != len(pk.components):
        raise ValueError("one candidate factor per kernel component required")
    for comp, fac in zip(pk.components, candidates.factors):
        if comp.dim != fac.dim:
            raise ValueError("candidate dimension does not match component dimension")
    bases = tuple(empty_basis(c) for c in pk.components)
    cand_values = tuple(np.zeros((len(f), 0)) for f in candidates.factors)
    cand_power2 = tuple(
        np.full(len(f), c.value_at_zero())
        for c, f in zip(pk.components, candidates.factors)
    )
    coeffs = np.zeros(tuple(0 for _ in pk.components))
    return GreedyState(pk, candidates, bases, cand_values, cand_power2,
                       tuple(() for _ in pk.components), coeffs, 0, ())


def _component_best(state: GreedyState, i: int):
    """Best unselected candidate of component i: (index, squared power)."""
    taken = np.zeros(len(state.candidates.factors[i]), dtype=bool)
    taken[list(state.selected[i])] = True
    open_idx = np.nonzero(~taken)[0]
    if open_idx.size == 0:
        return None
    p2 = state.cand_power2[i][open_idx]
    best = int(open_idx[np.argmax(p2)])
    return best, float(state.cand_power2[i][best])


def _selection(state: GreedyState):
    """Selected (component, candidate index, squared power); ties to lowest index."""
    best = None
    for i in range(len(state.bases)):
        cand = _component_best(state, i)
        if cand is None:
            continue
        if best is None or cand[1] > best[2]:
            best = (i, cand[0], cand[1])
    if best is None:
        raise CandidatesExhaustedError("every candidate of every component is selected")
    return best


def max_sup_power(state: GreedyState) -> float:
    """Largest power value over all unselected candidates of any component."""
    _, _, p2 = _selection(state)
    return math.sqrt(max(p2, 0.0))


def select_component(state: GreedyState) -> int:
    """Component whose power function has the largest sup over candidates."""
    return _selection(state)[0]


def select_point(state: GreedyState, i: int) -> np.ndarray:
    """Maximizing unselected candidate point of component i."""
    cand = _component_best(state, i)
    if cand is None:
        raise CandidatesExhaustedError(f"component {i} has no unselected candidates")
    return state.candidates.factors[i].points[cand[0]].copy()


def _mode_multiply(mats, T):
    """Apply ``mats[i] @ .`` along every axis i of tensor T."""
    for i, M in enumerate(mats):
        moved = np.moveaxis(T, i, 0)
        rest = int(np.prod(moved.shape[1:], dtype=np.int64))
        out = M @ moved.reshape(T.shape[i], rest)
        T = np.moveaxis(out.reshape((M.shape[0],) + moved.shape[1:]), 0, i)
    return T


def greedy_step(state: GreedyState, f_oracle) -> GreedyState:
    """One componentwise P-greedy iteration.

    Extends the selected component by its maximizing candidate, updates the
    Newton basis and the cached candidate values, and solves the triangular
    slab system for the new interpolant coefficients.  ``f_oracle`` is called
    once, on the new slab of grid points only.

    Raises :class:`PowerBreakdown` (a clean stop, not a failure) when the
    best available squared power value is at or below the numerical-rank
    tolerance, and :class:`CandidatesExhaustedError` when nothing is left.
    """
    i_n, sel_idx, p2 = _selection(state)
    kernel_i = state.pk.components[i_n]
    if p2 <= BREAKDOWN_RTOL * kernel_i.value_at_zero():
        raise PowerBreakdown(
            f"best squared power value {p2:.3e} of component {i_n} is at or "
            f"below the numerical-rank tolerance"
        )
    x = state.candidates.factors[i_n].points[sel_idx]
    p = math.sqrt(p2)
    row = state.cand_values[i_n][sel_idx].copy()

    # residuals on the new slab X^1 x ... x {x} x ... x X^M
    slab_factors = [
        ComponentPointSet(b.kernel.dim, b.centers if l != i_n else x[None, :])
        for l, b in enumerate(state.bases)
    ]
    slab_points = enumerate_grid(GridPointSet(tuple(slab_factors)))
    f_vals = np.asarray(f_oracle(slab_points), dtype=np.float64).reshape(-1)
    if len(f_vals) != len(slab_points):
        raise ValueError("target oracle returned the wrong number of values")
    reduced = np.tensordot(state.coeffs, row, axes=([i_n], [0]))
    others = [b.vandermonde for l, b in enumerate(state.bases) if l != i_n]
    s_vals = _mode_multiply(others, reduced).reshape(-1)
    residual = f_vals - s_vals

    # new coefficients: (kron of other factors) c = residual / power
    slab = linalg.kron_solve_lower(others, residual / p)
    slab = np.expand_dims(slab.reshape(tuple(reduced.shape)), axis=i_n)
    coeffs = np.concatenate([state.coeffs, slab], axis=i_n)

    # extend basis i_n and refresh its candidate caches
    bases = list(state.bases)
    bases[i_n] = _extend_with_row(bases[i_n], x, row, p)
    col = (kernel_i.gram(state.candidates.factors[i_n].points, x[None, :])[:, 0]
           - state.cand_values[i_n] @ row) / p
    cand_values = list(state.cand_values)
    cand_values[i_n] = np.hstack([state.cand_values[i_n], col[:, None]])
    cand_power2 = list(state.cand_power2)
    cand_power2[i_n] = np.maximum(state.cand_power2[i_n] - col**2, 0.0)

    selected = list(state.selected)
    selected[i_n] = selected[i_n] + (sel_idx,)
    entry = TraceEntry(state.step_count, i_n, tuple(float(v) for v in x), p)
    return GreedyState(state.pk, state.candidates, tuple(bases), tuple(cand_values),
                       tuple(cand_power2), tuple(selected), coeffs,
                       state.step_count + 1, state.trace + (entry,))


def state_interpolant(state: GreedyState) -> Interpolant:
    """Interpolant of the current grid in the standard kernel expansion."""
    if any(len(b) == 0 for b in state.bases):
        return Interpolant(state.pk, np.zeros((0, state.pk.total_dim)), np.zeros(0))
    Ls = [b.vandermonde for b in state.bases]
    coeffs = linalg.kron_solve_upper(Ls, state.coeffs.reshape(-1))
    return Interpolant(state.pk, enumerate_grid(state.grid()), coeffs)


def run_pgreedy(pk: ProductKernel, candidates: CandidateGrid, f_oracle, *,
                max_points: int, power_tol: float = 0.0):
    """Run componentwise P-greedy until the grid reaches ``max_points`` points,
    the largest candidate power value drops to ``power_tol``, or the
    candidates are exhausted (including numerical breakdown).

    Returns ``(interpolant, trace)``; the trace records one
    :class:`TraceEntry` per step.
    """
    if max_points < 0:
        raise ValueError("max_points must be nonnegative")
    state = initial_state(pk, candidates)
    while state.grid_size < max_points:
        try:
            if max_sup_power(state) <= power_tol:
                break
            state = greedy_step(state, f_oracle)
        except (CandidatesExhaustedError, PowerBreakdown):
            break
    return state_interpolant(state), list(state.trace)


def trace_to_csv(trace, path):
    """Write a greedy trace as CSV with columns step,component,point_coords,sup_power.

    ``point_coords`` joins the coordinates of the selected point with ';'.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "component", "point_coords", "sup_power"])
        for e in trace:
            writer.writerow([e.step, e.component,
                             ";".join(repr(c) for c in e.point), repr(e.sup_power)])
