"""Component kernel families and product kernels.

A :class:`ComponentKernel` is a positive definite radial kernel on a low
dimensional factor space; a :class:`ProductKernel` multiplies component
kernels acting on contiguous coordinate slices,

    K(x, y) = prod_i K_i(x^i, y^i).

Supported families (``r`` is the scaled radius ``shape * ||x - y||``):

====================  =====================================================
askey                 (1 - r)_+^beta, beta >= 2
wendland13            (1 - r)_+^7 (315 r^3 + 285 r^2 + 105 r + 15), C^6 on R
wendland33            (1 - r)_+^8 (32 r^3 + 25 r^2 + 8 r + 1), C^6 on R^3
gaussian              exp(-eps * ||x - y||^2) for shape = 1
====================  =====================================================

The compactly supported families are exactly zero for ``r >= 1``; the
truncation is applied before exponentiation so no sign errors occur beyond
the support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from prodkernel import backend
from prodkernel.exceptions import KernelSpecError


class Family(Enum):
    ASKEY = "askey"
    WENDLAND13 = "wendland13"
    WENDLAND33 = "wendland33"
    GAUSSIAN = "gaussian"


_FAMILY_CODES = {
    Family.ASKEY: 0,
    Family.WENDLAND13: 1,
    Family.WENDLAND33: 2,
    Family.GAUSSIAN: 3,
}

# value of the radial profile at radius 0 per family
_VALUE_AT_ZERO = {
    Family.ASKEY: 1.0,
    Family.WENDLAND13: 15.0,
    Family.WENDLAND33: 1.0,
    Family.GAUSSIAN: 1.0,
}


def eval_askey(beta: float, r: float) -> float:
    """Askey's radial characteristic function ``(1 - r)_+^beta``."""
    if beta < 2.0:
        raise ValueError(f"askey exponent must satisfy beta >= 2, got {beta}")
    if r >= 1.0:
        return 0.0
    return (1.0 - r) ** beta


def eval_wendland_1_3(r: float) -> float:
    """Wendland's C^6 kernel for d = 1: ``(1 - r)_+^7 (315 r^3 + 285 r^2 + 105 r + 15)``."""
    if r >= 1.0:
        return 0.0
    poly = ((315.0 * r + 285.0) * r + 105.0) * r + 15.0
    return (1.0 - r) ** 7 * poly


def eval_wendland_3_3(r: float) -> float:
    """Wendland's C^6 kernel for d = 3: ``(1 - r)_+^8 (32 r^3 + 25 r^2 + 8 r + 1)``."""
    if r >= 1.0:
        return 0.0
    poly = ((32.0 * r + 25.0) * r + 8.0) * r + 1.0
    return (1.0 - r) ** 8 * poly


@dataclass(frozen=True)
class ComponentKernel:
    """One factor of a product kernel.

    Parameters
    ----------
    family : Family
        Radial family.
    params : tuple of float
        ``(beta,)`` for askey, ``(eps,)`` for gaussian, empty otherwise.
    shape : float
        Radius scaling, ``k(x, y) = phi(shape * ||x - y||)``.  Must be > 0.
    dim : int
        Dimension of the factor space.
    """

    family: Family
    params: tuple = ()
    shape: float = 1.0
    dim: int = 1

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.shape <= 0.0:
            raise ValueError(f"shape must be positive, got {self.shape}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.family is Family.ASKEY:
            if len(self.params) != 1:
                raise ValueError("askey takes exactly one parameter (beta)")
            if self.params[0] < 2.0:
                raise ValueError(f"askey requires beta >= 2, got {self.params[0]}")
        elif self.family is Family.GAUSSIAN:
            if len(self.params) != 1:
                raise ValueError("gaussian takes exactly one parameter (eps)")
            if self.params[0] <= 0.0:
                raise ValueError(f"gaussian requires eps > 0, got {self.params[0]}")
        elif self.params:
            raise ValueError(f"{self.family.value} takes no parameters")

    @property
    def _p0(self) -> float:
        return self.params[0] if self.params else 0.0

    def value_at_zero(self) -> float:
        """k(x, x), the profile value at radius 0."""
        return _VALUE_AT_ZERO[self.family]

    def profile(self, r: float) -> float:
        """Radial profile at unscaled radius ``r >= 0``."""
        if self.family is Family.ASKEY:
            return eval_askey(self.params[0], r)
        if self.family is Family.WENDLAND13:
            return eval_wendland_1_3(r)
        if self.family is Family.WENDLAND33:
            return eval_wendland_3_3(r)
        return math.exp(-self.params[0] * r * r)

    def __call__(self, x, y) -> float:
        return kernel_eval(self, x, y)

    def gram(self, X, Y) -> np.ndarray:
        """Cross matrix ``(k(x_i, y_j))`` for points X (n, dim) and Y (m, dim)."""
        X = _as_points(X, self.dim)
        Y = _as_points(Y, self.dim)
        return backend.cross_gram(_FAMILY_CODES[self.family], self._p0, self.shape, X, Y)


def _as_points(X, dim):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None] if dim == 1 else X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got array of shape {X.shape}")
    return np.ascontiguousarray(X)


def _as_single_point(x, dim):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        x = x[None]
    if x.ndim != 1 or x.shape[0] != dim:
        raise ValueError(f"expected a point of dimension {dim}, got shape {x.shape}")
    return x


def kernel_eval(k: ComponentKernel, x, y) -> float:
    """Evaluate one component kernel at a pair of points."""
    x = _as_single_point(x, k.dim)
    y = _as_single_point(y, k.dim)
    if k.dim == 1:
        r = abs(x[0] - y[0])
    else:
        r = math.sqrt(float(np.sum((x - y) ** 2)))
    return k.profile(k.shape * r)


@dataclass(frozen=True)
class ProductKernel:
    """Ordered product of component kernels on contiguous coordinate slices."""

    components: tuple
    total_dim: int = field(init=False)
    offsets: tuple = field(init=False)

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a product kernel needs at least one component")
        object.__setattr__(self, "components", comps)
        offsets = []
        start = 0
        for c in comps:
            offsets.append(start)
            start += c.dim
        object.__setattr__(self, "offsets", tuple(offsets))
        object.__setattr__(self, "total_dim", start)

    def __len__(self):
        return len(self.components)

    def slices(self):
        """Coordinate slice of each component, in component order."""
        return [slice(o, o + c.dim) for o, c in zip(self.offsets, self.components)]

    def value_at_zero(self) -> float:
        out = 1.0
        for c in self.components:
            out *= c.value_at_zero()
        return out

    def __call__(self, x, y) -> float:
        return product_eval(self, x, y)

    def gram(self, X, Y) -> np.ndarray:
        """Cross matrix of the product kernel on full-dimensional points."""
        X = _as_points(X, self.total_dim)
        Y = _as_points(Y, self.total_dim)
        out = None
        for c, sl in zip(self.components, self.slices()):
            g = c.gram(X[:, sl], Y[:, sl])
            out = g if out is None else out * g
        return out


def product_eval(pk: ProductKernel, x, y) -> float:
    """Evaluate the product kernel at a pair of full-dimensional points."""
    x = _as_single_point(x, pk.total_dim)
    y = _as_single_point(y, pk.total_dim)
    out = 1.0
    for c, sl in zip(pk.components, pk.slices()):
        out *= kernel_eval(c, x[sl], y[sl])
    return out


_SPEC_KEYS = {"beta", "eps", "shape", "dim"}


def parse_kernel_spec(spec: str) -> ComponentKernel:
    """Parse a kernel spec string ``family[:key=value,...]``.

    Examples: ``"askey:beta=8"``, ``"wendland13"``, ``"gaussian:eps=2,dim=2"``,
    ``"askey:beta=4,shape=0.5"``.  Defaults: ``shape=1``, ``dim=1``.
    """
    spec = spec.strip()
    if not spec:
        raise KernelSpecError("empty kernel spec")
    name, _, rest = spec.partition(":")
    try:
        family = Family(name.strip().lower())
    except ValueError:
        known = ", ".join(f.value for f in Family)
        raise KernelSpecError(f"unknown kernel family {name!r} (known: {known})") from None
    kv = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in _SPEC_KEYS:
                raise KernelSpecError(
                    f"bad parameter {item!r} in kernel spec {spec!r} "
                    f"(expected key=value with key in {sorted(_SPEC_KEYS)})"
                )
            try:
                kv[key] = int(value) if key == "dim" else float(value)
            except ValueError:
                raise KernelSpecError(f"cannot parse value in {item!r} of spec {spec!r}") from None
    params = ()
    if family is Family.ASKEY:
        if "beta" not in kv:
            raise KernelSpecError(f"askey spec {spec!r} needs beta, e.g. 'askey:beta=8'")
        params = (kv.pop("beta"),)
    elif family is Family.GAUSSIAN:
        if "eps" not in kv:
            raise KernelSpecError(f"gaussian spec {spec!r} needs eps, e.g. 'gaussian:eps=1'")
        params = (kv.pop("eps"),)
    if "beta" in kv or "eps" in kv:
        raise KernelSpecError(f"spec {spec!r} passes a parameter its family does not take")
    try:
        return ComponentKernel(family, params, shape=kv.get("shape", 1.0), dim=kv.get("dim", 1))
    except ValueError as exc:
        raise KernelSpecError(f"invalid kernel spec {spec!r}: {exc}") from None


def parse_product_spec(specs) -> ProductKernel:
    """Build a product kernel from a list of component spec strings."""
    return ProductKernel(tuple(parse_kernel_spec(s) for s in specs))
