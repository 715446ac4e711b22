import math
from fractions import Fraction

import numpy as np
import pytest

from prodkernel import (
    ComponentKernel,
    Family,
    KernelSpecError,
    ProductKernel,
    eval_askey,
    eval_wendland_1_3,
    eval_wendland_3_3,
    kernel_eval,
    parse_kernel_spec,
    product_eval,
)

ALL_KERNELS = [
    ComponentKernel(Family.ASKEY, (2.0,)),
    ComponentKernel(Family.ASKEY, (8.0,)),
    ComponentKernel(Family.WENDLAND13),
    ComponentKernel(Family.WENDLAND33),
    ComponentKernel(Family.GAUSSIAN, (1.0,)),
    ComponentKernel(Family.ASKEY, (3.0,), shape=0.5, dim=2),
    ComponentKernel(Family.WENDLAND13, shape=2.0),
    ComponentKernel(Family.GAUSSIAN, (2.5,), dim=3),
]


class TestFamilies:
    def test_askey_direct_values(self):
        assert eval_askey(2.0, 0.5) == 0.25
        assert eval_askey(8.0, 1.0) == 0.0
        assert eval_askey(8.0, 0.0) == 1.0

    def test_askey_rejects_small_beta(self):
        with pytest.raises(ValueError):
            eval_askey(1.5, 0.3)

    def test_wendland13_boundary(self):
        assert eval_wendland_1_3(0.0) == 15.0
        assert eval_wendland_1_3(1.0) == 0.0

    def test_wendland13_half(self):
        # oracle: exact rational arithmetic on the polynomial form
        r = Fraction(1, 2)
        expected = (1 - r) ** 7 * (315 * r**3 + 285 * r**2 + 105 * r + 15)
        assert expected == Fraction(1425, 1024)
        assert eval_wendland_1_3(0.5) == pytest.approx(1.3916015625, rel=1e-15)

    def test_wendland33_boundary(self):
        assert eval_wendland_3_3(0.0) == 1.0
        assert eval_wendland_3_3(1.0) == 0.0

    def test_wendland33_quarter(self):
        r = Fraction(1, 4)
        expected = (1 - r) ** 8 * (32 * r**3 + 25 * r**2 + 8 * r + 1)
        assert expected == Fraction(531441, 1048576)
        assert eval_wendland_3_3(0.25) == pytest.approx(0.5068216323852539, rel=1e-15)

    def test_beyond_support_is_exact_zero(self):
        for r in [1.0, 1.25, 7.0]:
            assert eval_askey(2.0, r) == 0.0
            assert eval_wendland_1_3(r) == 0.0
            assert eval_wendland_3_3(r) == 0.0


class TestComponentKernel:
    def test_eval_at_coincident_points(self):
        k = ComponentKernel(Family.ASKEY, (8.0,))
        assert kernel_eval(k, [0.0], [0.0]) == 1.0

    def test_compact_support(self):
        k = ComponentKernel(Family.WENDLAND13)
        assert kernel_eval(k, [0.0], [2.0]) == 0.0

    def test_gaussian_value(self):
        k = ComponentKernel(Family.GAUSSIAN, (1.0,))
        assert kernel_eval(k, [0.0], [1.0]) == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_shape_scales_radius(self):
        k = ComponentKernel(Family.ASKEY, (2.0,), shape=2.0)
        # radius argument becomes 2 * 0.25 = 0.5
        assert kernel_eval(k, [0.0], [0.25]) == pytest.approx(0.25, rel=1e-15)
        assert kernel_eval(k, [0.0], [0.5]) == 0.0

    def test_dimension_mismatch(self):
        k = ComponentKernel(Family.ASKEY, (2.0,), dim=2)
        with pytest.raises(ValueError):
            kernel_eval(k, [0.0], [0.0])

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            ComponentKernel(Family.ASKEY, (1.0,))
        with pytest.raises(ValueError):
            ComponentKernel(Family.GAUSSIAN, (0.0,))
        with pytest.raises(ValueError):
            ComponentKernel(Family.WENDLAND13, shape=0.0)
        with pytest.raises(ValueError):
            ComponentKernel(Family.WENDLAND13, dim=0)
        with pytest.raises(ValueError):
            ComponentKernel(Family.WENDLAND33, (3.0,))

    @pytest.mark.parametrize("kernel", ALL_KERNELS, ids=lambda k: k.family.value)
    def test_symmetry_exact(self, kernel):
        rng = np.random.default_rng(11)
        X = rng.uniform(-1.0, 2.0, size=(1000, kernel.dim))
        Y = rng.uniform(-1.0, 2.0, size=(1000, kernel.dim))
        for x, y in zip(X, Y):
            assert kernel_eval(kernel, x, y) == kernel_eval(kernel, y, x)

    @pytest.mark.parametrize("kernel", ALL_KERNELS, ids=lambda k: k.family.value)
    def test_radius_sweep_bounded_with_max_at_zero(self, kernel):
        radii = np.linspace(0.0, 3.0, 400)
        zero = np.zeros(kernel.dim)
        # axis-aligned so the distance equals the radius exactly
        direction = np.zeros(kernel.dim)
        direction[0] = 1.0
        values = np.array([kernel_eval(kernel, zero, r * direction) for r in radii])
        assert values[0] == kernel.value_at_zero()
        assert np.all(values >= 0.0)
        assert np.all(values <= kernel.value_at_zero())
        if kernel.family is not Family.GAUSSIAN:
            beyond = radii * kernel.shape >= 1.0
            assert np.all(values[beyond] == 0.0)


class TestProductKernel:
    def test_factorwise_value(self):
        pk = ProductKernel((
            ComponentKernel(Family.ASKEY, (2.0,)),
            ComponentKernel(Family.ASKEY, (2.0,)),
        ))
        assert product_eval(pk, [0.0, 0.0], [0.5, 0.0]) == pytest.approx(0.25, rel=1e-15)

    def test_diagonal_is_product_of_component_diagonals(self):
        pk = ProductKernel((
            ComponentKernel(Family.WENDLAND13),
            ComponentKernel(Family.GAUSSIAN, (2.0,), dim=2),
        ))
        rng = np.random.default_rng(5)
        for x in rng.uniform(0.0, 1.0, size=(20, 3)):
            assert product_eval(pk, x, x) == pytest.approx(15.0, rel=1e-15)

    def test_single_factor_equals_component(self):
        k = ComponentKernel(Family.WENDLAND33, dim=2)
        pk = ProductKernel((k,))
        rng = np.random.default_rng(7)
        for _ in range(50):
            x, y = rng.uniform(0.0, 1.0, size=(2, 2))
            assert product_eval(pk, x, y) == kernel_eval(k, x, y)

    def test_factorization_property(self):
        pk = ProductKernel((
            ComponentKernel(Family.ASKEY, (8.0,)),
            ComponentKernel(Family.WENDLAND13, dim=2),
            ComponentKernel(Family.GAUSSIAN, (1.5,)),
        ))
        assert pk.total_dim == 4
        assert pk.offsets == (0, 1, 3)
        rng = np.random.default_rng(13)
        for _ in range(200):
            x, y = rng.uniform(0.0, 1.0, size=(2, 4))
            explicit = (
                kernel_eval(pk.components[0], x[:1], y[:1])
                * kernel_eval(pk.components[1], x[1:3], y[1:3])
                * kernel_eval(pk.components[2], x[3:], y[3:])
            )
            assert product_eval(pk, x, y) == pytest.approx(explicit, rel=1e-15, abs=0.0)

    def test_dimension_mismatch(self):
        pk = ProductKernel((ComponentKernel(Family.ASKEY, (2.0,)),))
        with pytest.raises(ValueError):
            product_eval(pk, [0.0, 1.0], [0.0, 1.0])


class TestParseKernelSpec:
    def test_askey_with_beta(self):
        k = parse_kernel_spec("askey:beta=8")
        assert k.family is Family.ASKEY
        assert k.params == (8.0,)
        assert k.shape == 1.0
        assert k.dim == 1

    def test_bare_wendland_defaults(self):
        k = parse_kernel_spec("wendland13")
        assert k.family is Family.WENDLAND13
        assert k.params == ()
        assert (k.shape, k.dim) == (1.0, 1)

    def test_constraint_violation(self):
        with pytest.raises(KernelSpecError):
            parse_kernel_spec("askey:beta=1")

    def test_full_spec(self):
        k = parse_kernel_spec("gaussian:eps=2.5,shape=0.5,dim=3")
        assert k.family is Family.GAUSSIAN
        assert k.params == (2.5,)
        assert k.shape == 0.5
        assert k.dim == 3

    @pytest.mark.parametrize("bad", [
        "", "nosuchfamily", "askey", "gaussian", "askey:beta", "askey:beta=x",
        "wendland13:beta=3", "askey:beta=8,bogus=1", "askey:beta=8,dim=1.5",
    ])
    def test_parse_errors(self, bad):
        with pytest.raises(KernelSpecError):
            parse_kernel_spec(bad)
