import itertools

import numpy as np
import pytest

from prodkernel import (
    ComponentKernel,
    ComponentPointSet,
    Family,
    GridPointSet,
    ProductKernel,
    SizeLimitError,
    embed_scattered,
    enumerate_grid,
    index_decompose,
    project,
    read_points_csv,
    write_points_csv,
)
from prodkernel.gridpoints import canonical_key


def product_kernel_1d_1d():
    return ProductKernel((
        ComponentKernel(Family.ASKEY, (2.0,)),
        ComponentKernel(Family.ASKEY, (2.0,)),
    ))


class TestComponentPointSet:
    def test_univariate_coercion(self):
        f = ComponentPointSet(1, [0.0, 0.5, 1.0])
        assert f.points.shape == (3, 1)

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            ComponentPointSet(1, [0.0, 0.5, 0.5])

    def test_rounded_duplicates_detected(self):
        # differ only in the 15th significant digit: same canonical key
        with pytest.raises(ValueError):
            ComponentPointSet(1, [1.0, 1.0 + 1e-15])

    def test_canonical_key_is_12_significant_digits(self):
        assert canonical_key([0.1 + 0.2]) == canonical_key([0.3])
        assert canonical_key([1.0]) != canonical_key([1.0 + 1e-9])


class TestIndexDecompose:
    def test_first_index(self):
        assert index_decompose(1, (4, 3, 2)) == (1, 1, 1)

    def test_two_factor_values(self):
        # last factor fastest: ceil(k/N2) and (k-1) mod N2 + 1
        assert index_decompose(4, (2, 3)) == (2, 1)
        assert index_decompose(3, (2, 3)) == (1, 3)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            index_decompose(0, (2, 3))
        with pytest.raises(ValueError):
            index_decompose(7, (2, 3))

    def test_full_enumeration_matches_nested_loops(self):
        sizes = (2, 3, 2)
        expected = list(itertools.product(range(1, 3), range(1, 4), range(1, 3)))
        got = [index_decompose(k, sizes) for k in range(1, 13)]
        assert got == expected


class TestEnumerateGrid:
    def test_two_factor_order(self):
        g = GridPointSet((
            ComponentPointSet(1, [10.0, 20.0]),
            ComponentPointSet(1, [1.0, 2.0, 3.0]),
        ))
        expected = [
            [10.0, 1.0], [10.0, 2.0], [10.0, 3.0],
            [20.0, 1.0], [20.0, 2.0], [20.0, 3.0],
        ]
        np.testing.assert_array_equal(enumerate_grid(g), expected)

    def test_single_factor_keeps_order(self):
        f = ComponentPointSet(2, [[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]])
        g = GridPointSet((f,))
        np.testing.assert_array_equal(enumerate_grid(g), f.points)

    def test_three_factors_match_nested_loops(self):
        factors = [
            ComponentPointSet(1, [0.0, 1.0]),
            ComponentPointSet(1, [2.0, 3.0]),
            ComponentPointSet(1, [4.0, 5.0]),
        ]
        g = GridPointSet(tuple(factors))
        expected = np.array([
            [a, b, c]
            for a in [0.0, 1.0] for b in [2.0, 3.0] for c in [4.0, 5.0]
        ])
        np.testing.assert_array_equal(enumerate_grid(g), expected)

    def test_roundtrip_with_index_decompose(self):
        rng = np.random.default_rng(0)
        factors = (
            ComponentPointSet(1, rng.uniform(size=4)),
            ComponentPointSet(2, rng.uniform(size=(3, 2))),
            ComponentPointSet(1, rng.uniform(size=5)),
        )
        g = GridPointSet(factors)
        pts = enumerate_grid(g)
        assert len(pts) == 60 and g.total_dim == 4
        for k in range(1, len(pts) + 1):
            multi = index_decompose(k, g.sizes)
            slices = [factors[i].points[multi[i] - 1] for i in range(3)]
            np.testing.assert_array_equal(pts[k - 1], np.concatenate(slices))

    def test_enumerated_points_distinct(self):
        g = GridPointSet((
            ComponentPointSet(1, [0.0, 0.5, 1.0]),
            ComponentPointSet(1, [0.0, 0.5]),
        ))
        pts = enumerate_grid(g)
        assert len({canonical_key(p) for p in pts}) == len(g) == 6

    def test_size_guard(self):
        big = ComponentPointSet(1, np.arange(9000.0))
        with pytest.raises(SizeLimitError):
            enumerate_grid(GridPointSet((big, big)))


class TestProject:
    def test_reads_off_coordinates(self):
        pk = product_kernel_1d_1d()
        factors = project(np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]), pk)
        np.testing.assert_array_equal(factors[0].points, [[0.0], [1.0]])
        np.testing.assert_array_equal(factors[1].points, [[0.0], [1.0]])

    def test_grid_input_recovers_factors(self):
        pk = product_kernel_1d_1d()
        g = GridPointSet((
            ComponentPointSet(1, [0.0, 0.25, 0.5]),
            ComponentPointSet(1, [0.0, 1.0]),
        ))
        factors = project(enumerate_grid(g), pk)
        np.testing.assert_array_equal(np.sort(factors[0].points, axis=0),
                                      g.factors[0].points)
        np.testing.assert_array_equal(np.sort(factors[1].points, axis=0),
                                      g.factors[1].points)

    def test_single_point(self):
        pk = product_kernel_1d_1d()
        factors = project(np.array([[0.3, 0.7]]), pk)
        assert [len(f) for f in factors] == [1, 1]


class TestEmbedScattered:
    def test_three_points_make_2x2_grid(self):
        pk = product_kernel_1d_1d()
        X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        g = embed_scattered(X, pk)
        assert g.sizes == (2, 2)
        grid_keys = {canonical_key(p) for p in enumerate_grid(g)}
        for x in X:
            assert canonical_key(x) in grid_keys

    def test_grid_input_is_fixed_point(self):
        pk = product_kernel_1d_1d()
        g = GridPointSet((
            ComponentPointSet(1, [0.0, 0.5]),
            ComponentPointSet(1, [0.25, 0.75, 1.0]),
        ))
        pts = enumerate_grid(g)
        g2 = embed_scattered(pts, pk)
        assert {canonical_key(p) for p in enumerate_grid(g2)} == {
            canonical_key(p) for p in pts
        }

    def test_distinct_coordinates_make_nxn_grid(self):
        pk = product_kernel_1d_1d()
        rng = np.random.default_rng(1)
        X = rng.uniform(size=(12, 2))
        g = embed_scattered(X, pk)
        assert g.sizes == (12, 12)
        grid_keys = {canonical_key(p) for p in enumerate_grid(g)}
        assert all(canonical_key(x) in grid_keys for x in X)

    def test_rejects_duplicate_inputs(self):
        pk = product_kernel_1d_1d()
        with pytest.raises(ValueError):
            embed_scattered(np.array([[0.0, 0.0], [0.0, 0.0]]), pk)


class TestPointsCsv:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(2)
        pts = rng.uniform(size=(7, 3))
        path = tmp_path / "pts.csv"
        write_points_csv(path, pts)
        got = read_points_csv(path)
        np.testing.assert_array_equal(got, pts)
        header = path.read_text().splitlines()[0]
        assert header == "x1,x2,x3"

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            read_points_csv(path)
