import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdginv import norder
from hdginv.dualmat import DualMatrix, dggi
from hdginv.errors import (NotGroupInvertible, NotSquare, OrderMismatch, OrderZero,
                           ShapeMismatch)
from hdginv.hyperdual import HyperDualMatrix, hdggi
from hdginv.norder import NOrderMatrix

from _generators import (dual_admissible, hd_condition_ii, index_one, similar_to_core)

seeds = st.integers(0, 2**32 - 1)


class TestConstruction:
    def test_from_dict(self):
        x = NOrderMatrix({0: np.eye(2), 1: [[0, 1], [0, 0]]})
        assert x.order == 1
        np.testing.assert_array_equal(x.component(1), [[0, 1], [0, 0]])
        assert set(x.as_dict()) == {0, 1}

    @pytest.mark.parametrize("masks", [[0, 2], [1, 2], [0, 1, 2]])
    def test_bad_masks(self, masks):
        with pytest.raises(OrderMismatch):
            NOrderMatrix({s: np.eye(2) for s in masks})

    def test_mixed_shapes(self):
        with pytest.raises(ShapeMismatch):
            NOrderMatrix({0: np.eye(2), 1: np.eye(3)})

    def test_order_cap(self):
        NOrderMatrix.zeros(norder.MAX_ORDER, 1, 1)
        with pytest.raises(OrderMismatch):
            NOrderMatrix(np.zeros((1 << (norder.MAX_ORDER + 1), 1, 1)))

    def test_conversions_round_trip(self):
        rng = np.random.default_rng(0)
        d = DualMatrix(*rng.standard_normal((2, 3, 3)))
        h = HyperDualMatrix(*rng.standard_normal((4, 3, 3)))
        assert NOrderMatrix.from_algebra(d).to_dual() == d
        assert NOrderMatrix.from_algebra(h).to_hyperdual() == h
        a = rng.standard_normal((2, 3))
        np.testing.assert_array_equal(NOrderMatrix.from_real(a).to_real(), a)

    @pytest.mark.parametrize("order, method", [(1, "to_real"), (2, "to_dual"),
                                               (1, "to_hyperdual")])
    def test_wrong_conversion(self, order, method):
        with pytest.raises(OrderMismatch):
            getattr(NOrderMatrix.zeros(order, 2, 2), method)()


class TestSplitJoin:
    @settings(max_examples=20, deadline=None)
    @given(seed=seeds, order=st.integers(1, 5))
    def test_round_trip(self, seed, order):
        x = NOrderMatrix(np.random.default_rng(seed).standard_normal((1 << order, 2, 3)))
        b, c = norder.split(x)
        assert b.order == c.order == order - 1
        assert norder.join(b, c) == x

    def test_split_hyperdual_matches_dual_views(self):
        h = HyperDualMatrix(*np.random.default_rng(1).standard_normal((4, 2, 2)))
        b, c = norder.split(NOrderMatrix.from_algebra(h))
        assert b.to_dual() == h.primal and c.to_dual() == h.hyper

    def test_errors(self):
        with pytest.raises(OrderZero):
            norder.split(NOrderMatrix.from_real(np.eye(2)))
        with pytest.raises(OrderMismatch):
            norder.join(NOrderMatrix.zeros(1, 2, 2), NOrderMatrix.zeros(2, 2, 2))
        with pytest.raises(ShapeMismatch):
            norder.join(NOrderMatrix.zeros(1, 2, 2), NOrderMatrix.zeros(1, 3, 3))


class TestProduct:
    def test_matches_hyperdual(self):
        rng = np.random.default_rng(2)
        x = HyperDualMatrix(*rng.standard_normal((4, 3, 3)))
        y = HyperDualMatrix(*rng.standard_normal((4, 3, 3)))
        got = norder.n_mul(NOrderMatrix.from_algebra(x), NOrderMatrix.from_algebra(y))
        np.testing.assert_allclose(got.components, (x @ y).components, atol=1e-13)

    @pytest.mark.parametrize("order", [1, 3, 5])
    def test_units_nilpotent(self, order):
        for bit in range(order):
            comps = np.zeros((1 << order, 1, 1))
            comps[1 << bit] = 1.0
            e = NOrderMatrix(comps)
            assert e @ e == NOrderMatrix.zeros(order, 1, 1)

    def test_product_of_all_units(self):
        order = 4
        total = NOrderMatrix.identity(order, 1)
        for bit in range(order):
            comps = np.zeros((1 << order, 1, 1))
            comps[1 << bit] = 1.0
            total = total @ NOrderMatrix(comps)
        expected = np.zeros((1 << order, 1, 1))
        expected[-1] = 1.0
        np.testing.assert_array_equal(total.components, expected)

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds, order=st.integers(0, 4), n=st.integers(1, 4))
    def test_ring_laws(self, seed, order, n):
        rng = np.random.default_rng(seed)
        x, y, z = (NOrderMatrix(rng.standard_normal((1 << order, n, n))) for _ in range(3))
        scale = 1 + x.norm() * y.norm() * z.norm()
        assert ((x @ y) @ z - x @ (y @ z)).norm() <= 1e-12 * scale
        assert (x @ (y + z) - norder.n_add(x @ y, x @ z)).norm() <= 1e-12 * scale

    def test_identity(self):
        x = NOrderMatrix(np.random.default_rng(3).standard_normal((8, 3, 3)))
        i = NOrderMatrix.identity(3, 3)
        assert i @ x == x and x @ i == x


class TestGroupInverse:
    @settings(max_examples=20, deadline=None)
    @given(seed=seeds, n=st.integers(1, 7), data=st.data())
    def test_order1_tower(self, seed, n, data):
        x = dual_admissible(np.random.default_rng(seed), n, data.draw(st.integers(1, n)))
        got = norder.n_group_inverse(NOrderMatrix.from_algebra(x)).to_dual()
        expected = dggi(x)
        assert got.max_abs_diff(expected) <= 1e-10 * (1 + expected.norm())

    @settings(max_examples=20, deadline=None)
    @given(seed=seeds, n=st.integers(2, 7), data=st.data())
    def test_order2_tower(self, seed, n, data):
        x = hd_condition_ii(np.random.default_rng(seed), n, data.draw(st.integers(1, n - 1)))
        got = norder.n_group_inverse(x).to_hyperdual()
        expected = hdggi(x)
        assert got.max_abs_diff(expected) <= 1e-10 * (1 + expected.norm())

    def test_order0(self):
        a, g = index_one(np.random.default_rng(4), 4, 2)
        got = norder.n_group_inverse(NOrderMatrix.from_real(a)).to_real()
        np.testing.assert_allclose(got, g, atol=1e-10)

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds, order=st.integers(0, 4), n=st.integers(1, 6), data=st.data())
    def test_exact_family(self, seed, order, n, data):
        x, expected = similar_to_core(np.random.default_rng(seed), order, n,
                                      data.draw(st.integers(1, n)))
        got = norder.n_group_inverse(x)
        assert got.max_abs_diff(expected) <= 1e-7 * (1 + expected.norm())
        report = norder.verify_group_axioms(x, got)
        assert report.passes(1e-7 * (1 + x.norm()) * (1 + got.norm()))

    def test_failure_depth(self):
        # Real part fine, eps_1 part fine, eps_2 part outside the core.
        comps = np.zeros((4, 2, 2))
        comps[0] = np.diag([1.0, 0.0])
        comps[2] = np.diag([0.0, 1.0])
        with pytest.raises(NotGroupInvertible) as info:
            norder.n_group_inverse(NOrderMatrix(comps))
        assert info.value.depth == 2

    def test_failure_depth_zero(self):
        comps = np.zeros((2, 2, 2))
        comps[0] = [[0.0, 1.0], [0.0, 0.0]]
        with pytest.raises(NotGroupInvertible) as info:
            norder.n_group_inverse(NOrderMatrix(comps))
        assert info.value.depth == 0

    def test_not_square(self):
        with pytest.raises(NotSquare):
            norder.n_group_inverse(NOrderMatrix.zeros(2, 2, 3))

    def test_accepts_hyperdual(self):
        x = hd_condition_ii(np.random.default_rng(5), 4, 2)
        assert isinstance(norder.n_group_inverse(x), NOrderMatrix)

    @settings(max_examples=15, deadline=None)
    @given(seed=seeds, order=st.integers(1, 3), n=st.integers(1, 4), data=st.data())
    def test_via_axioms(self, seed, order, n, data):
        x, expected = similar_to_core(np.random.default_rng(seed), order, n,
                                      data.draw(st.integers(1, n)))
        got = norder.n_group_inverse_via_axioms(x)
        assert got.max_abs_diff(expected) <= 1e-7 * (1 + expected.norm())


class TestVerify:
    def test_real_arrays(self):
        a, g = index_one(np.random.default_rng(6), 3, 2)
        report = norder.verify_group_axioms(a, g)
        assert report.kind == "group" and report.max < 1e-10
        assert set(report.as_dict()) == {"axa", "xax", "commute"}

    def test_wrong_inverse(self):
        report = norder.verify_group_axioms(np.eye(2), 2 * np.eye(2))
        assert report.as_dict()["axa"] == pytest.approx(np.sqrt(2))
        assert not report.passes(1e-3)

    def test_penrose_rectangular(self):
        a = np.random.default_rng(7).standard_normal((3, 2))
        report = norder.verify_penrose_axioms(a, np.linalg.pinv(a))
        assert len(report.residuals) == 4 and report.max < 1e-12

    def test_errors(self):
        with pytest.raises(OrderMismatch):
            norder.verify_group_axioms(NOrderMatrix.zeros(1, 2, 2), NOrderMatrix.zeros(2, 2, 2))
        with pytest.raises(ShapeMismatch):
            norder.verify_penrose_axioms(np.ones((2, 3)), np.ones((2, 3)))
        with pytest.raises(NotSquare):
            norder.verify_group_axioms(np.ones((2, 3)), np.ones((3, 2)))
