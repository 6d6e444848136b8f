import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdginv import realmat
from hdginv.errors import IndexNotOne, NotSquare, ZeroMatrix
from hdginv.realmat import Tolerance

from _generators import index_one, orthogonal, well_conditioned

RANK_2 = np.array([[2.0, 1.0, 3.0], [0.0, 0.0, 0.0], [1.0, 1.0, 2.0]])


def group_defects(a, x):
    return (np.linalg.norm(a @ x @ a - a), np.linalg.norm(x @ a @ x - x),
            np.linalg.norm(a @ x - x @ a))


def penrose_defects(a, x):
    return (np.linalg.norm(a @ x @ a - a), np.linalg.norm(x @ a @ x - x),
            np.linalg.norm((a @ x).T - a @ x), np.linalg.norm((x @ a).T - x @ a))


class TestTolerance:
    def test_default(self):
        assert Tolerance().rel == 1e-10

    @pytest.mark.parametrize("bad", [0.0, -1e-3, 1.0, 2.0])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            Tolerance(bad)

    def test_is_zero_scales(self):
        tol = Tolerance(1e-6)
        assert tol.is_zero(1.5e-6, 1.0)
        assert not tol.is_zero(2.5e-6, 1.0)


@pytest.mark.parametrize("a, expected", [
    (np.eye(3), 3),
    ([[1, 0], [0, 0]], 1),
    ([[1, 2], [2, 4]], 1),
    (np.zeros((2, 3)), 0),
    (RANK_2, 2),
])
def test_rank(a, expected):
    assert realmat.rank(a) == expected


class TestPinv:
    @pytest.mark.parametrize("a, expected", [
        (np.eye(2), np.eye(2)),
        ([[1, 0], [0, 0]], [[1, 0], [0, 0]]),
        ([[1, 2], [2, 4]], np.array([[1, 2], [2, 4]]) / 25),
    ])
    def test_examples(self, a, expected):
        x = realmat.pinv(a)
        np.testing.assert_allclose(x, expected, atol=1e-12)
        assert max(penrose_defects(np.asarray(a, float), x)) < 1e-12

    def test_zero(self):
        np.testing.assert_array_equal(realmat.pinv(np.zeros((2, 3))), np.zeros((3, 2)))

    def test_matches_numpy(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 4))
        np.testing.assert_allclose(realmat.pinv(a), np.linalg.pinv(a), atol=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 6), n=st.integers(1, 6))
    def test_involution_and_transpose(self, seed, m, n):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((m, n))
        x = realmat.pinv(a)
        np.testing.assert_allclose(realmat.pinv(x), a, atol=1e-8 * (1 + np.abs(a).max()))
        np.testing.assert_allclose(realmat.pinv(a.T), x.T, atol=1e-10 * (1 + np.abs(x).max()))


class TestFullRankFactorization:
    @pytest.mark.parametrize("a", [[[1, 0], [0, 0]], np.eye(2), RANK_2])
    def test_reconstructs(self, a):
        a = np.asarray(a, float)
        f, g = realmat.full_rank_factorization(a)
        r = realmat.rank(a)
        assert f.shape == (a.shape[0], r) and g.shape == (r, a.shape[1])
        assert realmat.rank(f) == r and realmat.rank(g) == r
        np.testing.assert_allclose(f @ g, a, atol=1e-12)

    def test_zero_raises(self):
        with pytest.raises(ZeroMatrix):
            realmat.full_rank_factorization(np.zeros((3, 3)))


class TestIndex:
    @pytest.mark.parametrize("a, expected", [
        ([[0, 1], [0, 0]], False),
        ([[1, 0], [0, 0]], True),
        (np.eye(4), True),
        (np.zeros((3, 3)), True),
    ])
    def test_examples(self, a, expected):
        assert realmat.index_is_one(a) is expected

    def test_not_square(self):
        with pytest.raises(NotSquare):
            realmat.index_is_one(np.ones((2, 3)))


class TestGroupInverse:
    def test_idempotent(self):
        e = np.array([[1.0, 0.0], [0.0, 0.0]])
        np.testing.assert_array_equal(realmat.group_inverse(e), e)

    def test_identity(self):
        np.testing.assert_allclose(realmat.group_inverse(np.eye(2)), np.eye(2))

    def test_nilpotent_raises(self):
        with pytest.raises(IndexNotOne):
            realmat.group_inverse([[0, 1], [0, 0]])

    def test_zero_convention(self):
        np.testing.assert_array_equal(realmat.group_inverse(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_not_square(self):
        with pytest.raises(NotSquare):
            realmat.group_inverse(np.ones((2, 3)))

    def test_invertible_is_inverse(self):
        a = well_conditioned(np.random.default_rng(0), 4)
        np.testing.assert_allclose(realmat.group_inverse(a), np.linalg.inv(a), atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8), data=st.data())
    def test_random_index_one(self, seed, n, data):
        r = data.draw(st.integers(0, n))
        rng = np.random.default_rng(seed)
        if r == 0:
            a, expected = np.zeros((n, n)), np.zeros((n, n))
        else:
            a, expected = index_one(rng, n, r)
        assert realmat.index_is_one(a)
        x = realmat.group_inverse(a)
        scale = 1 + np.linalg.norm(a)
        d1, d2, d3 = group_defects(a, x)
        assert d1 <= 1e-8 * scale and d2 <= 1e-8 * scale
        assert d3 <= 1e-8 * (1 + np.linalg.norm(a) * np.linalg.norm(x))
        np.testing.assert_allclose(x, expected, atol=1e-8 * (1 + np.abs(expected).max()))


class TestCoreDecomposition:
    @pytest.mark.parametrize("a", [[[1, 0], [0, 0]], RANK_2])
    def test_reconstruction(self, a):
        a = np.asarray(a, float)
        core = realmat.core_decomposition(a)
        assert core.rank == realmat.rank(a)
        np.testing.assert_allclose(core.p @ core.p_inv, np.eye(a.shape[0]), atol=1e-12)
        np.testing.assert_allclose(core.reconstruct(), a, atol=1e-8 * (1 + np.linalg.norm(a)))
        assert realmat.rank(core.c) == core.rank

    def test_invertible_full_core(self):
        a = well_conditioned(np.random.default_rng(1), 3)
        core = realmat.core_decomposition(a)
        assert core.rank == 3
        # C is similar to A.
        np.testing.assert_allclose(np.sort(np.linalg.eigvals(core.c)),
                                   np.sort(np.linalg.eigvals(a)), atol=1e-10)

    def test_errors(self):
        with pytest.raises(ZeroMatrix):
            realmat.core_decomposition(np.zeros((2, 2)))
        with pytest.raises(IndexNotOne):
            realmat.core_decomposition([[0, 1], [0, 0]])

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 8))
    def test_random(self, seed, n):
        rng = np.random.default_rng(seed)
        a, _ = index_one(rng, n, int(rng.integers(1, n + 1)))
        core = realmat.core_decomposition(a)
        assert np.linalg.norm(core.reconstruct() - a) <= 1e-8 * (1 + np.linalg.norm(a))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 7), data=st.data())
def test_rank_invariances(seed, n, data):
    rng = np.random.default_rng(seed)
    r = data.draw(st.integers(0, n))
    a = orthogonal(rng, n)[:, :r] @ np.diag(rng.uniform(1, 2, r)) @ orthogonal(rng, n)[:r]
    left, right = well_conditioned(rng, n), well_conditioned(rng, n)
    assert realmat.rank(a) == r
    assert realmat.rank(a.T) == r
    assert realmat.rank(left @ a @ right) == r
