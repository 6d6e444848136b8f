"""Real-matrix kernels: rank, pseudoinverse, group inverse, core decomposition.

Every block appearing in the dual, hyper-dual and n-order algebras is a
dense ``float64`` numpy array; this module holds the operations on those
blocks that the higher algebras are built from.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IndexNotOne, NotSquare, ZeroMatrix

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "CoreDecomposition",
    "as_matrix",
    "frobenius",
    "rank",
    "pinv",
    "full_rank_factorization",
    "index_is_one",
    "group_inverse",
    "core_decomposition",
]


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance for rank decisions and zero tests."""

    rel: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.rel < 1.0:
            raise ValueError(f"tolerance must lie in (0, 1), got {self.rel!r}")

    def is_zero(self, residual, scale):
        """True when ``residual <= rel * (1 + scale)``."""
        return residual <= self.rel * (1.0 + scale)


DEFAULT_TOL = Tolerance()


def _tol(tol):
    if tol is None:
        return DEFAULT_TOL
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


def as_matrix(a):
    """Validate and convert ``a`` to a 2-D finite float64 array."""
    arr = np.array(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def frobenius(a):
    return float(np.linalg.norm(a)) if a.size else 0.0


def _require_square(a):
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")


def _svd_rank(s, shape, tol):
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = tol.rel * s[0] * max(shape)
    return int(np.count_nonzero(s > cutoff))


def rank(a, tol=None):
    """Numerical rank: singular values above ``rel * s_max * max(m, n)``."""
    a = np.asarray(a, dtype=np.float64)
    s = np.linalg.svd(a, compute_uv=False)
    return _svd_rank(s, a.shape, _tol(tol))


def pinv(a, tol=None):
    """Moore-Penrose pseudoinverse by truncated SVD."""
    a = np.asarray(a, dtype=np.float64)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    r = _svd_rank(s, a.shape, _tol(tol))
    if r == 0:
        return np.zeros((a.shape[1], a.shape[0]))
    return (vt[:r].T / s[:r]) @ u[:, :r].T


def full_rank_factorization(a, tol=None):
    """Return ``(f, g)`` with ``f @ g == a``, ``f`` of full column rank.

    The factors come from the truncated SVD, ``f = U_r S_r`` and
    ``g = V_r^T``; they are unique only up to an invertible ``r x r``
    regauging.
    """
    a = np.asarray(a, dtype=np.float64)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    r = _svd_rank(s, a.shape, _tol(tol))
    if r == 0:
        raise ZeroMatrix("the zero matrix has no full-rank factorization")
    return u[:, :r] * s[:r], vt[:r].copy()


def index_is_one(a, tol=None):
    """True iff ``rank(a) == rank(a @ a)``."""
    a = np.asarray(a, dtype=np.float64)
    _require_square(a)
    tol = _tol(tol)
    return rank(a, tol) == rank(a @ a, tol)


def _solve_core(gf, rhs):
    # LU with partial pivoting; singular GF means the index exceeds one.
    try:
        return np.linalg.solve(gf, rhs)
    except np.linalg.LinAlgError as exc:
        raise IndexNotOne("core block G F is singular") from exc


def group_inverse(a, tol=None):
    """Group inverse ``F (G F)^-2 G`` from a full-rank factorization.

    The zero matrix is its own group inverse.

    Raises
    ------
    NotSquare
    IndexNotOne
        If ``rank(a @ a) < rank(a)``.
    """
    a = np.asarray(a, dtype=np.float64)
    _require_square(a)
    tol = _tol(tol)
    if not index_is_one(a, tol):
        raise IndexNotOne("matrix has index greater than one")
    try:
        f, g = full_rank_factorization(a, tol)
    except ZeroMatrix:
        return np.zeros_like(a)
    gf = g @ f
    w = _solve_core(gf, _solve_core(gf, g))
    return f @ w


@dataclass(frozen=True)
class CoreDecomposition:
    """``a == p @ blockdiag(c, 0) @ p_inv`` with ``p`` and ``c`` invertible."""

    p: np.ndarray
    p_inv: np.ndarray
    c: np.ndarray
    rank: int

    def reconstruct(self):
        n = self.p.shape[0]
        r = self.rank
        mid = np.zeros((n, n))
        mid[:r, :r] = self.c
        return self.p @ mid @ self.p_inv

    def to_basis(self, m):
        """Express ``m`` in the ``p`` basis, i.e. ``p_inv @ m @ p``."""
        return self.p_inv @ m @ self.p


def core_decomposition(a, tol=None):
    """Similarity ``a = P blockdiag(C, 0) P^-1`` for an index-one matrix.

    ``P = [F | K]`` with ``F`` from :func:`full_rank_factorization` and ``K``
    an orthonormal null-space basis; ``C = G F``.
    """
    a = np.asarray(a, dtype=np.float64)
    _require_square(a)
    tol = _tol(tol)
    if not index_is_one(a, tol):
        raise IndexNotOne("matrix has index greater than one")
    f, g = full_rank_factorization(a, tol)
    r = f.shape[1]
    _, _, vt = np.linalg.svd(a)
    k = vt[r:].T
    p = np.hstack([f, k])
    try:
        p_inv = np.linalg.inv(p)
    except np.linalg.LinAlgError as exc:
        raise IndexNotOne("range and null space are not complementary") from exc
    c = g @ f
    if rank(c, tol) < r:
        raise IndexNotOne("core block G F is singular")
    return CoreDecomposition(p=p, p_inv=p_inv, c=c, rank=r)
