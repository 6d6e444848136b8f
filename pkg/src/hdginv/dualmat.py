"""Dual matrices ``A + eps*A0`` (``eps**2 == 0``) and their generalized inverses."""

import logging
from dataclasses import dataclass

import numpy as np

from . import realmat
from ._stack import StackedMatrix, penrose_residuals
from .errors import (FormulaInconsistent, NotGroupInvertible, NotMPInvertible,
                     ShapeMismatch, ZeroMatrix)
from .realmat import CoreDecomposition, _tol, as_matrix, frobenius

logger = logging.getLogger(__name__)

__all__ = [
    "DualMatrix",
    "DualCanonicalForm",
    "dual_add",
    "dual_mul",
    "dual_index_is_one",
    "dggi_exists",
    "dggi",
    "canonical_form",
    "mpdgi",
    "dmpgi",
    "dmpgi_select",
    "dmpgi_exists",
    "MP_VARIANTS",
]

# Post-hoc axiom checks accept residual <= VERIFY_RTOL * (1+|A|) * (1+|X|).
VERIFY_RTOL = 1e-7

MP_VARIANTS = ("printed", "swapped", "literature")


class DualMatrix(StackedMatrix):
    """Immutable pair ``(primal, dual)`` of equally shaped real matrices."""

    __slots__ = ()

    def __init__(self, primal, dual=None):
        p = as_matrix(primal)
        d = np.zeros_like(p) if dual is None else as_matrix(dual)
        if p.shape != d.shape:
            raise ShapeMismatch(f"primal {p.shape} and dual {d.shape} differ in shape")
        super().__init__(np.stack([p, d]))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))

    @classmethod
    def zeros(cls, rows, cols):
        return cls(np.zeros((rows, cols)))

    @property
    def primal(self):
        return self._c[0]

    @property
    def dual(self):
        return self._c[1]


def dual_add(x, y):
    return x + y


def dual_mul(x, y):
    """``(A C, A C0 + A0 C)``; the ``eps**2`` term vanishes."""
    return x @ y


def _projector_gap(a, a_g):
    return np.eye(a.shape[0]) - a @ a_g


def dual_index_is_one(x, tol=None):
    """True iff ``Ind(A) == 1`` and ``(I - A A#) A0 (I - A A#) == 0``."""
    tol = _tol(tol)
    a, a0 = x.primal, x.dual
    if not realmat.index_is_one(a, tol):
        return False
    q = _projector_gap(a, realmat.group_inverse(a, tol))
    return tol.is_zero(frobenius(q @ a0 @ q), frobenius(a0))


def dggi_exists(x, tol=None):
    """True iff the dual group inverse of the square matrix ``x`` exists."""
    if x.rows != x.cols:
        raise ShapeMismatch(f"group inverse needs a square matrix, got {x.shape}")
    return dual_index_is_one(x, tol)


def _dggi_parts(a, a0, tol):
    g = realmat.group_inverse(a, tol)
    q = _projector_gap(a, g)
    g2 = g @ g
    return g, -g @ a0 @ g + g2 @ a0 @ q + q @ a0 @ g2


def dggi(x, tol=None):
    """Dual group inverse.

    ``A# + eps (-A# A0 A# + (A#)^2 A0 (I - A A#) + (I - A A#) A0 (A#)^2)``

    Raises
    ------
    NotGroupInvertible
        If the dual index of ``x`` is not one.
    """
    tol = _tol(tol)
    if x.rows != x.cols:
        raise ShapeMismatch(f"group inverse needs a square matrix, got {x.shape}")
    if not dual_index_is_one(x, tol):
        raise NotGroupInvertible("dual index is not one")
    return DualMatrix(*_dggi_parts(x.primal, x.dual, tol))


@dataclass(frozen=True)
class DualCanonicalForm:
    """``P diag(C, 0) P^-1 + eps P [[B1, B2], [B3, 0]] P^-1``."""

    core: CoreDecomposition
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray

    def _embed(self, top_left, top_right, bottom_left):
        n = self.core.p.shape[0]
        r = self.core.rank
        m = np.zeros((n, n))
        m[:r, :r] = top_left
        m[:r, r:] = top_right
        m[r:, :r] = bottom_left
        return self.core.p @ m @ self.core.p_inv

    def reconstruct(self):
        dual = self._embed(self.b1, self.b2, self.b3)
        return DualMatrix(self.core.reconstruct(), dual)

    def group_inverse(self):
        """Block-form dual group inverse from the canonical blocks."""
        r = self.core.rank
        n = self.core.p.shape[0]
        if r == 0:
            return DualMatrix.zeros(n, n)
        ci = np.linalg.inv(self.core.c)
        ci2 = ci @ ci
        primal = self._embed(ci, np.zeros((r, n - r)), np.zeros((n - r, r)))
        dual = self._embed(-ci @ self.b1 @ ci, ci2 @ self.b2, self.b3 @ ci2)
        return DualMatrix(primal, dual)


def canonical_form(x, tol=None):
    """Read the ``B1, B2, B3`` blocks of ``x.dual`` in the core basis of ``x.primal``."""
    tol = _tol(tol)
    if not dual_index_is_one(x, tol):
        raise NotGroupInvertible("dual index is not one")
    n = x.rows
    try:
        core = realmat.core_decomposition(x.primal, tol)
    except ZeroMatrix:
        core = CoreDecomposition(p=np.eye(n), p_inv=np.eye(n),
                                 c=np.zeros((0, 0)), rank=0)
    m = core.to_basis(x.dual)
    r = core.rank
    if not tol.is_zero(frobenius(m[r:, r:]), frobenius(x.dual)):
        raise NotGroupInvertible("(2,2) block of the dual part is not zero")
    return DualCanonicalForm(core=core, b1=m[:r, :r], b2=m[:r, r:], b3=m[r:, :r])


def mpdgi(x, tol=None):
    """Always-existing ``A^+ - eps A^+ A0 A^+``."""
    g = realmat.pinv(x.primal, _tol(tol))
    return DualMatrix(g, -g @ x.dual @ g)


def _mp_corrections(a, a_dag, d, eye_rows, eye_cols):
    """Yield ``(variant, eps-part)`` candidates for the MP inverse of ``a + eps d``.

    Works on any operand type supporting ``@``, ``-``, ``+`` and ``.T``
    (real arrays for the dual level, dual matrices for the hyper-dual level).
    ``eye_rows``/``eye_cols`` are identities matching ``a``'s row/column count.
    """
    ata_dag = a_dag @ a_dag.T          # (A^T A)^+
    aat_dag = a_dag.T @ a_dag          # (A A^T)^+
    left_gap = eye_rows - a @ a_dag      # I - A A^+
    right_gap = eye_cols - a_dag @ a     # I - A^+ A
    head = -(a_dag @ d @ a_dag) + ata_dag @ d.T @ left_gap
    square = a.shape[0] == a.shape[1]
    if square:
        yield "printed", head + left_gap @ d.T @ ata_dag
        yield "swapped", head + left_gap @ d.T @ aat_dag
    yield "literature", head + right_gap @ d.T @ aat_dag


def _axioms_pass(residuals, a_norm, x_norm):
    limit = VERIFY_RTOL * (1.0 + a_norm) * (1.0 + x_norm)
    return max(residuals) <= limit


def dmpgi_exists(x, tol=None):
    """Residual of ``(I - A A^+) A0 (I - A^+ A)`` and whether it is zero."""
    tol = _tol(tol)
    a, a0 = x.primal, x.dual
    g = realmat.pinv(a, tol)
    m, n = a.shape
    res = frobenius((np.eye(m) - a @ g) @ a0 @ (np.eye(n) - g @ a))
    return tol.is_zero(res, frobenius(a0)), res


def dmpgi_select(x, tol=None):
    """Dual Moore-Penrose inverse together with the formula variant that passed.

    The candidates are tried in :data:`MP_VARIANTS` order and the first one
    satisfying all four dual Penrose equations is returned.

    Raises
    ------
    NotMPInvertible
        If ``(I - A A^+) A0 (I - A^+ A) != 0``.
    FormulaInconsistent
        If no variant passes the Penrose check.
    """
    tol = _tol(tol)
    ok, res = dmpgi_exists(x, tol)
    if not ok:
        raise NotMPInvertible(f"existence residual {res:.3e} is not zero")
    a, a0 = x.primal, x.dual
    g = realmat.pinv(a, tol)
    m, n = a.shape
    for variant, corr in _mp_corrections(a, g, a0, np.eye(m), np.eye(n)):
        cand = DualMatrix(g, corr)
        if _axioms_pass(penrose_residuals(x, cand), x.norm(), cand.norm()):
            logger.info("dmpgi: selected %s formula variant", variant)
            return cand, variant
        logger.debug("dmpgi: %s formula variant failed the Penrose check", variant)
    raise FormulaInconsistent("no dmpgi formula variant satisfies the Penrose equations")


def dmpgi(x, tol=None):
    """Dual Moore-Penrose generalized inverse; see :func:`dmpgi_select`."""
    return dmpgi_select(x, tol)[0]

