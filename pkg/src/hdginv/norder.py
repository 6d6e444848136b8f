"""n-order dual matrices: ``2**n`` real components indexed by unit bitmasks.

Component ``s`` multiplies the product of the units ``eps_{i+1}`` whose bit
``i`` is set in ``s``.  Order 1 is a dual matrix and order 2 a hyper-dual
matrix (bit 0 is ``eps``, bit 1 is ``eps*``).  The top unit splits a matrix
as ``B + eps_n C`` with ``B`` and ``C`` of order ``n - 1``.
"""

from dataclasses import dataclass

import numpy as np

from . import realmat
from ._stack import StackedMatrix, group_residuals, penrose_residuals
from .dualmat import DualMatrix
from .errors import (IndexNotOne, NotGroupInvertible, NotSquare, OracleMismatch,
                     OrderMismatch, OrderZero, ShapeMismatch)
from .hyperdual import HyperDualMatrix
from .realmat import _tol, as_matrix

__all__ = [
    "MAX_ORDER",
    "NOrderMatrix",
    "AxiomReport",
    "n_add",
    "n_mul",
    "split",
    "join",
    "n_group_inverse",
    "n_group_inverse_via_axioms",
    "verify_group_axioms",
    "verify_penrose_axioms",
]

MAX_ORDER = 8


class NOrderMatrix(StackedMatrix):
    """Immutable matrix over ``n`` commuting nilpotent units.

    Parameters
    ----------
    components : array_like of shape (2**n, rows, cols), or mapping
        Either the stacked components or a mapping from every mask
        ``0 .. 2**n - 1`` to a real matrix.
    """

    __slots__ = ()

    def __init__(self, components):
        if isinstance(components, dict):
            k = len(components)
            if sorted(components) != list(range(k)):
                raise OrderMismatch("component masks must be exactly 0 .. 2**n - 1")
            mats = [as_matrix(components[s]) for s in range(k)]
            if any(m.shape != mats[0].shape for m in mats):
                raise ShapeMismatch("components differ in shape")
            components = np.stack(mats)
        super().__init__(components)
        if self.order > MAX_ORDER:
            raise OrderMismatch(f"order {self.order} exceeds the cap of {MAX_ORDER}")

    @classmethod
    def from_real(cls, a):
        return cls._wrap(as_matrix(a)[None])

    @classmethod
    def from_algebra(cls, x):
        """Convert any dual, hyper-dual or n-order matrix losslessly."""
        return cls._wrap(x.components)

    @classmethod
    def zeros(cls, order, rows, cols):
        return cls._wrap(np.zeros((1 << order, rows, cols)))

    @classmethod
    def identity(cls, order, n):
        comps = np.zeros((1 << order, n, n))
        comps[0] = np.eye(n)
        return cls._wrap(comps)

    def component(self, mask):
        return self._c[mask]

    def as_dict(self):
        return {s: self._c[s] for s in range(self._c.shape[0])}

    def to_real(self):
        if self.order != 0:
            raise OrderMismatch(f"order {self.order} is not a real matrix")
        return self._c[0].copy()

    def to_dual(self):
        if self.order != 1:
            raise OrderMismatch(f"order {self.order} is not a dual matrix")
        return DualMatrix._wrap(self._c)

    def to_hyperdual(self):
        if self.order != 2:
            raise OrderMismatch(f"order {self.order} is not a hyper-dual matrix")
        return HyperDualMatrix._wrap(self._c)


def n_add(x, y):
    return x + y


def n_mul(x, y):
    """``(XY)_S = sum over T subset of S of X_T Y_{S minus T}``."""
    return x @ y


def split(x):
    """Return ``(B, C)`` with ``x == B + eps_n C``."""
    if x.order == 0:
        raise OrderZero("an order-0 matrix has no unit to split off")
    half = x.components.shape[0] // 2
    return (NOrderMatrix._wrap(x.components[:half]),
            NOrderMatrix._wrap(x.components[half:]))


def join(b, c):
    """Inverse of :func:`split`: ``B + eps_{n+1} C``."""
    if b.order != c.order:
        raise OrderMismatch(f"orders {b.order} and {c.order} differ")
    if b.shape != c.shape:
        raise ShapeMismatch(f"shapes {b.shape} and {c.shape} differ")
    return NOrderMatrix(np.concatenate([b.components, c.components]))


def _ginv(x, tol):
    if x.order == 0:
        try:
            g = realmat.group_inverse(x.components[0], tol)
        except IndexNotOne as exc:
            raise NotGroupInvertible("real part has index greater than one",
                                     depth=0) from exc
        return NOrderMatrix._wrap(g[None])
    b, c = split(x)
    bg = _ginv(b, tol)
    gap = b.identity_like() - b @ bg
    res = (gap @ c @ gap).norm()
    if not tol.is_zero(res, c.norm()):
        raise NotGroupInvertible(
            f"existence condition fails at order {x.order} (residual {res:.3e})",
            depth=x.order)
    bg2 = bg @ bg
    z = -(bg @ c @ bg) + bg2 @ c @ gap + gap @ c @ bg2
    return join(bg, z)


def n_group_inverse(x, tol=None):
    """Group inverse by recursion on the top unit.

    With ``x = B + eps_n C`` and ``B#`` known, the inverse exists iff
    ``(I - B B#) C (I - B B#) == 0`` and is ``B# + eps_n Z`` with
    ``Z = -B# C B# + (B#)^2 C (I - B B#) + (I - B B#) C (B#)^2``.

    Raises
    ------
    NotGroupInvertible
        ``depth`` holds the order at which the condition failed.
    """
    if x.rows != x.cols:
        raise NotSquare(f"expected a square matrix, got shape {x.shape}")
    return _ginv(NOrderMatrix.from_algebra(x), _tol(tol))


def _sandwich_operator(left, right):
    """Matrix of ``Z -> L Z R`` on the row-major stacked vec of ``Z``."""
    k = left.components.shape[0]
    n = left.rows
    nn = n * n
    big = np.zeros((k * nn, k * nn))
    lc, rc = left.components, right.components
    for s in range(k):
        u = s
        while True:
            rest = s ^ u
            block = np.zeros((nn, nn))
            t = rest
            while True:
                block += np.kron(lc[t], rc[rest ^ t].T)
                if t == 0:
                    break
                t = (t - 1) & rest
            big[s * nn:(s + 1) * nn, u * nn:(u + 1) * nn] = block
            if u == 0:
                break
            u = (u - 1) & s
    return big


def n_group_inverse_via_axioms(x, tol=None, atol=1e-7):
    """Recompute the top-unit part of the group inverse from its equations.

    The lower part is taken from :func:`n_group_inverse` applied to ``B``;
    the ``eps_n`` part is the least-squares solution of the linearized
    defining equations.  Full column rank of that system is the uniqueness
    statement, and the solution must match the recursive closed form.

    Raises
    ------
    OracleMismatch
    """
    tol = _tol(tol)
    x = NOrderMatrix.from_algebra(x)
    closed = n_group_inverse(x, tol)
    b, c = split(x)
    y, _ = split(closed)
    eye = b.identity_like()
    lhs = np.vstack([
        _sandwich_operator(b, b),
        _sandwich_operator(y @ b, eye) + _sandwich_operator(eye, b @ y)
        - _sandwich_operator(eye, eye),
        _sandwich_operator(b, eye) - _sandwich_operator(eye, b),
    ])
    rhs = np.concatenate([
        (c - b @ y @ c - c @ y @ b).components.ravel(),
        (-(y @ c @ y)).components.ravel(),
        (y @ c - c @ y).components.ravel(),
    ])
    sol, _, rank, _ = np.linalg.lstsq(lhs, rhs, rcond=None)
    if rank < lhs.shape[1]:
        raise OracleMismatch(f"defining equations are rank deficient ({rank} < {lhs.shape[1]})")
    resid = float(np.linalg.norm(lhs @ sol - rhs))
    if resid > atol * (1.0 + float(np.linalg.norm(rhs))):
        raise OracleMismatch(f"defining equations left residual {resid:.3e}")
    z = NOrderMatrix._wrap(sol.reshape(b.components.shape))
    result = join(y, z)
    gap = result.max_abs_diff(closed)
    if gap > atol * (1.0 + closed.norm()):
        raise OracleMismatch(f"axiom solution differs from closed form by {gap:.3e}")
    return result


@dataclass(frozen=True)
class AxiomReport:
    """Per-equation residual norms (largest component Frobenius norm)."""

    kind: str
    names: tuple
    residuals: tuple

    @property
    def max(self):
        return max(self.residuals)

    def passes(self, limit):
        return self.max <= limit

    def as_dict(self):
        return dict(zip(self.names, self.residuals))


def _check_pair(a, x):
    if not isinstance(a, StackedMatrix) or not isinstance(x, StackedMatrix):
        raise TypeError("axiom checks need algebra matrices")
    if a.order != x.order:
        raise OrderMismatch(f"orders {a.order} and {x.order} differ")
    if a.shape != x.T.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {x.shape} are not conformable")


def _lift(m):
    if isinstance(m, StackedMatrix):
        return m
    return NOrderMatrix.from_real(m)


def verify_group_axioms(a, x, tol=None):
    """Residuals of ``AXA = A``, ``XAX = X`` and ``AX = XA``.

    Accepts real arrays as well as dual, hyper-dual and n-order matrices.
    """
    a, x = _lift(a), _lift(x)
    _check_pair(a, x)
    if a.rows != a.cols:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    return AxiomReport("group", ("axa", "xax", "commute"), group_residuals(a, x))


def verify_penrose_axioms(a, x, tol=None):
    """Residuals of the four Penrose equations, transposition componentwise."""
    a, x = _lift(a), _lift(x)
    _check_pair(a, x)
    return AxiomReport("penrose", ("axa", "xax", "ax_symmetric", "xa_symmetric"),
                       penrose_residuals(a, x))
