"""Hyper-dual linear systems ``A~ x~ = b~`` solved with the group inverse.

A :class:`HyperDualVector` acts as an ``n x 1`` hyper-dual matrix, so every
matrix-vector product goes through the same kernel as matrix products.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._stack import StackedMatrix
from .dualmat import DualMatrix
from .errors import Inconsistent, ShapeMismatch, VerificationError
from .hyperdual import HyperDualMatrix, hdggi
from .realmat import _tol

__all__ = [
    "HyperDualVector",
    "ComponentConditions",
    "ProbeReport",
    "hnorm",
    "consistent",
    "solve",
    "solution_component_conditions",
    "normal_solution",
    "in_range",
    "in_null",
    "norm_minimality_probe",
]


def _vector(v):
    arr = np.array(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ShapeMismatch(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


class HyperDualVector:
    """Immutable ``u0 + eps u1 + eps* v2 + eps eps* v3``."""

    __slots__ = ("_c",)

    def __init__(self, u0, u1=None, v2=None, v3=None):
        base = _vector(u0)
        parts = [base]
        for extra in (u1, v2, v3):
            comp = np.zeros_like(base) if extra is None else _vector(extra)
            if comp.shape != base.shape:
                raise ShapeMismatch(f"component lengths {base.size} and {comp.size} differ")
            parts.append(comp)
        self._c = np.stack(parts)
        self._c.flags.writeable = False

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n))

    @classmethod
    def from_matrix(cls, m):
        """Inverse of :meth:`as_matrix`; ``m`` must have one column."""
        if not isinstance(m, StackedMatrix) or m.order != 2:
            raise ShapeMismatch("expected a hyper-dual matrix")
        if m.cols != 1:
            raise ShapeMismatch(f"expected a single column, got shape {m.shape}")
        return cls(*m.components[:, :, 0])

    def as_matrix(self):
        return HyperDualMatrix(*(c[:, None] for c in self._c))

    @property
    def components(self):
        return self._c

    @property
    def size(self):
        return self._c.shape[1]

    u0 = property(lambda self: self._c[0])
    u1 = property(lambda self: self._c[1])
    v2 = property(lambda self: self._c[2])
    v3 = property(lambda self: self._c[3])

    def _peer(self, other):
        if not isinstance(other, HyperDualVector):
            return False
        if other.size != self.size:
            raise ShapeMismatch(f"vector lengths {self.size} and {other.size} differ")
        return True

    def __add__(self, other):
        if not self._peer(other):
            return NotImplemented
        return HyperDualVector(*(self._c + other._c))

    def __sub__(self, other):
        if not self._peer(other):
            return NotImplemented
        return HyperDualVector(*(self._c - other._c))

    def __neg__(self):
        return HyperDualVector(*(-self._c))

    def __mul__(self, scalar):
        return HyperDualVector(*(self._c * float(scalar)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HyperDualVector):
            return NotImplemented
        return bool(np.array_equal(self._c, other._c))

    __hash__ = None

    def __repr__(self):
        return f"HyperDualVector(n={self.size})"


def hnorm(x):
    """``sqrt(|u0|^2 + |u1|^2 + |v2|^2 + |v3|^2)``."""
    # hypot scales internally, so tiny or huge entries neither underflow nor overflow.
    return math.hypot(*x.components.ravel())


def _apply(a, v):
    if a.cols != v.size:
        raise ShapeMismatch(f"matrix shape {a.shape} does not act on length {v.size}")
    return HyperDualVector.from_matrix(a @ v.as_matrix())


def _residual(a, g, b):
    return hnorm(_apply(a, _apply(g, b)) - b)


def _range_scale(a, g, w):
    # Rounding in A~ A~# w~ grows with |A~| |A~#|.
    return (1.0 + a.norm() * g.norm()) * hnorm(w)


def consistent(a, b, tol=None):
    """True iff ``A~ A~# b~ == b~`` within tolerance.

    Raises
    ------
    NotGroupInvertible
    """
    tol = _tol(tol)
    g = hdggi(a, tol)
    return tol.is_zero(_residual(a, g, b), _range_scale(a, g, b))


def solve(a, b, z=None, tol=None):
    """General solution ``A~# b~ + (I - A~ A~#) z~``; ``z~ = 0`` by default.

    Raises
    ------
    Inconsistent
    NotGroupInvertible
    """
    tol = _tol(tol)
    g = hdggi(a, tol)
    res = _residual(a, g, b)
    if not tol.is_zero(res, _range_scale(a, g, b)):
        raise Inconsistent(f"system is inconsistent (residual {res:.3e})")
    x = _apply(g, b)
    if z is None:
        return x
    return x + z - _apply(a, _apply(g, z))


@dataclass(frozen=True)
class ComponentConditions:
    """The two dual-vector identities on ``b^ = u0 + eps u1`` and ``b^_0 = v2 + eps v3``."""

    primal_residual: float
    hyper_residual: float
    threshold: float

    @property
    def primal_holds(self):
        return self.primal_residual <= self.threshold

    @property
    def hyper_holds(self):
        return self.hyper_residual <= self.threshold

    @property
    def holds(self):
        return self.primal_holds and self.hyper_holds

    def lines(self):
        return [f"primal_residual: {self.primal_residual:.17g}",
                f"hyper_residual: {self.hyper_residual:.17g}",
                f"threshold: {self.threshold:.17g}",
                f"consistent: {str(self.holds).lower()}"]


def _dual_col(p, d):
    return DualMatrix(p[:, None], d[:, None])


def solution_component_conditions(a, b, tol=None):
    """Evaluate ``b^ = A^ A^# b^`` and ``b^_0 = A^ A^# b^_0 + (I - A^ A^#) A^_0 A^# b^``.

    Together they are equivalent to consistency of the hyper-dual system.

    Raises
    ------
    NotGroupInvertible
    """
    tol = _tol(tol)
    full = hdggi(a, tol)
    g = full.primal
    ah, ah0 = a.primal, a.hyper
    bh = _dual_col(b.u0, b.u1)
    bh0 = _dual_col(b.v2, b.v3)
    proj = ah @ g
    gap = proj.identity_like() - proj
    r1 = (proj @ bh - bh).components
    r2 = (proj @ bh0 + gap @ ah0 @ g @ bh - bh0).components
    return ComponentConditions(float(np.linalg.norm(r1)), float(np.linalg.norm(r2)),
                               tol.rel * (1.0 + _range_scale(a, full, b)))


def normal_solution(a, b, tol=None):
    """``A~# b~``, the solution of ``A~^2 x~ = A~ b~`` lying in the range of ``A~``.

    Raises
    ------
    NotGroupInvertible
    VerificationError
        If either defining property fails numerically.
    """
    tol = _tol(tol)
    g = hdggi(a, tol)
    x = _apply(g, b)
    ab = _apply(a, b)
    res = hnorm(_apply(a, _apply(a, x)) - ab)
    an = a.norm()
    if not tol.is_zero(res, an * (an * hnorm(x) + hnorm(b))):
        raise VerificationError(f"A~^2 x~ = A~ b~ fails (residual {res:.3e})")
    rr = _residual(a, g, x)
    if not tol.is_zero(rr, _range_scale(a, g, x)):
        raise VerificationError(f"solution leaves the range (residual {rr:.3e})")
    return x


def in_range(a, w, tol=None):
    """True iff ``A~ A~# w~ == w~``.

    Raises
    ------
    NotGroupInvertible
    """
    tol = _tol(tol)
    g = hdggi(a, tol)
    return tol.is_zero(_residual(a, g, w), _range_scale(a, g, w))


def in_null(a, w, tol=None):
    """True iff ``A~ w~ == 0``."""
    tol = _tol(tol)
    return tol.is_zero(hnorm(_apply(a, w)), a.norm() * hnorm(w))


@dataclass(frozen=True)
class ProbeReport:
    """h-norms of ``A~# b~`` against sampled members of the solution family."""

    samples: int
    base_norm: float
    min_norm: float
    median_norm: float
    violations: int

    def lines(self):
        return [f"samples: {self.samples}",
                f"base_norm: {self.base_norm:.17g}",
                f"min_norm: {self.min_norm:.17g}",
                f"median_norm: {self.median_norm:.17g}",
                f"violations: {self.violations}"]


def norm_minimality_probe(a, b, samples=1000, seed=0, tol=None):
    """Compare ``hnorm(A~# b~)`` with ``hnorm(solve(a, b, z~))`` for random ``z~``.

    A violation is a sample whose norm falls below the base norm by more
    than a relative ``1e-12``.  Nothing is asserted.

    Raises
    ------
    Inconsistent
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    tol = _tol(tol)
    base = hnorm(solve(a, b, tol=tol))
    rng = np.random.default_rng(seed)
    norms = np.empty(samples)
    for i in range(samples):
        z = HyperDualVector(*rng.standard_normal((4, a.cols)))
        norms[i] = hnorm(solve(a, b, z, tol))
    slack = 1e-12 * (1.0 + base)
    violations = int(np.count_nonzero(norms < base - slack))
    return ProbeReport(samples, base, float(norms.min()), float(np.median(norms)),
                       violations)
