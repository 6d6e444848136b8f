"""Hyper-dual matrices and their group and Moore-Penrose inverses.

A hyper-dual matrix ``A0 + eps A1 + eps* A2 + eps eps* A3`` is stored with
component masks ``0..3``: bit 0 marks ``eps`` and bit 1 marks ``eps*``.  It is
also viewed as a dual number over dual matrices, ``A^ + eps* A^_0`` with
``A^ = A0 + eps A1`` (the *primal* view) and ``A^_0 = A2 + eps A3`` (the
*hyper* view).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import realmat
from ._stack import StackedMatrix, penrose_residuals
from .dualmat import (DualMatrix, _axioms_pass, _mp_corrections, dggi,
                      dmpgi, dmpgi_exists, dual_index_is_one)
from .errors import (FormulaInconsistent, HypothesisFailed, InverseMissing,
                     NotGroupInvertible, NotMPInvertible, NotSquare,
                     OracleMismatch, ShapeMismatch, ToleranceConflict)
from .realmat import _tol, as_matrix, frobenius

logger = logging.getLogger(__name__)

__all__ = [
    "HyperDualMatrix",
    "ExistenceReport",
    "OrderLawReport",
    "hd_add",
    "hd_mul",
    "hdggi_exists",
    "hdggi",
    "hdggi_via_axioms",
    "hdggi_commuting_case",
    "hdmpgi_exists",
    "hdmpgi",
    "hdmpgi_select",
    "order_law_check",
]

ORACLE_ATOL = 1e-7
CONCLUSION_RTOL = 1e-7


class HyperDualMatrix(StackedMatrix):
    """Immutable ``A0 + eps A1 + eps* A2 + eps eps* A3``."""

    __slots__ = ()

    def __init__(self, a0, a1=None, a2=None, a3=None):
        base = as_matrix(a0)
        parts = [base]
        for extra in (a1, a2, a3):
            comp = np.zeros_like(base) if extra is None else as_matrix(extra)
            if comp.shape != base.shape:
                raise ShapeMismatch(f"component shapes {base.shape} and {comp.shape} differ")
            parts.append(comp)
        super().__init__(np.stack(parts))

    @classmethod
    def from_duals(cls, primal, hyper):
        if primal.shape != hyper.shape:
            raise ShapeMismatch(f"primal {primal.shape} and hyper {hyper.shape} differ")
        return cls._wrap(np.concatenate([primal.components, hyper.components]))

    @classmethod
    def lift(cls, x):
        """Embed a dual matrix with zero ``eps*`` parts."""
        return cls.from_duals(x, DualMatrix.zeros(*x.shape))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))

    @property
    def a0(self):
        return self._c[0]

    @property
    def a1(self):
        return self._c[1]

    @property
    def a2(self):
        return self._c[2]

    @property
    def a3(self):
        return self._c[3]

    @property
    def primal(self):
        return DualMatrix._wrap(self._c[:2])

    @property
    def hyper(self):
        return DualMatrix._wrap(self._c[2:])


def hd_add(x, y):
    return x + y


def hd_mul(x, y):
    """``(A0B0, A0B1 + A1B0, A0B2 + A2B0, A0B3 + A1B2 + A2B1 + A3B0)``."""
    return x @ y


@dataclass(frozen=True)
class ExistenceReport:
    """Outcome of an inverse-existence test.

    ``residual_iii`` is the norm of the dual projector condition
    ``(I - A^ A^g) A^_0 (I - A^g A^)``; ``residuals_iv`` are the real
    component conditions (empty for the Moore-Penrose test).
    """

    exists: bool
    residual_iii: float
    residuals_iv: tuple
    method: str
    threshold: float
    reason: str = None

    def lines(self):
        """``key: value`` lines for text reports."""
        out = [f"exists: {str(self.exists).lower()}",
               f"method: {self.method}",
               f"threshold: {self.threshold:.17g}",
               f"residual_iii: {self.residual_iii:.17g}"]
        for i, r in enumerate(self.residuals_iv, 1):
            out.append(f"residual_iv_{i}: {r:.17g}")
        if self.reason:
            out.append(f"reason: {self.reason}")
        return out


def _require_square(x):
    if x.rows != x.cols:
        raise NotSquare(f"expected a square matrix, got shape {x.shape}")


def _component_residuals(x, tol):
    """Real conditions on ``A1``, ``A2`` and ``A3`` in the ``A0`` group projector."""
    g0 = realmat.group_inverse(x.a0, tol)
    q = np.eye(x.rows) - x.a0 @ g0
    a1, a2, a3 = x.a1, x.a2, x.a3
    mixed = a3 - a1 @ g0 @ a2 - a2 @ g0 @ a1
    return (frobenius(q @ a1 @ q), frobenius(q @ a2 @ q), frobenius(q @ mixed @ q))


def hdggi_exists(x, tol=None):
    """Test whether the hyper-dual group inverse of ``x`` exists.

    Two equivalent routes are evaluated: the dual-matrix projector condition
    on the hyper view, and three real conditions on the components.  A
    disagreement between them raises :class:`ToleranceConflict`.
    """
    tol = _tol(tol)
    _require_square(x)
    threshold = tol.rel * (1.0 + x.norm())
    if not dual_index_is_one(x.primal, tol):
        if realmat.index_is_one(x.a0, tol):
            iv = _component_residuals(x, tol)
        else:
            iv = (math.inf,) * 3
        return ExistenceReport(False, math.inf, iv, "dual-index", threshold,
                               reason="dual index of the primal part is not one")
    a = x.primal
    d = x.hyper
    gap = a.identity_like() - a @ dggi(a, tol)
    res_iii = (gap @ d @ gap).norm()
    iv = _component_residuals(x, tol)
    ok_iii = res_iii <= threshold
    ok_iv = max(iv) <= threshold
    if ok_iii != ok_iv:
        raise ToleranceConflict(
            f"projector test ({res_iii:.3e}) and component test ({max(iv):.3e}) "
            f"disagree at threshold {threshold:.3e}")
    reason = None if ok_iii else "hyper part has a component outside the core"
    return ExistenceReport(ok_iii, res_iii, iv, "projector+components", threshold,
                           reason=reason)


def _hdggi_formula(x, g):
    d = x.hyper
    gap = g.identity_like() - x.primal @ g
    g2 = g @ g
    corr = -(g @ d @ g) + g2 @ d @ gap + gap @ d @ g2
    return HyperDualMatrix.from_duals(g, corr)


def hdggi(x, tol=None, *, check=True):
    """Hyper-dual group inverse.

    ``A^# + eps* (-A^# A^_0 A^# + (A^#)^2 A^_0 (I - A^ A^#) + (I - A^ A^#) A^_0 (A^#)^2)``
    with all products in dual arithmetic.  With ``check=False`` the existence
    test is skipped and the formula is evaluated whenever the primal view has
    a dual group inverse.

    Raises
    ------
    NotGroupInvertible
    """
    tol = _tol(tol)
    _require_square(x)
    if check:
        report = hdggi_exists(x, tol)
        if not report.exists:
            raise NotGroupInvertible(report.reason, report=report)
    return _hdggi_formula(x, dggi(x.primal, tol))


def _kron_vec(left, right):
    # Row-major vec: vec(L Y R) = kron(L, R^T) vec(Y).
    return np.kron(left, right.T)


def _dual_sandwich(left, right):
    """Matrix of ``Y^ -> L^ Y^ R^`` on ``[vec(Y0); vec(Y1)]``."""
    l0, l1 = left.primal, left.dual
    r0, r1 = right.primal, right.dual
    k00 = _kron_vec(l0, r0)
    cross = _kron_vec(l1, r0) + _kron_vec(l0, r1)
    return np.block([[k00, np.zeros_like(k00)], [cross, k00]])


def _vec(x):
    return np.concatenate([x.primal.ravel(), x.dual.ravel()])


def hdggi_via_axioms(x, tol=None):
    """Hyper-dual group inverse by solving its defining equations directly.

    The primal view is fixed to the dual group inverse; the hyper view is the
    least-squares solution of the three dual-part equations.  The result is
    cross-checked against :func:`hdggi`.

    Raises
    ------
    NotGroupInvertible
    OracleMismatch
        If the linear system is not solved exactly or its solution differs
        from the closed form.
    """
    tol = _tol(tol)
    closed = hdggi(x, tol)
    n = x.rows
    a, a0 = x.primal, x.hyper
    g = closed.primal
    eye = a.identity_like()
    lhs = np.vstack([
        _dual_sandwich(a, a),
        _dual_sandwich(g @ a, eye) + _dual_sandwich(eye, a @ g) - _dual_sandwich(eye, eye),
        _dual_sandwich(a, eye) - _dual_sandwich(eye, a),
    ])
    rhs = np.concatenate([
        _vec(a0 - a @ g @ a0 - a0 @ g @ a),
        _vec(-(g @ a0 @ g)),
        _vec(g @ a0 - a0 @ g),
    ])
    sol, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    resid = float(np.linalg.norm(lhs @ sol - rhs))
    if resid > ORACLE_ATOL * (1.0 + float(np.linalg.norm(rhs))):
        raise OracleMismatch(f"defining equations left residual {resid:.3e}")
    nn = n * n
    hyper = DualMatrix(sol[:nn].reshape(n, n), sol[nn:].reshape(n, n))
    result = HyperDualMatrix.from_duals(g, hyper)
    gap = result.max_abs_diff(closed)
    if gap > ORACLE_ATOL * (1.0 + closed.norm()):
        raise OracleMismatch(f"axiom solution differs from closed form by {gap:.3e}")
    return result


def hdggi_commuting_case(x, tol=None):
    """Shortcut ``A^# - eps* A^# A^_0 A^#`` when ``A^ A^# A^_0 = A^_0 A^ A^# = A^_0``.

    Raises
    ------
    NotGroupInvertible
    HypothesisFailed
        If the hyper view leaves the range of the primal view.
    """
    tol = _tol(tol)
    report = hdggi_exists(x, tol)
    if not report.exists:
        raise NotGroupInvertible(report.reason, report=report)
    g = dggi(x.primal, tol)
    d = x.hyper
    proj = x.primal @ g
    left = (proj @ d - d).norm()
    right = (d @ proj - d).norm()
    if not (tol.is_zero(left, x.norm()) and tol.is_zero(right, x.norm())):
        raise HypothesisFailed(
            f"range conditions fail (left {left:.3e}, right {right:.3e})")
    return HyperDualMatrix.from_duals(g, -(g @ d @ g))


def hdmpgi_exists(x, tol=None):
    """Existence of the hyper-dual Moore-Penrose inverse.

    Requires the dual MP inverse of the primal view and a vanishing
    ``(I - A^ A^+) A^_0 (I - A^+ A^)``.
    """
    tol = _tol(tol)
    threshold = tol.rel * (1.0 + x.norm())
    a = x.primal
    ok, _ = dmpgi_exists(a, tol)
    if not ok:
        return ExistenceReport(False, math.inf, (), "mp-projector", threshold,
                               reason="primal part has no dual Moore-Penrose inverse")
    try:
        g = dmpgi(a, tol)
    except FormulaInconsistent:
        return ExistenceReport(False, math.inf, (), "mp-projector", threshold,
                               reason="primal dual Moore-Penrose inverse failed verification")
    left = DualMatrix.identity(x.rows) - a @ g
    right = DualMatrix.identity(x.cols) - g @ a
    res = (left @ x.hyper @ right).norm()
    ok = res <= threshold
    return ExistenceReport(ok, res, (), "mp-projector", threshold,
                           reason=None if ok else "hyper part violates the projector condition")


def hdmpgi_select(x, tol=None):
    """Hyper-dual Moore-Penrose inverse and the formula variant that passed.

    Raises
    ------
    NotMPInvertible
    FormulaInconsistent
    """
    tol = _tol(tol)
    report = hdmpgi_exists(x, tol)
    if not report.exists:
        raise NotMPInvertible(report.reason, report=report)
    a = x.primal
    g = dmpgi(a, tol)
    eye_rows = DualMatrix.identity(x.rows)
    eye_cols = DualMatrix.identity(x.cols)
    for variant, corr in _mp_corrections(a, g, x.hyper, eye_rows, eye_cols):
        cand = HyperDualMatrix.from_duals(g, corr)
        if _axioms_pass(penrose_residuals(x, cand), x.norm(), cand.norm()):
            logger.info("hdmpgi: selected %s formula variant", variant)
            return cand, variant
        logger.debug("hdmpgi: %s formula variant failed the Penrose check", variant)
    raise FormulaInconsistent("no hdmpgi formula variant satisfies the Penrose equations")


def hdmpgi(x, tol=None):
    return hdmpgi_select(x, tol)[0]


@dataclass(frozen=True)
class OrderLawReport:
    kind: str
    hypotheses: dict = field(default_factory=dict)
    forward_residual: float = math.inf
    reverse_residual: float = math.inf
    threshold: float = 0.0

    @property
    def hypotheses_hold(self):
        return all(self.hypotheses.values())

    @property
    def forward_holds(self):
        """``(XY)^g == X^g Y^g``."""
        return self.forward_residual <= self.threshold

    @property
    def reverse_holds(self):
        """``(XY)^g == Y^g X^g``."""
        return self.reverse_residual <= self.threshold

    def lines(self):
        out = [f"kind: {self.kind}"]
        out += [f"hypothesis_{k}: {str(v).lower()}" for k, v in self.hypotheses.items()]
        out += [f"hypotheses_hold: {str(self.hypotheses_hold).lower()}",
                f"forward_residual: {self.forward_residual:.17g}",
                f"reverse_residual: {self.reverse_residual:.17g}",
                f"threshold: {self.threshold:.17g}",
                f"forward_law: {str(self.forward_holds).lower()}",
                f"reverse_law: {str(self.reverse_holds).lower()}"]
        return out


def _inverse_or_missing(fn, m, tol, operand):
    try:
        return fn(m, tol)
    except (NotGroupInvertible, NotMPInvertible, FormulaInconsistent) as exc:
        raise InverseMissing(f"operand {operand} has no inverse: {exc}",
                             operand=operand) from exc


def order_law_check(x, y, kind="group", tol=None):
    """Check the hypotheses and conclusions of the forward/reverse order laws.

    ``kind`` is ``"group"`` (hyper-dual group inverse) or ``"moore_penrose"``
    (alias ``"mp"``).  The hypotheses are evaluated on the dual views
    ``x = A^ + eps* A^_0`` and ``y = C^ + eps* C^_0``.

    Raises
    ------
    InverseMissing
        Naming ``"x"``, ``"y"`` or ``"xy"``.
    """
    tol = _tol(tol)
    if kind in ("mp", "moore_penrose"):
        kind = "moore_penrose"
        inv_hd, inv_dual = hdmpgi, dmpgi
    elif kind == "group":
        inv_hd, inv_dual = hdggi, dggi
    else:
        raise ValueError(f"unknown order-law kind {kind!r}")
    x_inv = _inverse_or_missing(inv_hd, x, tol, "x")
    y_inv = _inverse_or_missing(inv_hd, y, tol, "y")
    xy = x @ y
    xy_inv = _inverse_or_missing(inv_hd, xy, tol, "xy")

    a, a0 = x.primal, x.hyper
    c, c0 = y.primal, y.hyper
    ag, cg = inv_dual(a, tol), inv_dual(c, tol)
    scale = (1.0 + x.norm() + y.norm()) * (1.0 + x_inv.norm() + y_inv.norm())

    def zero(m):
        return m.norm() <= tol.rel * scale

    hyp = {
        "x_range": zero(a @ ag @ a0 - a0) and zero(a0 @ a @ ag - a0),
        "y_range": zero(c @ cg @ c0 - c0) and zero(c0 @ c @ cg - c0),
        "commute": zero(a @ c - c @ a),
    }
    if kind == "moore_penrose":
        hyp["transpose_commute"] = zero(a.T @ c - c @ a.T)
    hyp["y_inverse_commutes_x_hyper"] = zero(cg @ a0 - a0 @ cg)
    hyp["x_inverse_commutes_y_hyper"] = zero(ag @ c0 - c0 @ ag)

    forward = (xy_inv - x_inv @ y_inv).norm()
    reverse = (xy_inv - y_inv @ x_inv).norm()
    threshold = CONCLUSION_RTOL * (1.0 + x_inv.norm() * y_inv.norm())
    return OrderLawReport(kind=kind, hypotheses=hyp, forward_residual=forward,
                          reverse_residual=reverse, threshold=threshold)

