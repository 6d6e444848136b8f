"""Storage and arithmetic shared by the dual, hyper-dual and n-order types.

A matrix over an algebra with ``k`` nilpotent commuting units is held as a
read-only ``(2**k, rows, cols)`` array.  Component ``s`` multiplies the
product of the units whose bits are set in ``s``.
"""

import numpy as np

from .errors import OrderMismatch, ShapeMismatch
from .kernels import subset_matmul


def _freeze(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


class StackedMatrix:
    """Immutable matrix over a nilpotent algebra; subclasses fix the order."""

    __slots__ = ("_c",)

    def __init__(self, components):
        comps = _freeze(components)
        if comps.ndim != 3 or comps.shape[1] < 1 or comps.shape[2] < 1:
            raise ShapeMismatch(f"bad component stack shape {comps.shape}")
        k = comps.shape[0]
        if k < 1 or k & (k - 1):
            raise OrderMismatch(f"component count {k} is not a power of two")
        if not np.all(np.isfinite(comps)):
            raise ValueError("matrix entries must be finite")
        self._c = comps

    @classmethod
    def _wrap(cls, comps):
        obj = cls.__new__(cls)
        obj._c = _freeze(comps)
        return obj

    @property
    def components(self):
        return self._c

    @property
    def order(self):
        return self._c.shape[0].bit_length() - 1

    @property
    def shape(self):
        return self._c.shape[1:]

    @property
    def rows(self):
        return self._c.shape[1]

    @property
    def cols(self):
        return self._c.shape[2]

    def _check_peer(self, other):
        if type(other) is not type(self):
            if not isinstance(other, StackedMatrix):
                return NotImplemented
            if other.order != self.order:
                raise OrderMismatch(f"orders {self.order} and {other.order} differ")
        return None

    def __add__(self, other):
        if self._check_peer(other) is NotImplemented:
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeMismatch(f"cannot add shapes {self.shape} and {other.shape}")
        return self._wrap(self._c + other._c)

    def __sub__(self, other):
        if self._check_peer(other) is NotImplemented:
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeMismatch(f"cannot subtract shapes {self.shape} and {other.shape}")
        return self._wrap(self._c - other._c)

    def __neg__(self):
        return self._wrap(-self._c)

    def __mul__(self, scalar):
        if isinstance(scalar, StackedMatrix):
            return NotImplemented
        return self._wrap(self._c * float(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self._check_peer(other) is NotImplemented:
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply shapes {self.shape} and {other.shape}")
        return self._wrap(subset_matmul(self._c, other._c))

    @property
    def T(self):
        """Componentwise transpose."""
        return self._wrap(self._c.transpose(0, 2, 1))

    def norm(self):
        """Largest Frobenius norm over the components."""
        return float(np.max(np.linalg.norm(self._c, axis=(1, 2))))

    def identity_like(self):
        if self.rows != self.cols:
            raise ShapeMismatch(f"no identity for non-square shape {self.shape}")
        comps = np.zeros_like(self._c)
        comps[0] = np.eye(self.rows)
        return self._wrap(comps)

    def allclose(self, other, atol=1e-10):
        return self.shape == other.shape and bool(
            np.allclose(self._c, other._c, rtol=0.0, atol=atol))

    def max_abs_diff(self, other):
        return float(np.max(np.abs(self._c - other._c)))

    def __eq__(self, other):
        if not isinstance(other, StackedMatrix):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.array_equal(self._c, other._c))

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order}, shape={self.shape})"


def group_residuals(a, x):
    """Norms of ``AXA - A``, ``XAX - X`` and ``AX - XA``."""
    ax = a @ x
    xa = x @ a
    return ((ax @ a - a).norm(), (xa @ x - x).norm(), (ax - xa).norm())


def penrose_residuals(a, x):
    """Norms of ``AXA - A``, ``XAX - X``, ``(AX)^T - AX`` and ``(XA)^T - XA``."""
    ax = a @ x
    xa = x @ a
    return ((ax @ a - a).norm(), (xa @ x - x).norm(),
            (ax.T - ax).norm(), (xa.T - xa).norm())
