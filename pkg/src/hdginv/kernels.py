"""Backend selection for the hot product kernel.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``HDGINV_PURE_PYTHON`` is set to a non-empty value, the
numpy implementation is used.  ``BACKEND`` names the active choice.

Even with the extension loaded, products whose blocks are large go to the
numpy kernel: its per-pair BLAS calls beat the compiled triple loop once
``n * m * p`` passes :data:`BLAS_CROSSOVER` (see benchmarks/).  The switch
depends only on block shape, so equal-shape products always share a path.
"""

import os

import numpy as np

from . import _kernels_py

_pure = _kernels_py.subset_matmul

try:
    if os.environ.get("HDGINV_PURE_PYTHON"):
        raise ImportError("pure-python backend forced")
    from ._ckernels import subset_matmul as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"

BLAS_CROSSOVER = 48 ** 3


def subset_matmul(x, y):
    """Subset-convolution product of two component stacks.

    Parameters
    ----------
    x : ndarray, shape (k, n, m)
    y : ndarray, shape (k, m, p)

    Returns
    -------
    ndarray, shape (k, n, p)
    """
    if _compiled is None or x.shape[1] * x.shape[2] * y.shape[2] >= BLAS_CROSSOVER:
        return _pure(x, y)
    return _compiled(np.ascontiguousarray(x, dtype=np.float64),
                     np.ascontiguousarray(y, dtype=np.float64))


def available_backends():
    """Mapping of backend name to kernel for every importable backend."""
    found = {"numpy": _pure}
    if _compiled is not None:
        found["cython"] = _compiled
    return found
