import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdginv import DualMatrix, HyperDualMatrix, NOrderMatrix, kernels
from hdginv._kernels_py import subset_matmul as numpy_kernel


def reference_product(x, y):
    """Direct subset sum, one pair at a time."""
    k = x.shape[0]
    out = np.zeros((k, x.shape[1], y.shape[2]))
    for s in range(k):
        for t in range(k):
            if t & s == t:
                out[s] += x[t] @ y[s ^ t]
    return out


BACKENDS = sorted(kernels.available_backends())


@pytest.mark.skipif(bool(os.environ.get("HDGINV_PURE_PYTHON")), reason="fallback forced")
def test_compiled_backend_built():
    # The editable install compiles the extension; the fallback is for
    # environments without a compiler.
    assert kernels.BACKEND == "cython"


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("order", [0, 1, 2, 3, 5])
def test_matches_reference(name, order):
    rng = np.random.default_rng(order)
    k = 1 << order
    x = rng.standard_normal((k, 3, 4))
    y = rng.standard_normal((k, 4, 2))
    got = kernels.available_backends()[name](x, y)
    np.testing.assert_allclose(got, reference_product(x, y), rtol=1e-13, atol=1e-13)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), order=st.integers(0, 4),
       n=st.integers(1, 5), m=st.integers(1, 5), p=st.integers(1, 5))
def test_backends_agree(seed, order, n, m, p):
    rng = np.random.default_rng(seed)
    k = 1 << order
    x = rng.standard_normal((k, n, m))
    y = rng.standard_normal((k, m, p))
    x[rng.random(x.shape) < 0.3] = 0.0
    ref = numpy_kernel(x, y)
    # BLAS and the compiled loop sum in different orders; agreement is to rounding.
    for fn in kernels.available_backends().values():
        np.testing.assert_allclose(fn(x, y), ref, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("name", BACKENDS)
def test_lift_is_exact(name, monkeypatch):
    monkeypatch.setattr(kernels, "_compiled", kernels.available_backends().get("cython")
                        if name == "cython" else None)
    rng = np.random.default_rng(11)
    x = DualMatrix(*rng.standard_normal((2, 4, 4)))
    y = DualMatrix(*rng.standard_normal((2, 4, 4)))
    lifted = HyperDualMatrix.lift(x) @ HyperDualMatrix.lift(y)
    assert lifted == HyperDualMatrix.lift(x @ y)


def test_non_contiguous_inputs():
    rng = np.random.default_rng(5)
    x = NOrderMatrix(rng.standard_normal((4, 3, 3)))
    # Transposition yields a non-contiguous view internally.
    np.testing.assert_allclose((x.T @ x).components,
                               reference_product(x.T.components, x.components), atol=1e-13)


def test_pure_python_env_forces_fallback():
    env = dict(os.environ, HDGINV_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import hdginv; print(hdginv.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_large_blocks_dispatch_to_numpy(monkeypatch):
    calls = []
    monkeypatch.setattr(kernels, "_pure", lambda x, y: calls.append(x.shape) or numpy_kernel(x, y))
    n = round(kernels.BLAS_CROSSOVER ** (1 / 3))
    kernels.subset_matmul(np.zeros((2, n, n)), np.zeros((2, n, n)))
    kernels.subset_matmul(np.zeros((2, 4, 4)), np.zeros((2, 4, 4)))
    expected = [(2, n, n)] if kernels.BACKEND == "cython" else [(2, n, n), (2, 4, 4)]
    assert calls == expected
