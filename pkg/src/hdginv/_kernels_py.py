"""Pure numpy implementation of the subset-convolution matrix product."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def subset_pairs(k):
    """Index triples ``(s, t, s ^ t)`` for every ``t`` a subset of ``s < k``.

    Subsets are enumerated in descending order for each ``s``; the compiled
    kernel uses the same order so both backends sum terms identically.
    """
    ss, ts, us = [], [], []
    for s in range(k):
        t = s
        while True:
            ss.append(s)
            ts.append(t)
            us.append(s ^ t)
            if t == 0:
                break
            t = (t - 1) & s
    return (np.array(ss, dtype=np.intp), np.array(ts, dtype=np.intp),
            np.array(us, dtype=np.intp))


def subset_matmul(x, y):
    """Return ``out[s] = sum(x[t] @ y[s ^ t] for t subset of s)``.

    ``x`` has shape ``(k, n, m)`` and ``y`` shape ``(k, m, p)`` with ``k`` a
    power of two.
    """
    k = x.shape[0]
    ss, ts, us = subset_pairs(k)
    prods = np.matmul(x[ts], y[us])
    out = np.zeros((k, x.shape[1], y.shape[2]))
    np.add.at(out, ss, prods)
    return out
