"""Pure NumPy implementations of the per-signal numerical kernels.

This module is the fallback backend behind :mod:`topogate.kernels`; the
compiled backend in ``_kernels_cy`` mirrors these functions operation for
operation, so both produce bit-identical outputs (the algorithms consist of
comparisons plus the same float expressions evaluated in the same order).
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

BACKEND = "python"


def sublevel_pairs(values: NDArray[np.float64]) -> tuple[NDArray[np.float64], float]:
    """Finite birth/death pairs of the sublevel-set filtration of a signal.

    Single pass over the samples in increasing value order (ties broken by
    increasing index).  Each activated sample starts its own component;
    activating a sample adjacent to live components merges them, the
    lexicographically smallest (birth value, birth index) component
    survives (elder rule) and every other component dies at the current
    value.  Zero-persistence pairs are dropped.  The component born at the
    global minimum never dies; its birth value is returned separately.

    Returns
    -------
    pairs:
        Array of shape (P, 2) with death > birth on every row, sorted by
        (birth, death).
    essential_birth:
        The global minimum value.
    """
    v = np.ascontiguousarray(values, dtype=np.float64)
    n = v.size
    order = np.argsort(v, kind="stable")

    parent = np.full(n, -1, dtype=np.intp)
    rank = np.zeros(n, dtype=np.intp)
    birth_val = np.empty(n, dtype=np.float64)
    birth_idx = np.empty(n, dtype=np.intp)

    def find(i: int) -> int:
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, int(parent[i])
        return root

    births: list[float] = []
    deaths: list[float] = []

    for i in map(int, order):
        parent[i] = i
        birth_val[i] = v[i]
        birth_idx[i] = i
        for nb in (i - 1, i + 1):
            if nb < 0 or nb >= n or parent[nb] < 0:
                continue
            ra, rb = find(i), find(nb)
            if ra == rb:
                continue
            if (birth_val[ra], birth_idx[ra]) <= (birth_val[rb], birth_idx[rb]):
                elder, younger = ra, rb
            else:
                elder, younger = rb, ra
            if v[i] > birth_val[younger]:
                births.append(float(birth_val[younger]))
                deaths.append(float(v[i]))
            eb, ei = birth_val[elder], birth_idx[elder]
            if rank[ra] < rank[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            if rank[ra] == rank[rb]:
                rank[ra] += 1
            birth_val[ra] = eb
            birth_idx[ra] = ei

    pairs = np.empty((len(births), 2), dtype=np.float64)
    if births:
        b = np.asarray(births)
        d = np.asarray(deaths)
        sort = np.lexsort((d, b))
        pairs[:, 0] = b[sort]
        pairs[:, 1] = d[sort]
    return pairs, float(v.min())


def tent_stack(
    births: NDArray[np.float64],
    deaths: NDArray[np.float64],
    grid: NDArray[np.float64],
    levels: int,
) -> NDArray[np.float64]:
    """Evaluate the first ``levels`` landscape levels on a grid.

    Each pair (b, d) contributes the tent max(0, min(t - b, d - t)); row k
    (0-based) holds the (k+1)-th largest tent value at each grid point, or
    0 when fewer tents are positive there.

    Returns an array of shape (levels, len(grid)).
    """
    b = np.ascontiguousarray(births, dtype=np.float64)
    d = np.ascontiguousarray(deaths, dtype=np.float64)
    t = np.ascontiguousarray(grid, dtype=np.float64)
    out = np.zeros((levels, t.size), dtype=np.float64)
    if b.size == 0 or levels == 0:
        return out
    vals = np.minimum(t[None, :] - b[:, None], d[:, None] - t[None, :])
    np.maximum(vals, 0.0, out=vals)
    vals.sort(axis=0)
    take = min(levels, b.size)
    out[:take] = vals[::-1][:take]
    return out
