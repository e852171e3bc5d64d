# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the per-signal topological transforms.

Mirrors ``_kernels_py`` operation for operation; outputs are bit-identical
because both backends perform the same comparisons and the same float64
expressions in the same order.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef Py_ssize_t _find(Py_ssize_t[::1] parent, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t root = i
    cdef Py_ssize_t nxt
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


def sublevel_pairs(values):
    """See ``topogate._kernels_py.sublevel_pairs``."""
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t[::1] order = np.argsort(np.asarray(v), kind="stable").astype(np.intp)

    parent_arr = np.full(n, -1, dtype=np.intp)
    cdef Py_ssize_t[::1] parent = parent_arr
    cdef Py_ssize_t[::1] rank = np.zeros(n, dtype=np.intp)
    cdef double[::1] birth_val = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t[::1] birth_idx = np.empty(n, dtype=np.intp)

    out_b_arr = np.empty(n, dtype=np.float64)
    out_d_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out_b = out_b_arr
    cdef double[::1] out_d = out_d_arr
    cdef Py_ssize_t count = 0

    cdef Py_ssize_t k, i, nb, ra, rb, elder, younger, step, ei, tmp
    cdef double eb
    cdef double essential = np.inf

    with nogil:
        for k in range(n):
            i = order[k]
            if v[i] < essential:
                essential = v[i]
            parent[i] = i
            birth_val[i] = v[i]
            birth_idx[i] = i
            for step in range(2):
                nb = i - 1 if step == 0 else i + 1
                if nb < 0 or nb >= n or parent[nb] < 0:
                    continue
                ra = _find(parent, i)
                rb = _find(parent, nb)
                if ra == rb:
                    continue
                if birth_val[ra] < birth_val[rb] or (
                    birth_val[ra] == birth_val[rb] and birth_idx[ra] <= birth_idx[rb]
                ):
                    elder = ra
                    younger = rb
                else:
                    elder = rb
                    younger = ra
                if v[i] > birth_val[younger]:
                    out_b[count] = birth_val[younger]
                    out_d[count] = v[i]
                    count += 1
                eb = birth_val[elder]
                ei = birth_idx[elder]
                if rank[ra] < rank[rb]:
                    tmp = ra
                    ra = rb
                    rb = tmp
                parent[rb] = ra
                if rank[ra] == rank[rb]:
                    rank[ra] += 1
                birth_val[ra] = eb
                birth_idx[ra] = ei

    pairs = np.empty((count, 2), dtype=np.float64)
    if count:
        b = out_b_arr[:count]
        d = out_d_arr[:count]
        sort = np.lexsort((d, b))
        pairs[:, 0] = b[sort]
        pairs[:, 1] = d[sort]
    return pairs, float(essential)


def tent_stack(births, deaths, grid, Py_ssize_t levels):
    """See ``topogate._kernels_py.tent_stack``."""
    cdef const double[::1] b = np.ascontiguousarray(births, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(deaths, dtype=np.float64)
    cdef const double[::1] t = np.ascontiguousarray(grid, dtype=np.float64)
    cdef Py_ssize_t np_ = b.shape[0]
    cdef Py_ssize_t m = t.shape[0]

    out_arr = np.zeros((levels, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    if np_ == 0 or levels == 0:
        return out_arr

    top_arr = np.zeros(levels, dtype=np.float64)
    cdef double[::1] top = top_arr

    cdef Py_ssize_t g, p, j, pos
    cdef double tv, a, c

    with nogil:
        for g in range(m):
            for j in range(levels):
                top[j] = 0.0
            for p in range(np_):
                a = t[g] - b[p]
                c = d[p] - t[g]
                tv = a if a < c else c
                if tv < 0.0:
                    tv = 0.0
                if tv > top[levels - 1]:
                    pos = levels - 1
                    while pos > 0 and tv > top[pos - 1]:
                        top[pos] = top[pos - 1]
                        pos -= 1
                    top[pos] = tv
            for j in range(levels):
                out[j, g] = top[j]
    return out_arr
