# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled matching kernels (native lane).

Same contracts as ``_fallback``: greedy_match walks a stable ascending sort
of all entries (row-major tie order); hungarian solves the exact assignment
problem with the O(n^3) potentials method.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double INF = float("inf")


def greedy_match(dist):
    d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t m = d.shape[1]
    order_arr = np.argsort(d.ravel(), kind="stable")
    cdef cnp.intp_t[::1] order = order_arr
    cdef Py_ssize_t target = n if n < m else m
    rows_arr = np.empty(target, dtype=np.int64)
    cols_arr = np.empty(target, dtype=np.int64)
    cdef cnp.int64_t[::1] rows = rows_arr
    cdef cnp.int64_t[::1] cols = cols_arr
    row_used_arr = np.zeros(n, dtype=np.uint8)
    col_used_arr = np.zeros(m, dtype=np.uint8)
    cdef cnp.uint8_t[::1] row_used = row_used_arr
    cdef cnp.uint8_t[::1] col_used = col_used_arr
    cdef Py_ssize_t taken = 0, i, r, c
    cdef cnp.intp_t flat
    with nogil:
        for i in range(n * m):
            flat = order[i]
            r = flat // m
            c = flat % m
            if row_used[r] or col_used[c]:
                continue
            rows[taken] = r
            cols[taken] = c
            taken += 1
            if taken == target:
                break
            row_used[r] = 1
            col_used[c] = 1
    return rows_arr, cols_arr


def hungarian(cost):
    """Minimum-cost one-to-one assignment; (rows, cols) sorted by row."""
    c_arr = np.ascontiguousarray(cost, dtype=np.float64)
    cdef bint transposed = False
    if c_arr.shape[0] > c_arr.shape[1]:
        c_arr = np.ascontiguousarray(c_arr.T)
        transposed = True
    cdef double[:, ::1] c = c_arr
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t m = c.shape[1]

    u_arr = np.zeros(n + 1, dtype=np.float64)
    v_arr = np.zeros(m + 1, dtype=np.float64)
    p_arr = np.zeros(m + 1, dtype=np.int64)
    way_arr = np.zeros(m + 1, dtype=np.int64)
    minv_arr = np.empty(m + 1, dtype=np.float64)
    used_arr = np.empty(m + 1, dtype=np.uint8)
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef cnp.int64_t[::1] p = p_arr
    cdef cnp.int64_t[::1] way = way_arr
    cdef double[::1] minv = minv_arr
    cdef cnp.uint8_t[::1] used = used_arr

    cdef Py_ssize_t i, j, j0, j1
    cdef cnp.int64_t i0
    cdef double cur, delta
    with nogil:
        for i in range(1, n + 1):
            p[0] = i
            j0 = 0
            for j in range(m + 1):
                minv[j] = INF
                used[j] = 0
            while True:
                used[j0] = 1
                i0 = p[j0]
                delta = INF
                j1 = 0
                for j in range(1, m + 1):
                    if not used[j]:
                        cur = c[i0 - 1, j - 1] - u[i0] - v[j]
                        if cur < minv[j]:
                            minv[j] = cur
                            way[j] = j0
                        if minv[j] < delta:
                            delta = minv[j]
                            j1 = j
                for j in range(m + 1):
                    if used[j]:
                        u[p[j]] += delta
                        v[j] -= delta
                    else:
                        minv[j] -= delta
                j0 = j1
                if p[j0] == 0:
                    break
            while j0 != 0:
                j1 = way[j0]
                p[j0] = p[j1]
                j0 = j1

    pairs = [(int(p_arr[j]) - 1, j - 1) for j in range(1, m + 1) if p_arr[j] != 0]
    rows_arr = np.array([a for a, _ in pairs], dtype=np.int64)
    cols_arr = np.array([b for _, b in pairs], dtype=np.int64)
    if transposed:
        rows_arr, cols_arr = cols_arr, rows_arr
    sort = np.argsort(rows_arr, kind="stable")
    return rows_arr[sort], cols_arr[sort]
