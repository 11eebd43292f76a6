"""Pure numpy/scipy matching kernels (fallback lane)."""
from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment


def greedy_match(dist: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Repeatedly take the smallest remaining entry, removing its row and column.

    Equivalent to scanning one stable ascending sort of all entries and keeping
    each entry whose row and column are still free, so ties resolve in
    row-major order. Returns (rows, cols) in selection order, with
    min(n, m) pairs.
    """
    d = np.ascontiguousarray(dist, dtype=np.float64)
    n, m = d.shape
    order = np.argsort(d.ravel(), kind="stable")
    row_used = np.zeros(n, dtype=bool)
    col_used = np.zeros(m, dtype=bool)
    target = min(n, m)
    rows = np.empty(target, dtype=np.int64)
    cols = np.empty(target, dtype=np.int64)
    taken = 0
    for flat in order:
        r = flat // m
        c = flat % m
        if row_used[r] or col_used[c]:
            continue
        rows[taken] = r
        cols[taken] = c
        taken += 1
        if taken == target:
            break
        row_used[r] = True
        col_used[c] = True
    return rows, cols


def hungarian(cost: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Minimum-cost one-to-one assignment; (rows, cols) sorted by row."""
    c = np.asarray(cost, dtype=np.float64)
    rows, cols = linear_sum_assignment(c)
    return rows.astype(np.int64), cols.astype(np.int64)
