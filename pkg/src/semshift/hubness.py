"""Hubness diagnostics of the cross-period nearest-neighbour assignment.

Three statistics summarize how concentrated nearest-neighbour choices are:
the share of queries landing on the single most popular neighbour, the share
of candidates never chosen, and the average number of queries per chosen
neighbour. Each is computed in both directions and averaged.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import _as_matrix, _check_same_dim, _unit_rows

_BLOCK_ENTRIES = 1 << 22


@dataclass(frozen=True)
class HubnessStats:
    dominant_share: float
    unused_share: float
    avg_load: float


def nn_assignment(a, b) -> np.ndarray:
    """Index into B of each A row's nearest neighbour (ties: smallest index)."""
    am = _as_matrix(a)
    bm = _as_matrix(b)
    _check_same_dim(am, bm)
    unit_a = _unit_rows(am)
    unit_b = _unit_rows(bm)
    n = unit_a.shape[0]
    out = np.empty(n, dtype=np.int64)
    step = max(1, _BLOCK_ENTRIES // unit_b.shape[0])
    for start in range(0, n, step):
        block = 1.0 - unit_a[start : start + step] @ unit_b.T
        out[start : start + step] = block.argmin(axis=1)
    return out


def directional_hubness(a, b) -> tuple[float, float, float]:
    """(dominant share, unused share, average load) for the A -> B direction."""
    assign = nn_assignment(a, b)
    n_a = assign.size
    n_b = _as_matrix(b).shape[0]
    counts = np.bincount(assign, minlength=n_b)
    used = int(np.count_nonzero(counts))
    dominant = float(counts.max()) / n_a
    unused = float(n_b - used) / n_b
    load = float(n_a) / used
    return dominant, unused, load


def hubness_report(a, b) -> HubnessStats:
    """Component-wise mean of the two directional triples."""
    fwd = directional_hubness(a, b)
    rev = directional_hubness(b, a)
    return HubnessStats(
        dominant_share=(fwd[0] + rev[0]) / 2.0,
        unused_share=(fwd[1] + rev[1]) / 2.0,
        avg_load=(fwd[2] + rev[2]) / 2.0,
    )
