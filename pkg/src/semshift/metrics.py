"""Semantic change metrics over two sets of usage embeddings.

All metrics use the cosine distance d(x, y) = 1 - cos(x, y):

* ``apd``   mean distance over all cross-period usage pairs.
* ``prt``   distance between the two period centroids.
* ``amd``   mean nearest-neighbour distance, averaged over both directions.
* ``samd``  mean matched distance under a one-to-one alignment of equal-size
            samples (greedy by default; exact assignment as a baseline).

Implementation notes. Rows are canonicalized (sorted lexicographically)
before any reduction, so every sampling-free metric is bitwise independent
of input row order. When the two sets are identical after canonicalization,
the nearest-neighbour and matching metrics short-circuit to their
mathematically exact zeros, which plain float arithmetic cannot guarantee.
Accumulation is float64 even though stores hold float32.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._util import row_order
from .errors import DomainError, ValidationError

# cap on scratch entries per block when streaming row minima / means
_BLOCK_ENTRIES = 1 << 22


@dataclass(frozen=True)
class DirectionalAMD:
    """Nearest-neighbour means for both directions between periods."""

    a_to_b: float
    b_to_a: float

    @property
    def symmetric(self) -> float:
        return (self.a_to_b + self.b_to_a) / 2.0


@dataclass(frozen=True)
class Matching:
    """One-to-one pairs of usage indices (into the original input sets)."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        rows = [r for r, _ in self.pairs]
        cols = [c for _, c in self.pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValidationError("matching reuses a row or column index")


def _as_matrix(x) -> np.ndarray:
    m = np.asarray(getattr(x, "vectors", x), dtype=np.float64)
    if m.ndim == 1:
        m = m[None, :]
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValidationError(f"expected an (n, D) matrix, got shape {m.shape}")
    return np.ascontiguousarray(m)


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[1] != b.shape[1]:
        raise ValidationError(
            f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}"
        )


def _unit_rows(m: np.ndarray) -> np.ndarray:
    norms = np.sqrt(np.einsum("ij,ij->i", m, m))
    if np.any(norms == 0.0):
        row = int(np.flatnonzero(norms == 0.0)[0])
        raise DomainError(f"row {row} is a zero vector; cosine distance undefined")
    return m / norms[:, None]


def _canon(m: np.ndarray) -> np.ndarray:
    return m[row_order(m)]


def cosine_distance(x, y) -> float:
    """d(x, y) = 1 - cos(x, y), clamped into [0, 2].

    Written as dot(x, y) / sqrt(dot(x, x) * dot(y, y)) so that bitwise-equal
    inputs give exactly 0.
    """
    xv = np.asarray(x, dtype=np.float64).ravel()
    yv = np.asarray(y, dtype=np.float64).ravel()
    if xv.shape != yv.shape:
        raise ValidationError(f"dimension mismatch: {xv.shape} vs {yv.shape}")
    dxx = float(np.dot(xv, xv))
    dyy = float(np.dot(yv, yv))
    if dxx == 0.0 or dyy == 0.0:
        raise DomainError("cosine distance undefined for the zero vector")
    value = 1.0 - float(np.dot(xv, yv)) / np.sqrt(dxx * dyy)
    return min(max(value, 0.0), 2.0)


def distance_matrix(a, b) -> np.ndarray:
    """Full |A| x |B| matrix of cosine distances, positionally indexed."""
    am = _as_matrix(a)
    bm = _as_matrix(b)
    _check_same_dim(am, bm)
    out = 1.0 - _unit_rows(am) @ _unit_rows(bm).T
    np.clip(out, 0.0, 2.0, out=out)
    return out


def apd(a, b) -> float:
    """Mean cosine distance over all cross-period usage pairs.

    Uses the identity mean_ij(1 - a_i.b_j) = 1 - mean(a).mean(b) over unit
    rows, which avoids materializing the |A| x |B| matrix.
    """
    am = _canon(_as_matrix(a))
    bm = _canon(_as_matrix(b))
    _check_same_dim(am, bm)
    mean_a = _unit_rows(am).mean(axis=0)
    mean_b = _unit_rows(bm).mean(axis=0)
    value = 1.0 - float(np.dot(mean_a, mean_b))
    return min(max(value, 0.0), 2.0)


def prt(a, b) -> float:
    """Cosine distance between the two period centroids.

    Centroids are taken over unit-normalized rows so that the score, like
    every other metric here, is invariant to positive rescaling of any
    individual usage vector.
    """
    am = _canon(_as_matrix(a))
    bm = _canon(_as_matrix(b))
    _check_same_dim(am, bm)
    mu_a = _unit_rows(am).mean(axis=0)
    mu_b = _unit_rows(bm).mean(axis=0)
    if not mu_a.any() or not mu_b.any():
        raise DomainError("period centroid is the zero vector")
    return cosine_distance(mu_a, mu_b)


def _row_min_dists(unit_a: np.ndarray, unit_b: np.ndarray) -> np.ndarray:
    """Per-row minimum cosine distance from rows of A to the set B."""
    n = unit_a.shape[0]
    out = np.empty(n, dtype=np.float64)
    step = max(1, _BLOCK_ENTRIES // unit_b.shape[0])
    for start in range(0, n, step):
        block = 1.0 - unit_a[start : start + step] @ unit_b.T
        np.clip(block, 0.0, 2.0, out=block)
        out[start : start + step] = block.min(axis=1)
    return out


def amd_directional(a, b) -> DirectionalAMD:
    """Mean nearest-neighbour distance in each direction."""
    am = _canon(_as_matrix(a))
    bm = _canon(_as_matrix(b))
    _check_same_dim(am, bm)
    unit_a = _unit_rows(am)
    unit_b = _unit_rows(bm)
    if np.array_equal(am, bm):
        return DirectionalAMD(0.0, 0.0)
    a_to_b = float(_row_min_dists(unit_a, unit_b).mean())
    b_to_a = float(_row_min_dists(unit_b, unit_a).mean())
    return DirectionalAMD(a_to_b=a_to_b, b_to_a=b_to_a)


def amd(a, b) -> float:
    """Symmetric nearest-neighbour metric: mean of the two directions."""
    return amd_directional(a, b).symmetric


def _sample_indices(n_a: int, n_b: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    target = min(n_a, n_b)
    idx_a = np.arange(n_a)
    idx_b = np.arange(n_b)
    if n_a == n_b:
        return idx_a, idx_b
    rng = np.random.default_rng(seed)
    if n_a > n_b:
        idx_a = np.sort(rng.choice(n_a, size=target, replace=False))
    else:
        idx_b = np.sort(rng.choice(n_b, size=target, replace=False))
    return idx_a, idx_b


def subsample_equal(a, b, seed: int):
    """Downsample the larger set (uniform, without replacement) to equal sizes.

    The smaller set passes through unchanged; sampled rows keep their original
    relative order. Deterministic for a fixed seed.
    """
    am = _as_matrix(a)
    bm = _as_matrix(b)
    idx_a, idx_b = _sample_indices(am.shape[0], bm.shape[0], seed)
    return am[idx_a], bm[idx_b]


def _samd(a, b, seed: int, kernel) -> tuple[float, Matching]:
    am = _as_matrix(a)
    bm = _as_matrix(b)
    _check_same_dim(am, bm)
    idx_a, idx_b = _sample_indices(am.shape[0], bm.shape[0], seed)
    sa = am[idx_a]
    sb = bm[idx_b]
    order_a = row_order(sa)
    order_b = row_order(sb)
    ca = sa[order_a]
    cb = sb[order_b]
    unit_a = _unit_rows(ca)
    unit_b = _unit_rows(cb)
    if np.array_equal(ca, cb):
        pairs = tuple(
            (int(idx_a[order_a[k]]), int(idx_b[order_b[k]]))
            for k in range(ca.shape[0])
        )
        return 0.0, Matching(pairs=pairs)
    dist = 1.0 - unit_a @ unit_b.T
    np.clip(dist, 0.0, 2.0, out=dist)
    rows, cols = kernel(dist)
    score = float(np.sum(dist[rows, cols]) / rows.shape[0])
    pairs = tuple(
        (int(idx_a[order_a[r]]), int(idx_b[order_b[c]]))
        for r, c in zip(rows, cols)
    )
    return score, Matching(pairs=pairs)


def samd_greedy(a, b, seed: int = 0) -> tuple[float, Matching]:
    """Mean matched distance under greedy smallest-first one-to-one selection.

    Applies equal-size sampling first; pairs refer to rows of the original
    inputs and are listed in selection order.
    """
    return _samd(a, b, seed, kernels.greedy_match)


def samd_hungarian(a, b, seed: int = 0) -> tuple[float, Matching]:
    """Mean matched distance under the exact minimum-cost assignment.

    Same sampling as :func:`samd_greedy`; serves as its optimal baseline.
    """
    return _samd(a, b, seed, kernels.hungarian)
