"""Representation spaces: identity, definition projection, per-word PCA,
and random dimension selection, plus the halving schedule for stress runs.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import ConfigError, DomainError, ValidationError
from .metrics import distance_matrix


class SpaceKind(Enum):
    FULL = "FULL"
    DEF = "DEF"
    PCA = "PCA"
    RAND = "RAND"


class RankError(DomainError):
    """Requested more PCA components than the data can support."""

    def __init__(self, requested: int, max_rank: int):
        self.requested = requested
        self.max_rank = max_rank
        super().__init__(
            f"k={requested} exceeds the achievable rank {max_rank}"
        )


@dataclass(frozen=True)
class SpaceConfig:
    kind: SpaceKind
    k: int | None = None  # target dimension; ignored for FULL, per-word for DEF
    seed: int = 0  # RAND only

    def __post_init__(self):
        if self.kind in (SpaceKind.PCA, SpaceKind.RAND):
            if self.k is None or self.k < 1:
                raise ValidationError(f"{self.kind.value} requires k >= 1")


@dataclass(frozen=True)
class ProjectedPair:
    """The two usage matrices after a joint transform."""

    a: np.ndarray
    b: np.ndarray
    space: SpaceConfig


def _require_nonzero_rows(m: np.ndarray, what: str) -> None:
    if np.any(~m.any(axis=1)):
        row = int(np.flatnonzero(~m.any(axis=1))[0])
        raise DomainError(f"{what}: projected row {row} is all-zero")


def project_definition_space(a, b, def_embeddings) -> ProjectedPair:
    """Map each usage vector to its cosine distances from the K definitions.

    Coordinate k of a projected row equals the cosine distance between the
    usage and definition embedding k; the outputs are then treated as ordinary
    K-dimensional embeddings.
    """
    defs = np.asarray(def_embeddings, dtype=np.float64)
    if defs.ndim != 2 or defs.shape[0] < 1:
        raise ValidationError(f"definition matrix has shape {defs.shape}")
    pa = distance_matrix(a, defs)
    pb = distance_matrix(b, defs)
    _require_nonzero_rows(pa, "period 1")
    _require_nonzero_rows(pb, "period 2")
    cfg = SpaceConfig(kind=SpaceKind.DEF, k=defs.shape[0])
    return ProjectedPair(a=pa, b=pb, space=cfg)


def fit_pca(a, b, k: int) -> ProjectedPair:
    """Project both periods onto the top-k principal components.

    The transform is fitted once on the mean-centred vertical stack of both
    periods, so the loadings are shared. Component signs follow the
    convention that each loading's largest-magnitude entry is positive.
    """
    am = np.asarray(a, dtype=np.float64)
    bm = np.asarray(b, dtype=np.float64)
    if am.shape[1] != bm.shape[1]:
        raise ValidationError(
            f"dimension mismatch: {am.shape[1]} vs {bm.shape[1]}"
        )
    stacked = np.vstack([am, bm])
    n = stacked.shape[0]
    if n < 2:
        raise ValidationError("PCA needs at least 2 usage vectors in total")
    centred = stacked - stacked.mean(axis=0)
    _, s, vt = np.linalg.svd(centred, full_matrices=False)
    # rank cutoff: relative to s[0] as usual, but never below the centring
    # noise floor, or near-identical rows would read as rank >= 1
    eps = np.finfo(np.float64).eps
    data_scale = float(np.max(np.abs(stacked), initial=0.0))
    noise_floor = 10.0 * np.sqrt(centred.size) * eps * data_scale
    tol = max(
        max(centred.shape) * eps * (s[0] if s.size else 0.0), noise_floor
    )
    rank = int(np.sum(s > tol))
    if k < 1 or k > rank:
        raise RankError(requested=k, max_rank=rank)
    components = vt[:k].copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    projected = centred @ components.T
    pa = projected[: am.shape[0]]
    pb = projected[am.shape[0] :]
    _require_nonzero_rows(pa, "period 1")
    _require_nonzero_rows(pb, "period 2")
    cfg = SpaceConfig(kind=SpaceKind.PCA, k=k)
    return ProjectedPair(a=pa, b=pb, space=cfg)


def select_random_dims(a, b, k: int, seed: int) -> ProjectedPair:
    """Keep the same uniformly drawn size-k subset of coordinates in both periods.

    Coordinates are returned in ascending index order; the draw is
    deterministic for a fixed seed.
    """
    am = np.asarray(a)
    bm = np.asarray(b)
    d = am.shape[1]
    if bm.shape[1] != d:
        raise ValidationError(f"dimension mismatch: {d} vs {bm.shape[1]}")
    if not 1 <= k <= d:
        raise ValidationError(f"k must be in [1, {d}], got {k}")
    rng = np.random.default_rng(seed)
    dims = np.sort(rng.choice(d, size=k, replace=False))
    pa = np.ascontiguousarray(am[:, dims])
    pb = np.ascontiguousarray(bm[:, dims])
    _require_nonzero_rows(pa, "period 1")
    _require_nonzero_rows(pb, "period 2")
    cfg = SpaceConfig(kind=SpaceKind.RAND, k=k, seed=seed)
    return ProjectedPair(a=pa, b=pb, space=cfg)


def stress_schedule(d: int, floor: int = 4) -> list[int]:
    """Successive integer halvings of d down to (and including) floor."""
    if floor < 1 or d < floor:
        raise ValidationError(f"need d >= floor >= 1, got d={d}, floor={floor}")
    schedule = []
    value = d // 2
    while value >= floor:
        schedule.append(value)
        value //= 2
    return schedule


def apply_space(a, b, config: SpaceConfig, def_embeddings=None) -> ProjectedPair:
    """Dispatch to the transform named by the config; FULL is the identity."""
    if config.kind is SpaceKind.FULL:
        am = np.asarray(a)
        return ProjectedPair(
            a=am, b=np.asarray(b), space=replace(config, k=am.shape[1])
        )
    if config.kind is SpaceKind.DEF:
        if def_embeddings is None:
            raise ConfigError("DEF space requested without a definition set")
        return project_definition_space(a, b, def_embeddings)
    if config.kind is SpaceKind.PCA:
        return fit_pca(a, b, config.k)
    if config.kind is SpaceKind.RAND:
        return select_random_dims(a, b, config.k, config.seed)
    raise ConfigError(f"unknown space kind {config.kind!r}")
