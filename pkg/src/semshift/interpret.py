"""Interpretability reports: directional asymmetry ranking and the linear
discriminant over definition dimensions.

A large 1->2 nearest-neighbour mean flags early usages with no close modern
counterpart (narrowing or disappearance); a large 2->1 mean flags modern
usages with no close historical counterpart (broadening or innovation). The
discriminant direction in definition space names which definitions separate
the two periods.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DomainError, ValidationError
from .metrics import amd_directional
from .spaces import SpaceConfig, apply_space
from .store import DefinitionSet, EmbeddingStore


class ChangeDirection(Enum):
    NARROWING = "NARROWING"
    BROADENING = "BROADENING"
    BALANCED = "BALANCED"


@dataclass(frozen=True)
class AsymmetryRecord:
    word: str
    amd_1to2: float
    amd_2to1: float
    asymmetry: float
    direction: ChangeDirection


@dataclass(frozen=True)
class LdaDirection:
    """Discriminant weights over definition dimensions.

    Positive weights associate with period 2 (the later corpus), negative
    with period 1.
    """

    weights: np.ndarray


def classify_direction(
    amd_1to2: float, amd_2to1: float, balance_eps: float = 0.0
) -> ChangeDirection:
    diff = amd_1to2 - amd_2to1
    if diff > balance_eps:
        return ChangeDirection.NARROWING
    if diff < -balance_eps:
        return ChangeDirection.BROADENING
    return ChangeDirection.BALANCED


def asymmetry_record(
    word: str, a, b, balance_eps: float = 0.0
) -> AsymmetryRecord:
    direction = amd_directional(a, b)
    return AsymmetryRecord(
        word=word,
        amd_1to2=direction.a_to_b,
        amd_2to1=direction.b_to_a,
        asymmetry=abs(direction.a_to_b - direction.b_to_a),
        direction=classify_direction(
            direction.a_to_b, direction.b_to_a, balance_eps
        ),
    )


def asymmetry_ranking(
    store: EmbeddingStore,
    space: SpaceConfig,
    defs_loader: Callable[[str], DefinitionSet] | None = None,
    balance_eps: float = 0.0,
) -> list[AsymmetryRecord]:
    """Per-word directional records, sorted by descending asymmetry.

    ``defs_loader`` supplies each word's definition set when the space is DEF.
    """
    records = []
    for word in store.words:
        a, b = store.pair(word)
        defs = defs_loader(word) if defs_loader is not None else None
        pair = apply_space(
            a.vectors,
            b.vectors,
            space,
            def_embeddings=None if defs is None else defs.embeddings,
        )
        records.append(asymmetry_record(word, pair.a, pair.b, balance_eps))
    records.sort(key=lambda r: (-r.asymmetry, r.word))
    return records


def lda_direction(a_def, b_def, ridge: float | None = None) -> LdaDirection:
    """Two-class Fisher discriminant of period 1 vs period 2 usages.

    Solves (S_w + lambda I) w = mu2 - mu1 with the within-class scatter S_w.
    The default ridge is 1e-3 * trace(S_w) / K, since the definition dimension
    K can approach or exceed the per-period sample counts. The sign is fixed
    so that w . mu2 >= w . mu1.
    """
    am = np.asarray(a_def, dtype=np.float64)
    bm = np.asarray(b_def, dtype=np.float64)
    if am.ndim != 2 or bm.ndim != 2 or am.shape[1] != bm.shape[1]:
        raise ValidationError(
            f"expected two (n, K) matrices with equal K, got {am.shape} and {bm.shape}"
        )
    k = am.shape[1]
    if k == 0:
        raise ValidationError("K must be >= 1")
    if am.shape[0] < 2 or bm.shape[0] < 2:
        raise ValidationError("each period needs at least 2 usages for LDA")
    mu1 = am.mean(axis=0)
    mu2 = bm.mean(axis=0)
    delta = mu2 - mu1
    if not delta.any():
        raise DomainError("identical class means: no discriminant direction")
    ca = am - mu1
    cb = bm - mu2
    scatter = ca.T @ ca + cb.T @ cb
    lam = 1e-3 * float(np.trace(scatter)) / k if ridge is None else float(ridge)
    if lam == 0.0 and np.linalg.matrix_rank(scatter) < k:
        raise DomainError(
            "within-class scatter is singular; use a positive ridge"
        )
    weights = np.linalg.solve(scatter + lam * np.eye(k), delta)
    if float(weights @ delta) < 0.0:
        weights = -weights
    norm = float(np.linalg.norm(weights))
    if norm == 0.0:
        raise DomainError("discriminant collapsed to the zero vector")
    return LdaDirection(weights=weights / norm)


def top_discriminative_definitions(
    direction: LdaDirection, defs: DefinitionSet, m: int
) -> tuple[list[tuple[str, float]], list[tuple[str, float]]]:
    """The m most period-1 and most period-2 associated definitions.

    Returns (earlier, later); each entry is (definition text, weight).
    Zero-weight definitions are never selected.
    """
    w = direction.weights
    if len(w) != defs.k:
        raise ValidationError(
            f"direction has {len(w)} weights but the set has {defs.k} definitions"
        )
    if not 1 <= m <= defs.k:
        raise ValidationError(f"m must be in [1, {defs.k}], got {m}")
    if not w.any():
        raise DomainError("all discriminant weights are zero")
    order = np.argsort(w, kind="stable")
    earlier = [
        (defs.texts[i], float(w[i])) for i in order[:m] if w[i] < 0.0
    ]
    later = [
        (defs.texts[i], float(w[i])) for i in order[::-1][:m] if w[i] > 0.0
    ]
    return earlier, later
