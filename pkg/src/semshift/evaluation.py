"""Rank correlation against gold scores and aggregation across runs."""
from __future__ import annotations

import logging
from dataclasses import dataclass, fields

import numpy as np

from .errors import ValidationError
from .spaces import SpaceKind
from .store import ChangeScoreTable, GoldScores, Metric

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalResult:
    metric: Metric
    space: SpaceKind
    k: int
    seed: int
    rho: float
    n_words: int


@dataclass
class AggregateRow:
    group: dict[str, object]
    mean_rho: float
    std_rho: float
    n_runs: int


def rank_with_ties(xs) -> np.ndarray:
    """Ascending fractional ranks (1-based); ties share their mean rank."""
    values = np.asarray(xs, dtype=np.float64)
    n = values.size
    if n == 0:
        raise ValidationError("cannot rank an empty list")
    order = np.argsort(values, kind="stable")
    ranks = np.empty(n, dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs, ys) -> float:
    """Pearson correlation of the fractional-rank vectors, in [-1, 1]."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape:
        raise ValidationError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 3:
        raise ValidationError(f"need at least 3 points, got {x.size}")
    rx = rank_with_ties(x)
    ry = rank_with_ties(y)
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise ValidationError("correlation undefined for constant input")
    rho = float(np.corrcoef(rx, ry)[0, 1])
    return min(max(rho, -1.0), 1.0)


def evaluate_run(table: ChangeScoreTable, gold: GoldScores) -> EvalResult:
    """Spearman correlation between a score table and gold, on shared words."""
    common = sorted(set(table.rows) & set(gold.entries))
    only_table = sorted(set(table.rows) - set(gold.entries))
    only_gold = sorted(set(gold.entries) - set(table.rows))
    if only_table or only_gold:
        log.warning(
            "word mismatch: %d scored words missing from gold (%s), "
            "%d gold words missing from scores (%s)",
            len(only_table),
            ", ".join(only_table[:8]) or "-",
            len(only_gold),
            ", ".join(only_gold[:8]) or "-",
        )
    if len(common) < 3:
        raise ValidationError(
            f"only {len(common)} words shared between scores and gold; need >= 3"
        )
    rho = spearman(
        [table.rows[w] for w in common], [gold.entries[w] for w in common]
    )
    return EvalResult(
        metric=table.metric,
        space=table.space,
        k=table.k,
        seed=table.seed,
        rho=rho,
        n_words=len(common),
    )


_GROUPABLE = ("metric", "space", "k", "seed")


def aggregate(results, group_by) -> list[AggregateRow]:
    """Mean and population standard deviation of rho per group."""
    results = list(results)
    if not results:
        raise ValidationError("no results to aggregate")
    valid = {f.name for f in fields(EvalResult)}
    for key in group_by:
        if key not in valid or key not in _GROUPABLE:
            raise ValidationError(f"unknown grouping key {key!r}")
    groups: dict[tuple, list[float]] = {}
    for res in results:
        key = tuple(getattr(res, k) for k in group_by)
        groups.setdefault(key, []).append(res.rho)
    rows = []
    for key in sorted(groups, key=lambda k: tuple(str(v) for v in k)):
        rhos = np.asarray(groups[key], dtype=np.float64)
        rows.append(
            AggregateRow(
                group=dict(zip(group_by, key)),
                mean_rho=float(rhos.mean()),
                std_rho=float(rhos.std(ddof=0)),
                n_runs=int(rhos.size),
            )
        )
    return rows
