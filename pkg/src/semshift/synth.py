"""Controlled synthetic usage-embedding scenarios.

These generators exist to exercise the metric layer end to end: emergence and
disappearance of a usage cluster, stable distributions, graded angular shift,
and hub injection (a few period-1 vectors placed in the period-2 region).
``build_graded_store`` writes a full on-disk store whose gold scores grade the
amount of injected change, with a mixture-reweighting confound that perturbs
centroids without adding new usage clusters.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from ._util import word_seed
from .errors import ValidationError
from .store import write_gold_scores, write_store


class ScenarioKind(Enum):
    STABLE = "STABLE"
    EMERGENCE = "EMERGENCE"
    DISAPPEARANCE = "DISAPPEARANCE"
    SHIFT = "SHIFT"
    HUB_INJECTION = "HUB_INJECTION"


_EXPECTATIONS = {
    ScenarioKind.STABLE: "both directional means stay near the sampling noise floor",
    ScenarioKind.EMERGENCE: "amd_2to1 exceeds amd_1to2",
    ScenarioKind.DISAPPEARANCE: "amd_1to2 exceeds amd_2to1",
    ScenarioKind.SHIFT: "all metrics grow monotonically with the angle",
    ScenarioKind.HUB_INJECTION: (
        "greedy matching degrades less than the nearest-neighbour mean"
    ),
}


@dataclass(frozen=True)
class Scenario:
    kind: ScenarioKind
    d: int = 16
    n1: int = 40
    n2: int = 40
    spread: float = 0.05
    angle: float = np.pi / 2  # SHIFT only
    n_new: int = 12  # secondary-cluster size for EMERGENCE / DISAPPEARANCE
    n_hubs: int = 3  # HUB_INJECTION only
    seed: int = 0

    def __post_init__(self):
        if self.d < 2 or self.n1 < 1 or self.n2 < 1 or self.spread < 0:
            raise ValidationError(f"invalid scenario parameters: {self}")


def gaussian_cluster(center, spread: float, n: int, seed: int) -> np.ndarray:
    """n rows of center + spread * standard normal noise; no zero rows."""
    c = np.asarray(center, dtype=np.float64).ravel()
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if not c.any():
        raise ValidationError("cluster center must be nonzero")
    rng = np.random.default_rng(seed)
    rows = c + spread * rng.standard_normal((n, c.size))
    while True:
        zero = ~rows.any(axis=1)
        if not zero.any():
            break
        rows[zero] = c + spread * rng.standard_normal((int(zero.sum()), c.size))
    return rows


def _directions(d: int, seed: int, count: int) -> np.ndarray:
    """Deterministic orthonormal direction vectors (rows)."""
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((d, count)))
    return q.T.copy()


def make_scenario(s: Scenario) -> tuple[np.ndarray, np.ndarray, str]:
    """Build the two usage matrices plus the qualitative contract they encode."""
    dirs = _directions(s.d, word_seed(s.seed, s.kind.value, "dirs"), 3)
    base, alt = dirs[0], dirs[1]
    seed_a = word_seed(s.seed, s.kind.value, "a")
    seed_b = word_seed(s.seed, s.kind.value, "b")
    seed_c = word_seed(s.seed, s.kind.value, "c")

    if s.kind is ScenarioKind.STABLE:
        a = gaussian_cluster(base, s.spread, s.n1, seed_a)
        b = gaussian_cluster(base, s.spread, s.n2, seed_b)
    elif s.kind is ScenarioKind.EMERGENCE:
        if s.n_new >= s.n2:
            raise ValidationError("n_new must be smaller than n2")
        a = gaussian_cluster(base, s.spread, s.n1, seed_a)
        b = np.vstack(
            [
                gaussian_cluster(base, s.spread, s.n2 - s.n_new, seed_b),
                gaussian_cluster(alt, s.spread, s.n_new, seed_c),
            ]
        )
    elif s.kind is ScenarioKind.DISAPPEARANCE:
        if s.n_new >= s.n1:
            raise ValidationError("n_new must be smaller than n1")
        a = np.vstack(
            [
                gaussian_cluster(base, s.spread, s.n1 - s.n_new, seed_a),
                gaussian_cluster(alt, s.spread, s.n_new, seed_c),
            ]
        )
        b = gaussian_cluster(base, s.spread, s.n2, seed_b)
    elif s.kind is ScenarioKind.SHIFT:
        rotated = np.cos(s.angle) * base + np.sin(s.angle) * alt
        a = gaussian_cluster(base, s.spread, s.n1, seed_a)
        b = gaussian_cluster(rotated, s.spread, s.n2, seed_b)
    elif s.kind is ScenarioKind.HUB_INJECTION:
        if s.n_hubs >= s.n1:
            raise ValidationError("n_hubs must be smaller than n1")
        a = np.vstack(
            [
                gaussian_cluster(base, s.spread, s.n1 - s.n_hubs, seed_a),
                gaussian_cluster(alt, s.spread, s.n_hubs, seed_c),
            ]
        )
        b = gaussian_cluster(alt, s.spread, s.n2, seed_b)
    else:
        raise ValidationError(f"unknown scenario kind {s.kind!r}")
    return a, b, _EXPECTATIONS[s.kind]


def build_graded_store(
    out_dir: Path | str,
    words: int = 16,
    d: int = 64,
    n: int = 60,
    seed: int = 0,
    confound: float = 0.35,
    spread: float = 0.08,
    with_defs: bool = True,
) -> tuple[Path, Path]:
    """Write a store whose words carry graded usage-cluster emergence.

    Word i receives emergent period-2 usages (a fraction proportional to its
    gold score) split between two antipodal directions, so they cancel in the
    period centroid: prototype scores carry no emergence signal. Every word
    additionally gets a random reweighting of its two shared sense clusters
    between periods (a confound that moves centroids without introducing new
    usages). Correspondence metrics see the unmatched emergent usages
    directly; centroid metrics see only the confound.

    Returns (store root, gold scores path).
    """
    if words < 4:
        raise ValidationError("need at least 4 words for a usable store")
    out = Path(out_dir)
    matrices = {}
    definitions = {}
    gold = {}
    # unequal period sizes keep the centred-PCA centroids off the exact
    # antipodal configuration and exercise the equal-size sampling path
    n2_total = n + max(1, n // 5)
    for i in range(words):
        word = f"w{i:03d}"
        g = i / (words - 1)
        frame = _directions(d, word_seed(seed, word, "dirs"), 4)
        # the two shared senses are correlated (cos 0.7), so reweighting
        # between them is cheap for one-to-one matching; the emergent
        # direction stays orthogonal and expensive
        sense_u = frame[0]
        sense_v = 0.7 * frame[0] + np.sqrt(1.0 - 0.7**2) * frame[1]
        emergent, distractor = frame[2], frame[3]
        rng = np.random.default_rng(word_seed(seed, word, "mix"))
        reweight = float(rng.uniform(-confound, confound))

        n_u1 = max(1, round(n * 0.5))
        a = np.vstack(
            [
                gaussian_cluster(sense_u, spread, n_u1, word_seed(seed, word, "a-u")),
                gaussian_cluster(
                    sense_v, spread, n - n_u1, word_seed(seed, word, "a-v")
                ),
            ]
        )

        n_emergent = round(n2_total * 0.4 * g)
        n_base = n2_total - n_emergent
        n_u2 = min(max(1, round(n_base * (0.5 + reweight))), n_base - 1)
        parts = [
            gaussian_cluster(sense_u, spread, n_u2, word_seed(seed, word, "b-u")),
            gaussian_cluster(
                sense_v, spread, n_base - n_u2, word_seed(seed, word, "b-v")
            ),
        ]
        if n_emergent > 0:
            half = n_emergent // 2
            if n_emergent - half > 0:
                parts.append(
                    gaussian_cluster(
                        emergent, spread, n_emergent - half,
                        word_seed(seed, word, "b-e"),
                    )
                )
            if half > 0:
                parts.append(
                    gaussian_cluster(
                        -emergent, spread, half, word_seed(seed, word, "b-e2")
                    )
                )
        b = np.vstack(parts)

        matrices[word] = (a.astype(np.float32), b.astype(np.float32))
        gold[word] = g
        if with_defs:
            texts = (
                f"{word}: established sense one",
                f"{word}: established sense two",
                f"{word}: recent sense",
                f"{word}: rare figurative sense",
            )
            definitions[word] = (
                texts,
                np.vstack([sense_u, sense_v, emergent, distractor]).astype(
                    np.float32
                ),
            )
    write_store(
        out,
        encoder_name="synthetic",
        language="none",
        matrices=matrices,
        definitions=definitions if with_defs else None,
    )
    gold_path = out / "gold.tsv"
    write_gold_scores(gold, gold_path)
    return out, gold_path
