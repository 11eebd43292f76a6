"""Loading and writing of embedding stores, definition sets, gold scores,
and per-word score tables.

On-disk layout of a store::

    <root>/manifest.json          encoder name, dimension, language, word list
    <root>/<word>/1.emb           period-1 usage matrix (binary, see below)
    <root>/<word>/2.emb           period-2 usage matrix
    <root>/<word>/definitions.txt one definition per line (optional)
    <root>/<word>/definitions.emb definition embedding matrix (optional)

The ``.emb`` format is ``EMB1`` magic, u32-le row count, u32-le dimension,
then row-major float32-le values. It round-trips bit-exactly.
"""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import FormatError, ValidationError
from ._util import fmt15
from .spaces import SpaceKind

MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sII")


class Metric(Enum):
    APD = "APD"
    PRT = "PRT"
    AMD = "AMD"
    AMD_1to2 = "AMD_1to2"
    AMD_2to1 = "AMD_2to1"
    SAMD = "SAMD"


# ---------------------------------------------------------------------------
# binary matrix files


def write_matrix(path: Path | str, matrix: np.ndarray) -> None:
    """Write a 2-D float array as an ``.emb`` file (float32, little-endian)."""
    m = np.ascontiguousarray(matrix, dtype="<f4")
    if m.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got shape {m.shape}")
    n, d = m.shape
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, n, d))
        f.write(m.tobytes(order="C"))


def read_matrix(path: Path | str) -> np.ndarray:
    """Read an ``.emb`` file back into an (n, D) float32 array."""
    with open(path, "rb") as f:
        header = f.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise FormatError(f"{path}: truncated header")
        magic, n, d = _HEADER.unpack(header)
        if magic != MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        data = np.fromfile(f, dtype="<f4", count=n * d)
    if data.size != n * d:
        raise FormatError(f"{path}: expected {n * d} values, found {data.size}")
    return data.reshape(n, d)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class WordEntry:
    word: str
    n1: int
    n2: int


@dataclass(frozen=True)
class StoreManifest:
    encoder_name: str
    dimension: int
    language: str
    words: tuple[WordEntry, ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dimension}")
        seen = set()
        for entry in self.words:
            if entry.word in seen:
                raise ValidationError(f"duplicate word in manifest: {entry.word!r}")
            seen.add(entry.word)
            if entry.n1 < 1 or entry.n2 < 1:
                raise ValidationError(
                    f"row counts must be >= 1 for word {entry.word!r} "
                    f"(n1={entry.n1}, n2={entry.n2})"
                )


@dataclass(frozen=True)
class UsageEmbeddingSet:
    """All usage vectors of one word in one period."""

    word: str
    period: int
    vectors: np.ndarray

    def __post_init__(self):
        if self.period not in (1, 2):
            raise ValidationError(f"period must be 1 or 2, got {self.period}")
        v = self.vectors
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValidationError(
                f"{self.word!r} period {self.period}: matrix shape {v.shape} invalid"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError(
                f"{self.word!r} period {self.period}: non-finite values"
            )
        if np.any(~v.any(axis=1)):
            row = int(np.flatnonzero(~v.any(axis=1))[0])
            raise ValidationError(
                f"{self.word!r} period {self.period}: row {row} is all-zero "
                "(cosine distance undefined)"
            )


@dataclass(frozen=True)
class DefinitionSet:
    """Definition texts of one word and their embeddings, aligned by index."""

    word: str
    texts: tuple[str, ...]
    embeddings: np.ndarray

    def __post_init__(self):
        k = len(self.texts)
        if k < 1:
            raise ValidationError(f"{self.word!r}: K must be >= 1")
        if self.embeddings.ndim != 2 or self.embeddings.shape[0] != k:
            raise ValidationError(
                f"{self.word!r}: {k} definition texts but embedding matrix has "
                f"shape {self.embeddings.shape}"
            )
        if np.any(~self.embeddings.any(axis=1)):
            raise ValidationError(f"{self.word!r}: all-zero definition embedding")

    @property
    def k(self) -> int:
        return len(self.texts)


@dataclass(frozen=True)
class GoldScores:
    entries: Mapping[str, float]

    def __post_init__(self):
        for word, score in self.entries.items():
            if not math.isfinite(score):
                raise ValidationError(f"gold score for {word!r} is not finite")


@dataclass
class ChangeScoreTable:
    """Per-word change scores of a single (metric, space, k, seed) run.

    ``repetitions`` is run metadata that the CSV schema cannot carry, so it is
    excluded from equality and round-trips as its default.
    """

    metric: Metric
    space: SpaceKind
    k: int
    seed: int
    rows: dict[str, float]
    repetitions: int = field(default=1, compare=False)


class EmbeddingStore:
    """A validated on-disk store.

    Manifest invariants are checked eagerly; matrices are read and validated
    lazily, per word, on first access.
    """

    def __init__(self, root: Path | str, manifest: StoreManifest):
        self.root = Path(root)
        self.manifest = manifest
        self._entries = {e.word: e for e in manifest.words}

    @property
    def words(self) -> list[str]:
        return [e.word for e in self.manifest.words]

    @property
    def dimension(self) -> int:
        return self.manifest.dimension

    def usages(self, word: str, period: int) -> UsageEmbeddingSet:
        if word not in self._entries:
            raise ValidationError(f"word {word!r} not in store manifest")
        if period not in (1, 2):
            raise ValidationError(f"period must be 1 or 2, got {period}")
        matrix = read_matrix(self.root / word / f"{period}.emb")
        entry = self._entries[word]
        expected_rows = entry.n1 if period == 1 else entry.n2
        if matrix.shape[0] != expected_rows:
            raise ValidationError(
                f"{word!r} period {period}: manifest says {expected_rows} rows, "
                f"file has {matrix.shape[0]}"
            )
        if matrix.shape[1] != self.manifest.dimension:
            raise ValidationError(
                f"{word!r} period {period}: dimension {matrix.shape[1]} does not "
                f"match manifest dimension {self.manifest.dimension}"
            )
        return UsageEmbeddingSet(word=word, period=period, vectors=matrix)

    def pair(self, word: str) -> tuple[UsageEmbeddingSet, UsageEmbeddingSet]:
        return self.usages(word, 1), self.usages(word, 2)

    def has_definitions(self, word: str) -> bool:
        return (self.root / word / "definitions.txt").is_file() and (
            self.root / word / "definitions.emb"
        ).is_file()

    def definitions(self, word: str) -> DefinitionSet:
        return load_definition_set(self.root, word, expected_dim=self.dimension)


# ---------------------------------------------------------------------------
# loaders


def load_embedding_store(path: Path | str) -> EmbeddingStore:
    """Load and validate a store rooted at ``path``.

    The manifest is parsed and checked eagerly, including the presence of both
    period files per word; matrix contents are validated lazily per word.
    """
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise FormatError(f"no manifest.json under {root}")
    try:
        raw = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{manifest_path}: invalid JSON ({exc})") from exc
    try:
        words = tuple(
            WordEntry(word=str(w["word"]), n1=int(w["n1"]), n2=int(w["n2"]))
            for w in raw["words"]
        )
        manifest = StoreManifest(
            encoder_name=str(raw["encoder_name"]),
            dimension=int(raw["dimension"]),
            language=str(raw["language"]),
            words=words,
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{manifest_path}: missing or malformed key ({exc})") from exc
    for entry in manifest.words:
        for period in (1, 2):
            if not (root / entry.word / f"{period}.emb").is_file():
                raise ValidationError(
                    f"word {entry.word!r}: missing period {period} matrix"
                )
    return EmbeddingStore(root, manifest)


def load_definition_set(
    path: Path | str, word: str, expected_dim: int | None = None
) -> DefinitionSet:
    """Load ``<path>/<word>/definitions.{txt,emb}`` as an aligned set."""
    base = Path(path) / word
    txt_path = base / "definitions.txt"
    emb_path = base / "definitions.emb"
    if not txt_path.is_file():
        raise FormatError(f"{txt_path} not found")
    if not emb_path.is_file():
        raise FormatError(f"{emb_path} not found")
    texts = [
        line.rstrip("\n")
        for line in txt_path.read_text(encoding="utf-8").splitlines()
    ]
    texts = [t for t in texts if t.strip()]
    if not texts:
        raise ValidationError(f"{word!r}: K must be >= 1 (empty definitions file)")
    matrix = read_matrix(emb_path)
    if matrix.shape[0] != len(texts):
        raise ValidationError(
            f"{word!r}: {len(texts)} definition lines but {matrix.shape[0]} "
            "embedding rows"
        )
    if expected_dim is not None and matrix.shape[1] != expected_dim:
        raise ValidationError(
            f"{word!r}: definition dimension {matrix.shape[1]} does not match "
            f"store dimension {expected_dim}"
        )
    return DefinitionSet(word=word, texts=tuple(texts), embeddings=matrix)


def load_gold_scores(path: Path | str) -> GoldScores:
    """Parse a two-column TSV of word and graded change score."""
    entries: dict[str, float] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(
                    f"{path}:{lineno}: expected 'word<TAB>score', got {line!r}"
                )
            word, raw_score = parts
            if word in entries:
                raise ValidationError(f"{path}:{lineno}: duplicate word {word!r}")
            try:
                score = float(raw_score)
            except ValueError:
                score = math.nan
            if not math.isfinite(score):
                raise ValidationError(
                    f"{path}:{lineno}: non-numeric score {raw_score!r}"
                )
            entries[word] = score
    return GoldScores(entries=entries)


# ---------------------------------------------------------------------------
# result tables

RESULTS_HEADER = "word,metric,space,k,seed,score"


def write_results(table: ChangeScoreTable, path: Path | str) -> None:
    """Write a score table as CSV, rows sorted by word, 15 significant digits."""
    lines = [RESULTS_HEADER]
    for word in sorted(table.rows):
        lines.append(
            f"{word},{table.metric.value},{table.space.value},"
            f"{table.k},{table.seed},{fmt15(table.rows[word])}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_results(path: Path | str) -> ChangeScoreTable:
    """Parse a CSV written by :func:`write_results`."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != RESULTS_HEADER:
        raise FormatError(f"{path}: expected header {RESULTS_HEADER!r}")
    metric = space = k = seed = None
    rows: dict[str, float] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 6:
            raise FormatError(f"{path}:{lineno}: expected 6 fields")
        word, m, s, kk, sd, score = parts
        if word in rows:
            raise ValidationError(f"{path}:{lineno}: duplicate word {word!r}")
        try:
            run = (Metric(m), SpaceKind(s), int(kk), int(sd))
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from exc
        if metric is None:
            metric, space, k, seed = run
        elif run != (metric, space, k, seed):
            raise ValidationError(
                f"{path}:{lineno}: mixed run configurations in one table"
            )
        rows[word] = float(score)
    if metric is None:
        raise ValidationError(f"{path}: empty table (header only, config unknown)")
    return ChangeScoreTable(metric=metric, space=space, k=k, seed=seed, rows=rows)


# ---------------------------------------------------------------------------
# store writer (used by the synth generator and round-trip tests)


def write_store(
    root: Path | str,
    encoder_name: str,
    language: str,
    matrices: Mapping[str, tuple[np.ndarray, np.ndarray]],
    definitions: Mapping[str, tuple[Sequence[str], np.ndarray]] | None = None,
) -> None:
    """Serialize matrices (and optional definition sets) as a conforming store."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    dims = {m.shape[1] for pair in matrices.values() for m in pair}
    if len(dims) != 1:
        raise ValidationError(f"matrices disagree on dimension: {sorted(dims)}")
    (dimension,) = dims
    entries = []
    for word, (m1, m2) in matrices.items():
        word_dir = root / word
        word_dir.mkdir(parents=True, exist_ok=True)
        write_matrix(word_dir / "1.emb", m1)
        write_matrix(word_dir / "2.emb", m2)
        entries.append({"word": word, "n1": int(m1.shape[0]), "n2": int(m2.shape[0])})
        if definitions and word in definitions:
            texts, emb = definitions[word]
            (word_dir / "definitions.txt").write_text(
                "\n".join(texts) + "\n", encoding="utf-8"
            )
            write_matrix(word_dir / "definitions.emb", emb)
    manifest = {
        "encoder_name": encoder_name,
        "dimension": int(dimension),
        "language": language,
        "words": entries,
    }
    (root / "manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def write_gold_scores(entries: Mapping[str, float], path: Path | str) -> None:
    lines = [f"{word}\t{fmt15(score)}" for word, score in sorted(entries.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
