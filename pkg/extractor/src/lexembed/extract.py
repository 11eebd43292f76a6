"""Turn usage records and definition texts into a conforming embedding store."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import numpy as np

from .encoding import Encoder, ExtractionConfig
from .errors import ExtractionError
from .records import UsageRecord
from .storewriter import write_definitions, write_store

log = logging.getLogger("lexembed")


def definition_input(word: str, text: str) -> tuple[str, int, int]:
    """The encoder input for one definition: the exact string ``word: text``
    with the pooled span covering the leading target word."""
    return f"{word}: {text}", 0, len(word)


def encode_usages(
    records: Sequence[UsageRecord],
    config: ExtractionConfig,
    out: Path | str,
    language: str = "unknown",
    encoder: Encoder | None = None,
) -> Path:
    """Encode every record and write the store; returns the store root.

    Records whose target span cannot be aligned to tokens (or that encode to
    a zero vector) are skipped with a logged reason; a word left without
    usable rows in either period is a hard error.
    """
    if not records:
        raise ExtractionError("no usage records to encode")
    encoder = encoder or Encoder(config)
    items = [(r.sentence, r.start, r.end) for r in records]
    vectors, failed = encoder.encode_spans(items)
    failed_set = set(failed)
    for idx in failed:
        r = records[idx]
        log.warning(
            "skipping %r period %d: span [%d, %d) not alignable to tokens",
            r.word, r.period, r.start, r.end,
        )
    grouped: dict[str, dict[int, list[np.ndarray]]] = {}
    row = 0
    for idx, record in enumerate(records):
        if idx in failed_set:
            continue
        vector = vectors[row]
        row += 1
        if not vector.any():
            log.warning(
                "skipping %r period %d: encoded to the zero vector",
                record.word, record.period,
            )
            continue
        grouped.setdefault(record.word, {1: [], 2: []})[record.period].append(
            vector
        )
    matrices = {}
    for word, periods in grouped.items():
        for period in (1, 2):
            if not periods[period]:
                raise ExtractionError(
                    f"word {word!r}: no usable usages for period {period}"
                )
        matrices[word] = (np.vstack(periods[1]), np.vstack(periods[2]))
    return write_store(out, config.model, language, matrices)


def encode_definitions(
    word: str,
    texts: Sequence[str],
    config: ExtractionConfig,
    store_root: Path | str,
    encoder: Encoder | None = None,
) -> np.ndarray:
    """Encode ``word: d_k`` inputs and write the word's definition files.

    Rows align one-to-one with ``texts``; any unalignable definition is a
    hard error since skipping would break the alignment.
    """
    texts = [t for t in (t.strip() for t in texts) if t]
    if not texts:
        raise ExtractionError(f"{word!r}: no definition texts")
    encoder = encoder or Encoder(config)
    items = [definition_input(word, text) for text in texts]
    vectors, failed = encoder.encode_spans(items)
    if failed:
        raise ExtractionError(
            f"{word!r}: definition {failed[0]} could not be aligned to tokens"
        )
    write_definitions(store_root, word, texts, vectors)
    return vectors
