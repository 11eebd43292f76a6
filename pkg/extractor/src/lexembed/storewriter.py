"""Writers for the embedding-store file formats consumed downstream.

Matrix files: ``EMB1`` magic, u32-le row count, u32-le dimension, row-major
float32-le values. The store root carries ``manifest.json`` with the encoder
name, dimension, language tag, and per-word row counts.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ExtractionError

MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sII")


def write_matrix(path: Path | str, matrix: np.ndarray) -> None:
    m = np.ascontiguousarray(matrix, dtype="<f4")
    if m.ndim != 2 or m.shape[0] < 1:
        raise ExtractionError(f"cannot write matrix of shape {m.shape}")
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, m.shape[0], m.shape[1]))
        f.write(m.tobytes(order="C"))


def write_store(
    root: Path | str,
    encoder_name: str,
    language: str,
    matrices: Mapping[str, tuple[np.ndarray, np.ndarray]],
) -> Path:
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    dims = {m.shape[1] for pair in matrices.values() for m in pair}
    if len(dims) != 1:
        raise ExtractionError(f"inconsistent dimensions: {sorted(dims)}")
    entries = []
    for word in sorted(matrices):
        m1, m2 = matrices[word]
        word_dir = root / word
        word_dir.mkdir(parents=True, exist_ok=True)
        write_matrix(word_dir / "1.emb", m1)
        write_matrix(word_dir / "2.emb", m2)
        entries.append(
            {"word": word, "n1": int(m1.shape[0]), "n2": int(m2.shape[0])}
        )
    manifest = {
        "encoder_name": encoder_name,
        "dimension": int(next(iter(dims))),
        "language": language,
        "words": entries,
    }
    (root / "manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return root


def write_definitions(
    store_root: Path | str, word: str, texts: Sequence[str], matrix: np.ndarray
) -> None:
    if len(texts) != matrix.shape[0]:
        raise ExtractionError(
            f"{word!r}: {len(texts)} texts but {matrix.shape[0]} embedding rows"
        )
    word_dir = Path(store_root) / word
    word_dir.mkdir(parents=True, exist_ok=True)
    (word_dir / "definitions.txt").write_text(
        "\n".join(texts) + "\n", encoding="utf-8"
    )
    write_matrix(word_dir / "definitions.emb", matrix)
