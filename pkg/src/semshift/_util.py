"""Small shared helpers: seed derivation, float formatting, row ordering."""
from __future__ import annotations

import hashlib

import numpy as np


def word_seed(master_seed: int, word: str, purpose: str = "") -> int:
    """Derive a per-word seed from a master seed and a stable hash of the word.

    Per-word randomness (dimension subsets, usage sampling) must not depend on
    word iteration order or scheduling, so the derivation uses a keyed digest
    of the word string instead of Python's randomized ``hash``.
    """
    payload = f"{word}\x00{purpose}".encode("utf-8")
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    mixed = int.from_bytes(digest, "little") ^ (master_seed & 0xFFFFFFFFFFFFFFFF)
    # numpy seeds must be non-negative
    return mixed & 0x7FFFFFFFFFFFFFFF


def fmt15(x: float) -> str:
    """Format a float with 15 significant digits (the CSV contract)."""
    return format(float(x), ".15g")


def row_order(matrix: np.ndarray) -> np.ndarray:
    """Indices that sort rows lexicographically (column 0 is most significant).

    Used to canonicalize row order inside the metric kernels so that results
    are bitwise independent of input row order.
    """
    return np.lexsort(matrix.T[::-1])
