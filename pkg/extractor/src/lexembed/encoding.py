"""Target-span encoding: tokenize, align the character span to subword
tokens, run the encoder, and pool the target token vectors.

Layer policy: "last" or an integer index into the hidden-state stack
(0 is the embedding layer, negative indices count from the top). Pooling
policy: mean (default), first, or max over the target's subword vectors.
Marker policy: "none" pools by character offsets alone; "angle" wraps the
target in ``<t> ... </t>`` for encoders trained with explicit span markers.
Sentences longer than the encoder window are truncated to a window of
content tokens centred on the target span.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import torch

from .errors import ExtractionError

log = logging.getLogger("lexembed")

POOLINGS = ("mean", "first", "max")
MARKERS = ("none", "angle")


@dataclass
class ExtractionConfig:
    model: str
    layer: str | int = "last"
    pooling: str = "mean"
    batch_size: int = 16
    device: str = "cpu"
    marker: str = "none"

    def __post_init__(self):
        if self.pooling not in POOLINGS:
            raise ExtractionError(
                f"pooling must be one of {POOLINGS}, got {self.pooling!r}"
            )
        if self.marker not in MARKERS:
            raise ExtractionError(
                f"marker must be one of {MARKERS}, got {self.marker!r}"
            )
        if self.layer != "last" and not isinstance(self.layer, int):
            raise ExtractionError(
                f"layer must be 'last' or an integer index, got {self.layer!r}"
            )
        if self.batch_size < 1:
            raise ExtractionError("batch size must be >= 1")


def _apply_marker(text: str, start: int, end: int, marker: str):
    if marker == "none":
        return text, start, end
    open_tag, close_tag = "<t> ", " </t>"
    marked = text[:start] + open_tag + text[start:end] + close_tag + text[end:]
    return marked, start + len(open_tag), end + len(open_tag)


class Encoder:
    """A loaded model/tokenizer pair that turns (text, span) into one vector."""

    def __init__(self, config: ExtractionConfig, model=None, tokenizer=None):
        self.config = config
        if model is None or tokenizer is None:
            from transformers import AutoModel, AutoTokenizer

            tokenizer = AutoTokenizer.from_pretrained(config.model)
            model = AutoModel.from_pretrained(config.model)
        self.tokenizer = tokenizer
        self.model = model.to(config.device)
        self.model.eval()
        self.max_len = self._window_limit()

    def _window_limit(self) -> int | None:
        limit = getattr(self.tokenizer, "model_max_length", None)
        positions = getattr(self.model.config, "max_position_embeddings", None)
        candidates = [
            v for v in (limit, positions) if isinstance(v, int) and 0 < v < 10**6
        ]
        return min(candidates) if candidates else None

    @property
    def dimension(self) -> int:
        return int(self.model.config.hidden_size)

    def _prepare(self, text: str, start: int, end: int):
        """Token ids plus the positions of the target's subword tokens."""
        text, start, end = _apply_marker(text, start, end, self.config.marker)
        enc = self.tokenizer(
            text,
            add_special_tokens=True,
            return_offsets_mapping=True,
            return_special_tokens_mask=True,
        )
        ids = enc["input_ids"]
        offsets = enc["offset_mapping"]
        special = enc["special_tokens_mask"]
        target = [
            i
            for i, ((lo, hi), sp) in enumerate(zip(offsets, special))
            if not sp and lo < end and start < hi
        ]
        if not target:
            return None
        if self.max_len is not None and len(ids) > self.max_len:
            prepared = self._truncate(ids, special, target)
            if prepared is None:
                return None
            ids, target = prepared
        return ids, target

    def _truncate(self, ids, special, target):
        """Keep a window of content tokens centred on the target span."""
        content = [i for i in range(len(ids)) if not special[i]]
        prefix = list(range(content[0]))
        suffix = list(range(content[-1] + 1, len(ids)))
        budget = self.max_len - len(prefix) - len(suffix)
        if budget < 1:
            return None
        pos = {tok: k for k, tok in enumerate(content)}
        t_lo, t_hi = pos[target[0]], pos[target[-1]]
        if t_hi - t_lo + 1 >= budget:
            lo = t_lo
        else:
            mid = (t_lo + t_hi + 1) // 2
            lo = max(0, min(mid - budget // 2, len(content) - budget))
        kept = prefix + content[lo : lo + budget] + suffix
        index_of = {old: new for new, old in enumerate(kept)}
        new_target = [index_of[t] for t in target if t in index_of]
        if not new_target:
            return None
        return [ids[i] for i in kept], new_target

    def _hidden(self, outputs) -> torch.Tensor:
        states = outputs.hidden_states
        if self.config.layer == "last":
            return states[-1]
        try:
            return states[self.config.layer]
        except IndexError:
            raise ExtractionError(
                f"layer {self.config.layer} outside the 0..{len(states) - 1} stack"
            ) from None

    def _pool(self, vectors: torch.Tensor) -> torch.Tensor:
        if self.config.pooling == "mean":
            return vectors.mean(dim=0)
        if self.config.pooling == "first":
            return vectors[0]
        return vectors.max(dim=0).values

    def encode_spans(
        self, items: list[tuple[str, int, int]]
    ) -> tuple[np.ndarray, list[int]]:
        """Encode (text, start, end) items; returns (vectors, failed indices).

        The output matrix has one row per successful item, in input order;
        failed indices are items whose span could not be aligned to tokens.
        """
        prepared = []
        failed = []
        for idx, (text, start, end) in enumerate(items):
            result = self._prepare(text, start, end)
            if result is None:
                failed.append(idx)
            else:
                prepared.append((idx, *result))
        rows = []
        pad_id = self.tokenizer.pad_token_id
        if pad_id is None:
            pad_id = 0
        for lo in range(0, len(prepared), self.config.batch_size):
            batch = prepared[lo : lo + self.config.batch_size]
            width = max(len(ids) for _, ids, _ in batch)
            input_ids = torch.full(
                (len(batch), width), pad_id, dtype=torch.long
            )
            mask = torch.zeros((len(batch), width), dtype=torch.long)
            for row, (_, ids, _) in enumerate(batch):
                input_ids[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
                mask[row, : len(ids)] = 1
            with torch.no_grad():
                outputs = self.model(
                    input_ids=input_ids.to(self.config.device),
                    attention_mask=mask.to(self.config.device),
                    output_hidden_states=True,
                )
            hidden = self._hidden(outputs)
            for row, (_, _, target) in enumerate(batch):
                pooled = self._pool(hidden[row, target])
                rows.append(pooled.cpu().to(torch.float32).numpy())
        vectors = (
            np.vstack(rows)
            if rows
            else np.empty((0, self.dimension), dtype=np.float32)
        )
        return vectors, failed
