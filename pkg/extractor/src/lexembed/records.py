"""Usage records: one sentence with a marked target span, per occurrence."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ExtractionError


@dataclass(frozen=True)
class UsageRecord:
    word: str
    period: int
    sentence: str
    start: int
    end: int

    def __post_init__(self):
        if self.period not in (1, 2):
            raise ExtractionError(f"period must be 1 or 2, got {self.period}")
        if not (0 <= self.start < self.end <= len(self.sentence)):
            raise ExtractionError(
                f"span [{self.start}, {self.end}) outside sentence of length "
                f"{len(self.sentence)}"
            )

    @property
    def surface(self) -> str:
        return self.sentence[self.start : self.end]


def read_usage_jsonl(path: Path | str) -> list[UsageRecord]:
    """One JSON object per line with keys word, period, sentence, start, end."""
    records = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                records.append(
                    UsageRecord(
                        word=str(raw["word"]),
                        period=int(raw["period"]),
                        sentence=str(raw["sentence"]),
                        start=int(raw["start"]),
                        end=int(raw["end"]),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ExtractionError(f"{path}:{lineno}: {exc}") from exc
    return records
