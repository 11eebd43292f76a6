"""Encode marked word usages and definitions into embedding stores."""

from .encoding import Encoder, ExtractionConfig
from .errors import ExtractionError
from .extract import definition_input, encode_definitions, encode_usages
from .records import UsageRecord, read_usage_jsonl

__version__ = "0.1.0"
