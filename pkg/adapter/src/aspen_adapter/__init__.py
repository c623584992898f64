"""Translator plugin: a fine-tunable seq2seq model behind the wire protocol."""

from .config import AdapterConfig
from .records import DatasetFormatError, TrainPair, read_many, read_pairs
from .wire import (
    ERR_BAD_ID,
    ERR_BAD_NL,
    ERR_NOT_JSON,
    ERR_NOT_OBJECT,
    PROTOCOL_VERSION,
    canonical_line,
    handshake_line,
    parse_request,
    response_line,
)

__all__ = [
    "AdapterConfig",
    "DatasetFormatError",
    "TrainPair",
    "read_many",
    "read_pairs",
    "ERR_BAD_ID",
    "ERR_BAD_NL",
    "ERR_NOT_JSON",
    "ERR_NOT_OBJECT",
    "PROTOCOL_VERSION",
    "canonical_line",
    "handshake_line",
    "parse_request",
    "response_line",
]
