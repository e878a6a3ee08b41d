"""PPMC text compression with prefix-keyed word dictionaries."""

from ._core import (
    FORMAT_VERSION,
    DecodeError,
    compress,
    decompress,
    gain_pct,
    inspect_header,
    word_length_profile,
)

__all__ = [
    "FORMAT_VERSION",
    "DecodeError",
    "compress",
    "decompress",
    "gain_pct",
    "inspect_header",
    "word_length_profile",
]
