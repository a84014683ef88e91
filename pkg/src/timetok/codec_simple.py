"""Fit-free codecs: fixed-precision numeric strings and float32 byte tokens.

The byte codec narrows the value to IEEE-754 single precision (round to
nearest, ties to even) and emits the four bytes least-significant first.
Little-endian order is load-bearing: the golden vectors in the test suite
pin it, so changing it breaks every persisted token stream.
"""

from __future__ import annotations

import math
import re
import struct
from dataclasses import dataclass

from .errors import DomainError, ParseError, TokenError

__all__ = [
    "ByteToken",
    "BYTE_TOKENS",
    "encode_numeric",
    "decode_numeric",
    "encode_bytes",
    "decode_bytes",
    "byte_token_literal",
    "parse_byte_token",
]


@dataclass(frozen=True)
class ByteToken:
    """One byte of a float32, as a vocabulary token `<|byte_NNN|>`."""

    value: int

    def __post_init__(self):
        if not 0 <= self.value <= 255:
            raise TokenError(f"byte value must be in [0, 255], got {self.value}")

    @property
    def literal(self) -> str:
        return f"<|byte_{self.value:03d}|>"


# interned singletons: encode paths return these, never fresh objects
BYTE_TOKENS: tuple[ByteToken, ...] = tuple(ByteToken(i) for i in range(256))

_BYTE_RE = re.compile(r"<\|byte_(\d{3})\|>")
_NUMERIC_RE = re.compile(r"[0-9]+(\.[0-9]+)?")


def byte_token_literal(value: int) -> str:
    return BYTE_TOKENS[value].literal


def parse_byte_token(literal: str) -> ByteToken:
    m = _BYTE_RE.fullmatch(literal)
    if not m:
        raise TokenError(f"not a byte token literal: {literal!r}")
    value = int(m.group(1))
    if value > 255:
        raise TokenError(f"byte token out of range: {literal!r}")
    return BYTE_TOKENS[value]


def encode_numeric(v: float, precision: int = 6) -> str:
    """Fixed-point decimal with exactly `precision` fractional digits.

    Rounding is half-to-even on the exact binary value; no exponent notation,
    no sign (inputs are non-negative).
    """
    v = float(v)
    if not math.isfinite(v) or v < 0:
        raise DomainError(f"encode_numeric requires a finite value >= 0, got {v!r}")
    if not 0 <= precision <= 17:
        raise DomainError(f"precision must be in [0, 17], got {precision}")
    return format(v, f".{precision}f")


def decode_numeric(s: str) -> float:
    """Parse the fixed-point grammar `[0-9]+(.[0-9]+)?` back to a float."""
    m = _NUMERIC_RE.match(s)
    if m is None or m.end() != len(s):
        offset = m.end() if m is not None else 0
        raise ParseError(f"not a fixed-point number: {s!r}", offset=offset)
    return float(s)


def encode_bytes(v: float) -> tuple[ByteToken, ByteToken, ByteToken, ByteToken]:
    """The 4 little-endian bytes of the single-precision representation of v."""
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"encode_bytes requires a finite value, got {v!r}")
    try:
        packed = struct.pack("<f", v)
    except OverflowError:
        raise DomainError(f"value {v!r} overflows single precision") from None
    if not math.isfinite(struct.unpack("<f", packed)[0]):
        raise DomainError(f"value {v!r} overflows single precision")
    return (BYTE_TOKENS[packed[0]], BYTE_TOKENS[packed[1]], BYTE_TOKENS[packed[2]], BYTE_TOKENS[packed[3]])


def decode_bytes(tokens) -> float:
    """Exact inverse of encode_bytes over every finite single-precision value."""
    if len(tokens) != 4:
        raise TokenError(f"byte decode needs exactly 4 tokens, got {len(tokens)}")
    bs = bytes(t.value if isinstance(t, ByteToken) else parse_byte_token(t).value for t in tokens)
    out = struct.unpack("<f", bs)[0]
    if not math.isfinite(out):
        raise TokenError(f"byte tokens decode outside the finite range: {[t for t in tokens]!r}")
    return out
