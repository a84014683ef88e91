"""Gregorian calendar tokenization: absolute instants and relative spans.

Absolute encoding decomposes a UTC epoch into year..second fields, one token
per field, down to the chosen resolution. Relative encoding decomposes a gap
in seconds greedily under fixed units (year = 365 days, month = 30 days), so
the inverse is an exact mixed-radix sum. Conversions use plain integer
arithmetic (proleptic Gregorian, 4/100/400 leap rule) rather than the stdlib
so they stay identical across runtimes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, InvalidDateError, TokenError

__all__ = [
    "Resolution",
    "CivilTime",
    "RelSpan",
    "EPOCH_MIN",
    "EPOCH_MAX",
    "civil_from_epoch",
    "epoch_from_civil",
    "encode_abs",
    "decode_abs",
    "encode_rel",
    "decode_rel",
    "rel_span_from_seconds",
    "REL_SECONDS_MAX",
]

SECONDS_PER_DAY = 86400
FIXED_YEAR_S = 365 * SECONDS_PER_DAY
FIXED_MONTH_S = 30 * SECONDS_PER_DAY
# relative year tokens carry two digits, so spans stop short of 100 fixed years
REL_SECONDS_MAX = 100 * FIXED_YEAR_S


class Resolution(Enum):
    DAY = "day"
    HOUR = "hour"
    MINUTE = "minute"
    SECOND = "second"

    @property
    def n_fields(self) -> int:
        return {"day": 3, "hour": 4, "minute": 5, "second": 6}[self.value]


_DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def _is_leap(y: int) -> bool:
    return y % 4 == 0 and (y % 100 != 0 or y % 400 == 0)


def _days_in_month(y: int, m: int) -> int:
    if m == 2 and _is_leap(y):
        return 29
    return _DAYS_IN_MONTH[m - 1]


@dataclass(frozen=True)
class CivilTime:
    """A valid proleptic Gregorian UTC instant at second precision."""

    year: int
    month: int
    day: int
    hour: int = 0
    minute: int = 0
    second: int = 0

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise InvalidDateError(f"month must be in [1, 12], got {self.month}")
        if not 1 <= self.day <= _days_in_month(self.year, self.month):
            raise InvalidDateError(
                f"day {self.day} is invalid for {self.year:04d}-{self.month:02d}"
            )
        if not (0 <= self.hour <= 23 and 0 <= self.minute <= 59 and 0 <= self.second <= 59):
            raise InvalidDateError(
                f"time {self.hour:02d}:{self.minute:02d}:{self.second:02d} out of range"
            )


def _days_from_civil(y: int, m: int, d: int) -> int:
    """Days since 1970-01-01 for a civil date (proleptic Gregorian)."""
    y -= m <= 2
    era = y // 400
    yoe = y - era * 400
    doy = (153 * (m + (-3 if m > 2 else 9)) + 2) // 5 + d - 1
    doe = yoe * 365 + yoe // 4 - yoe // 100 + doy
    return era * 146097 + doe - 719468


def _civil_from_days(z: int) -> tuple[int, int, int]:
    z += 719468
    era = z // 146097
    doe = z - era * 146097
    yoe = (doe - doe // 1460 + doe // 36524 - doe // 146096) // 365
    y = yoe + era * 400
    doy = doe - (365 * yoe + yoe // 4 - yoe // 100)
    mp = (5 * doy + 2) // 153
    d = doy - (153 * mp + 2) // 5 + 1
    m = mp + (3 if mp < 10 else -9)
    return y + (m <= 2), m, d


EPOCH_MIN = _days_from_civil(1900, 1, 1) * SECONDS_PER_DAY
EPOCH_MAX = _days_from_civil(2200, 1, 1) * SECONDS_PER_DAY  # exclusive


def civil_from_epoch(t: int) -> CivilTime:
    """Decompose UTC epoch seconds; supported window is [1900-01-01, 2200-01-01)."""
    t = int(t)
    if not EPOCH_MIN <= t < EPOCH_MAX:
        raise DomainError(f"epoch {t} outside supported range [{EPOCH_MIN}, {EPOCH_MAX})")
    days, sod = divmod(t, SECONDS_PER_DAY)
    y, m, d = _civil_from_days(days)
    hh, rem = divmod(sod, 3600)
    mm, ss = divmod(rem, 60)
    return CivilTime(y, m, d, hh, mm, ss)


def epoch_from_civil(c: CivilTime) -> int:
    """Exact inverse of civil_from_epoch."""
    return (
        _days_from_civil(c.year, c.month, c.day) * SECONDS_PER_DAY
        + c.hour * 3600
        + c.minute * 60
        + c.second
    )


@dataclass(frozen=True)
class RelSpan:
    """Greedy decomposition of a span under fixed units (365 d year, 30 d month)."""

    years: int
    months: int
    days: int
    hours: int
    minutes: int
    seconds: int

    def total_seconds(self) -> int:
        return (
            self.years * FIXED_YEAR_S
            + self.months * FIXED_MONTH_S
            + self.days * SECONDS_PER_DAY
            + self.hours * 3600
            + self.minutes * 60
            + self.seconds
        )


def rel_span_from_seconds(delta_s: float) -> RelSpan:
    if not math.isfinite(delta_s) or delta_s < 0:
        raise DomainError(f"relative span requires a finite value >= 0, got {delta_s!r}")
    if delta_s >= REL_SECONDS_MAX:
        raise DomainError(f"span {delta_s!r} s exceeds the 99-year token ceiling")
    rem = int(delta_s)  # sub-second remainder truncates toward zero
    years, rem = divmod(rem, FIXED_YEAR_S)
    months, rem = divmod(rem, FIXED_MONTH_S)
    days, rem = divmod(rem, SECONDS_PER_DAY)
    hours, rem = divmod(rem, 3600)
    minutes, seconds = divmod(rem, 60)
    return RelSpan(years, months, days, hours, minutes, seconds)


_ABS_FIELD_NAMES = ("year", "month", "day", "hour", "min", "sec")
_TOKEN_RE = re.compile(r"<\|(year|month|day|hour|min|sec)_(\d{2,4})\|>")


def _field_token(name: str, value: int, width: int) -> str:
    return f"<|{name}_{value:0{width}d}|>"


def encode_abs(t: int, r: Resolution) -> list[str]:
    """Absolute tokens `<|year_YYYY|>` `<|month_MM|>` ... down to the resolution."""
    c = civil_from_epoch(t)
    fields = (c.year, c.month, c.day, c.hour, c.minute, c.second)
    out = [_field_token("year", c.year, 4)]
    for name, value in zip(_ABS_FIELD_NAMES[1:], fields[1:]):
        out.append(_field_token(name, value, 2))
    return out[: r.n_fields]


def _parse_fields(tokens, r: Resolution, year_width: int) -> list[int]:
    if len(tokens) != r.n_fields:
        raise TokenError(
            f"{r.value} resolution needs {r.n_fields} tokens, got {len(tokens)}",
            offset=min(len(tokens), r.n_fields),
        )
    values = []
    for i, tok in enumerate(tokens):
        m = _TOKEN_RE.fullmatch(tok)
        if not m or m.group(1) != _ABS_FIELD_NAMES[i]:
            raise TokenError(f"expected a {_ABS_FIELD_NAMES[i]} token, got {tok!r}", offset=i)
        digits = m.group(2)
        want = year_width if i == 0 else 2
        if len(digits) != want:
            raise TokenError(f"{_ABS_FIELD_NAMES[i]} token needs {want} digits, got {tok!r}", offset=i)
        values.append(int(digits))
    return values


def decode_abs(tokens, r: Resolution) -> int:
    """Epoch seconds of the decoded instant; truncated time-of-day fields fill with 0."""
    v = _parse_fields(tokens, r, year_width=4)
    full = list(v) + [0] * (6 - len(v))
    c = CivilTime(full[0], full[1], full[2], full[3], full[4], full[5])
    t = epoch_from_civil(c)
    if not EPOCH_MIN <= t < EPOCH_MAX:
        raise TokenError(f"decoded instant {t} outside supported range")
    return t


def encode_rel(delta_s: float, r: Resolution) -> list[str]:
    """Relative tokens `<|year_NN|>` `<|month_NN|>` ... (fixed units, greedy)."""
    span = rel_span_from_seconds(delta_s)
    fields = (span.years, span.months, span.days, span.hours, span.minutes, span.seconds)
    return [
        _field_token(name, value, 2)
        for name, value in zip(_ABS_FIELD_NAMES[: r.n_fields], fields[: r.n_fields])
    ]


def decode_rel(tokens, r: Resolution) -> int:
    """Mixed-radix sum of the span fields, in whole seconds."""
    v = _parse_fields(tokens, r, year_width=2)
    v = list(v) + [0] * (6 - len(v))
    if v[1] > 12:
        raise TokenError(f"relative month field out of range: {v[1]}")
    return RelSpan(*v).total_seconds()
