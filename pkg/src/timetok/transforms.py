"""Scale transforms, min/max fitting, and histograms for interval distributions.

The log transform is implemented with a fixed sequence of IEEE-754 double
operations (no platform libm) so that encode/decode results are bit-identical
across runtimes; the bundled bindings package in other languages mirrors the
same sequence. Accuracy is a few ulp, far inside the documented 1e-9
round-trip bound, and exact at decade points (10^n for integer n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, EmptyInputError

__all__ = [
    "Scale",
    "ScaleKind",
    "Histogram",
    "Range",
    "DEFAULT_EPSILON",
    "transform",
    "inverse_transform",
    "fit_minmax",
    "histogram",
    "histogram_csv",
]

DEFAULT_EPSILON = 1e-6

# Double-double constants (hi + lo is correct to ~1e-32).
_LN2_HI = 0.6931471805599453
_LN2_LO = 2.3190468138462996e-17
_LN10_HI = 2.302585092994046
_LN10_LO = -2.1707562233822494e-16
_INV_LN10_HI = 0.4342944819032518
_INV_LN10_LO = 1.098319650216765e-17
_INV_LN2 = 1.4426950408889634
_SQRT_HALF = 0.7071067811865476

# Exact doubles for 10^n; indices -30..30.
_POW10 = tuple(float(f"1e{n}") for n in range(-30, 31))


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a: float) -> tuple[float, float]:
    c = 134217729.0 * a  # 2**27 + 1, Dekker splitting
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _log10_portable(x: float) -> float:
    """Base-10 log of a positive finite double, reproducible bit-for-bit."""
    m, e = math.frexp(x)  # x = m * 2^e, m in [0.5, 1)
    if m < _SQRT_HALF:
        m = m * 2.0
        e = e - 1
    # ln(m) via the atanh series; |t| <= sqrt(2)-1 over [sqrt(1/2), sqrt(2))
    t = (m - 1.0) / (m + 1.0)
    z = t * t
    p = 1.0 / 21.0
    p = p * z + 1.0 / 19.0
    p = p * z + 1.0 / 17.0
    p = p * z + 1.0 / 15.0
    p = p * z + 1.0 / 13.0
    p = p * z + 1.0 / 11.0
    p = p * z + 1.0 / 9.0
    p = p * z + 1.0 / 7.0
    p = p * z + 1.0 / 5.0
    p = p * z + 1.0 / 3.0
    ln_m = 2.0 * (t + t * (z * p))
    # (ln_m + e*ln2) / ln10 in double-double to keep the combine below 1 ulp
    eh, el = _two_prod(float(e), _LN2_HI)
    el = el + float(e) * _LN2_LO
    sh, sl = _two_sum(eh, ln_m)
    sl = sl + el
    rh, rl = _two_prod(sh, _INV_LN10_HI)
    rl = rl + sh * _INV_LN10_LO + sl * _INV_LN10_HI
    return rh + rl


def _exp10_portable(u: float) -> float:
    """10**u for finite double u, reproducible bit-for-bit; exact at integer u in [-30, 30]."""
    if -30.0 <= u <= 30.0 and u == math.floor(u):
        return _POW10[int(u) + 30]
    if u > 310.0:
        return math.inf
    if u < -330.0:
        return 0.0
    # w = u * ln10 in double-double, then exp(w) with power-of-two reduction
    wh, wl = _two_prod(u, _LN10_HI)
    wl = wl + u * _LN10_LO
    k = math.floor(wh * _INV_LN2 + 0.5)
    th, tl = _two_prod(float(k), _LN2_HI)
    tl = tl + float(k) * _LN2_LO
    rh, e1 = _two_sum(wh, -th)
    rl = e1 + (wl - tl)
    # exp(rh + rl) ~= exp(rh) * (1 + rl); |rh| <= ln2/2
    q = 1.0 / 6227020800.0  # 1/13!
    q = q * rh + 1.0 / 479001600.0
    q = q * rh + 1.0 / 39916800.0
    q = q * rh + 1.0 / 3628800.0
    q = q * rh + 1.0 / 362880.0
    q = q * rh + 1.0 / 40320.0
    q = q * rh + 1.0 / 5040.0
    q = q * rh + 1.0 / 720.0
    q = q * rh + 1.0 / 120.0
    q = q * rh + 1.0 / 24.0
    q = q * rh + 1.0 / 6.0
    q = q * rh + 0.5
    q = q * rh + 1.0
    q = q * rh + 1.0
    q = q + q * rl
    return math.ldexp(q, int(k))


class Scale(Enum):
    """Target space a value is mapped into before binning/quantization."""

    LINEAR = "linear"
    LOG10 = "log10"


@dataclass(frozen=True)
class ScaleKind:
    """A scale choice plus the epsilon floor used by the log branch."""

    kind: Scale
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.kind is Scale.LOG10 and not (self.epsilon > 0.0):
            raise DomainError(f"log10 scale requires epsilon > 0, got {self.epsilon}")

    @classmethod
    def linear(cls) -> "ScaleKind":
        return cls(Scale.LINEAR)

    @classmethod
    def log10(cls, epsilon: float = DEFAULT_EPSILON) -> "ScaleKind":
        return cls(Scale.LOG10, epsilon)


def transform(v: float, s: ScaleKind) -> float:
    """Map a non-negative value into the target space (identity or log10(v + eps))."""
    v = float(v)
    if not math.isfinite(v) or v < 0.0:
        raise DomainError(f"transform requires a finite value >= 0, got {v!r}")
    if s.kind is Scale.LINEAR:
        return v
    return _log10_portable(v + s.epsilon)


def inverse_transform(u: float, s: ScaleKind, return_clamped: bool = False):
    """Map a transformed value back; negative results clamp to 0.

    With return_clamped=True, returns (value, clamped) instead of the bare value.
    """
    u = float(u)
    if not math.isfinite(u):
        raise DomainError(f"inverse_transform requires a finite value, got {u!r}")
    if s.kind is Scale.LINEAR:
        raw = u
    else:
        raw = _exp10_portable(u) - s.epsilon
    # comparison-based clamp so -0.0 never leaks out
    clamped = raw <= 0.0
    out = 0.0 if clamped else raw
    return (out, clamped and raw != 0.0) if return_clamped else out


class Range(NamedTuple):
    """Fitted [lo, hi] in transformed space."""

    lo: float
    hi: float

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi


def fit_minmax(values: Sequence[float]) -> Range:
    """Exact min and max of a non-empty list; a lo == hi result is flagged degenerate."""
    if len(values) == 0:
        raise EmptyInputError("fit_minmax requires at least one value")
    lo = hi = float(values[0])
    for v in values:
        v = float(v)
        if not math.isfinite(v):
            raise DomainError(f"fit_minmax requires finite values, got {v!r}")
        if v < lo:
            lo = v
        if v > hi:
            hi = v
    return Range(lo, hi)


def widen_if_degenerate(r: Range) -> Range:
    """Widen a lo == hi range by +-0.5 so binning stays total on constant inputs."""
    if r.degenerate:
        return Range(r.lo - 0.5, r.hi + 0.5)
    return r


@dataclass(frozen=True)
class Histogram:
    """Uniform-bin counts over the transformed values; last bin is right-inclusive."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]
    scale: ScaleKind

    def total(self) -> int:
        return sum(self.counts)


def histogram(values: Sequence[float], bins: int, s: ScaleKind) -> Histogram:
    """Histogram of transformed values with `bins` uniform bins over [min, max]."""
    if bins < 1:
        raise DomainError(f"bins must be >= 1, got {bins}")
    if len(values) == 0:
        raise EmptyInputError("histogram requires at least one value")
    t = [transform(v, s) for v in values]
    rng = widen_if_degenerate(fit_minmax(t))
    counts, edges = np.histogram(np.asarray(t), bins=bins, range=(rng.lo, rng.hi))
    return Histogram(tuple(float(e) for e in edges), tuple(int(c) for c in counts), s)


def histogram_csv(h: Histogram) -> str:
    """CSV rows `bin_lo,bin_hi,count`, header included."""
    lines = ["bin_lo,bin_hi,count"]
    for j, c in enumerate(h.counts):
        lines.append(f"{h.edges[j]!r},{h.edges[j + 1]!r},{c}")
    return "\n".join(lines) + "\n"
