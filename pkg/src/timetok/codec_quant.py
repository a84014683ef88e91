"""Data-driven codecs: uniform scale binning and residual scalar quantization.

The 1-D K-means behind RSQ defaults to an exact dynamic program over sorted
values: optimal 1-D clusters are contiguous runs, so a row-monotone DP finds
the global within-cluster-SSE minimum deterministically. Rows are filled by
divide and conquer on the split position, batched per recursion depth into
numpy segment reductions, which keeps a k=64 fit on 10^4 points well under a
second. A Lloyd/k-means++ engine is available for parity with library-style
fits; it is seeded and deterministic but not guaranteed optimal.
"""

from __future__ import annotations

import bisect
import math
import re
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, EmptyInputError, TokenError
from .transforms import (
    ScaleKind,
    _two_sum,
    fit_minmax,
    inverse_transform,
    transform,
    widen_if_degenerate,
)

__all__ = [
    "BinSpec",
    "Codebook",
    "RsqSpec",
    "RSQ_LEVEL_PRESETS",
    "bin_fit",
    "bin_index",
    "bin_encode",
    "bin_decode",
    "kmeans1d_fit",
    "rsq_fit",
    "rsq_encode",
    "rsq_decode",
]

# level budgets with a combined vocabulary of 256 tokens
RSQ_LEVEL_PRESETS = {
    "256": (256,),
    "128-128": (128, 128),
    "85-85-86": (85, 85, 86),
    "64-64-64-64": (64, 64, 64, 64),
}

_BIN_RE = re.compile(r"<\|bin_(\d{3,})\|>")
_LEVEL_RE = re.compile(r"<\|L(\d+)_(\d{3,})\|>")


# ----------------------------------------------------------------------------
# uniform scale binning


def _exceeds(a: float, b: float, half: float) -> bool:
    """Exact predicate for real(a - b) > half (a, b, half doubles)."""
    t, te = _two_sum(a, -b)
    return t > half or (t == half and te > 0.0)


@dataclass(frozen=True)
class BinSpec:
    """K uniform bins over the fitted [lo, hi] range in transformed space.

    The half-width reconstruction bound is required in computed arithmetic,
    not just on paper: at u = lo or u = hi the real error is exactly width/2,
    so an outward rounding of the edge-bin center would break it by one ulp.
    center() therefore nudges the first and last centers inward until the
    exact predicate confirms the bound (k >= 2; a single bin is constrained
    on both sides and cannot always satisfy either).
    """

    scale: ScaleKind
    k: int
    lo: float
    hi: float

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"bin count must be >= 1, got {self.k}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"bin range must be finite, got [{self.lo}, {self.hi}]")
        if not (self.lo < self.hi):
            raise DomainError(f"bin range must satisfy lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.k

    def center(self, j: int) -> float:
        w = self.width
        half = w / 2.0
        c = self.lo + (j + 0.5) * w
        if self.k > 1:
            if j == 0:
                while _exceeds(c, self.lo, half):
                    c = math.nextafter(c, -math.inf)
            elif j == self.k - 1:
                while _exceeds(self.hi, c, half):
                    c = math.nextafter(c, math.inf)
        return c


def bin_fit(values, scale: ScaleKind, k: int) -> BinSpec:
    """Fit lo/hi to the transformed min/max; a constant input widens by +-0.5."""
    if len(values) == 0:
        raise EmptyInputError("bin_fit requires at least one value")
    if k < 1:
        raise DomainError(f"bin count must be >= 1, got {k}")
    rng = widen_if_degenerate(fit_minmax([transform(v, scale) for v in values]))
    return BinSpec(scale, k, rng.lo, rng.hi)


def bin_index(v: float, spec: BinSpec) -> int:
    """Bin of v, clamping values outside the fitted range to the edge bins."""
    u = transform(v, spec.scale)
    j = math.floor((u - spec.lo) / spec.width)
    if j < 0:
        return 0
    if j > spec.k - 1:
        return spec.k - 1
    return int(j)


def bin_encode(v: float, spec: BinSpec) -> str:
    return f"<|bin_{bin_index(v, spec):03d}|>"


def bin_decode(token: str | int, spec: BinSpec) -> float:
    """Center of the bin, mapped back through the inverse transform."""
    if isinstance(token, str):
        m = _BIN_RE.fullmatch(token)
        if not m:
            raise TokenError(f"not a bin token literal: {token!r}")
        j = int(m.group(1))
    else:
        j = int(token)
    if not 0 <= j < spec.k:
        raise TokenError(f"bin index {j} out of range [0, {spec.k})")
    return inverse_transform(spec.center(j), spec.scale)


# ----------------------------------------------------------------------------
# exact 1-D K-means


@dataclass(frozen=True)
class Codebook:
    """Ascending centroids for one quantization level."""

    level: int
    centroids: tuple[float, ...]

    def __post_init__(self):
        if self.level < 0:
            raise DomainError(f"level must be >= 0, got {self.level}")
        if len(self.centroids) == 0:
            raise DomainError("a codebook needs at least one centroid")
        for c in self.centroids:
            if not math.isfinite(c):
                raise DomainError(f"centroids must be finite, got {c!r}")
        for a, b in zip(self.centroids, self.centroids[1:]):
            if not a < b:
                raise DomainError("centroids must be strictly ascending")

    @property
    def k(self) -> int:
        return len(self.centroids)


@lru_cache(maxsize=512)
def _midpoints(centroids: tuple[float, ...]) -> tuple[float, ...]:
    return tuple((centroids[i] + centroids[i + 1]) / 2.0 for i in range(len(centroids) - 1))


def nearest_index(centroids: tuple[float, ...], x: float) -> int:
    # midpoint comparison; an exact tie lands on the lower index
    return bisect.bisect_left(_midpoints(centroids), x)


def _nearest_index_vec(centroids: np.ndarray, xs: np.ndarray) -> np.ndarray:
    mids = (centroids[:-1] + centroids[1:]) / 2.0
    return np.searchsorted(mids, xs, side="left")


def _dp_fill_row(dp_prev: np.ndarray, argmin_out: np.ndarray, l: int, pw, ps, pq) -> np.ndarray:
    """One DP row: best SSE using l clusters over prefixes, split found by D&C.

    Tasks at the same recursion depth are flattened into single segment
    reductions, so the l-th row costs O(m log m) element work with a handful
    of numpy calls per depth.
    """
    m = dp_prev.shape[0]
    dp_cur = np.full(m, np.inf)
    jlo = np.array([l - 1], dtype=np.int64)
    jhi = np.array([m - 1], dtype=np.int64)
    ilo = np.array([l - 1], dtype=np.int64)
    ihi = np.array([m - 1], dtype=np.int64)
    while jlo.size:
        jmid = (jlo + jhi) // 2
        win_hi = np.minimum(ihi, jmid)
        lens = win_hi - ilo + 1
        starts = np.zeros(lens.size, dtype=np.int64)
        np.cumsum(lens[:-1], out=starts[1:])
        total = int(starts[-1] + lens[-1])
        i_flat = np.arange(total, dtype=np.int64) - np.repeat(starts, lens) + np.repeat(ilo, lens)
        j_flat = np.repeat(jmid, lens)
        w = pw[j_flat + 1] - pw[i_flat]
        s = ps[j_flat + 1] - ps[i_flat]
        q = pq[j_flat + 1] - pq[i_flat]
        vals = dp_prev[i_flat - 1] + (q - s * s / w)
        seg_min = np.minimum.reduceat(vals, starts)
        is_min = vals == np.repeat(seg_min, lens)
        opt = np.minimum.reduceat(np.where(is_min, i_flat, m + 1), starts)
        dp_cur[jmid] = seg_min
        argmin_out[jmid] = opt
        left = jmid - 1 >= jlo
        right = jmid + 1 <= jhi
        jlo = np.concatenate([jlo[left], jmid[right] + 1])
        jhi = np.concatenate([jmid[left] - 1, jhi[right]])
        ilo = np.concatenate([ilo[left], opt[right]])
        ihi = np.concatenate([opt[left], ihi[right]])
    return dp_cur


def _kmeans_dp(xs: np.ndarray, weights: np.ndarray, k: int) -> np.ndarray:
    """Optimal weighted 1-D k-means over sorted distinct values."""
    m = xs.shape[0]
    shift = float(np.average(xs, weights=weights))  # stabilizes the prefix-sum costs
    x = xs - shift
    pw = np.zeros(m + 1)
    ps = np.zeros(m + 1)
    pq = np.zeros(m + 1)
    np.cumsum(weights, out=pw[1:])
    np.cumsum(weights * x, out=ps[1:])
    np.cumsum(weights * x * x, out=pq[1:])
    dp = pq[1:] - ps[1:] * ps[1:] / pw[1:]  # one cluster over each prefix
    argmins = np.zeros((k + 1, m), dtype=np.int64)
    for l in range(2, k + 1):
        dp = _dp_fill_row(dp, argmins[l], l, pw, ps, pq)
    # walk the split positions back from the full prefix
    bounds = []
    end = m - 1
    for l in range(k, 1, -1):
        start = int(argmins[l][end])
        bounds.append((start, end))
        end = start - 1
    bounds.append((0, end))
    bounds.reverse()
    centroids = np.empty(k)
    for idx, (a, b) in enumerate(bounds):
        centroids[idx] = (ps[b + 1] - ps[a]) / (pw[b + 1] - pw[a]) + shift
    return centroids


def _kmeans_lloyd(xs: np.ndarray, k: int, seed: int) -> np.ndarray:
    """Seeded k-means++ / Lloyd compatibility engine (10 restarts, 300 iters, tol 1e-4)."""
    rng = np.random.default_rng(seed)
    best_centers = None
    best_inertia = np.inf
    n = xs.shape[0]
    for _ in range(10):
        centers = np.empty(k)
        centers[0] = xs[rng.integers(n)]
        d2 = (xs - centers[0]) ** 2
        for c in range(1, k):
            tot = d2.sum()
            if tot == 0.0:
                centers[c:] = centers[c - 1]
                break
            centers[c] = xs[np.searchsorted(np.cumsum(d2), rng.random() * tot)]
            d2 = np.minimum(d2, (xs - centers[c]) ** 2)
        prev_inertia = np.inf
        inertia = np.inf
        for _ in range(300):
            dists = np.abs(xs[:, None] - centers[None, :])
            assign = np.argmin(dists, axis=1)
            for c in range(k):
                sel = xs[assign == c]
                if sel.size:
                    centers[c] = sel.mean()
                else:  # classic fix: move an empty center onto the worst-served point
                    centers[c] = xs[np.argmax(np.min(dists, axis=1))]
            assign = np.argmin(np.abs(xs[:, None] - centers[None, :]), axis=1)
            inertia = float(((xs - centers[assign]) ** 2).sum())
            if math.isfinite(prev_inertia) and prev_inertia - inertia <= 1e-4 * prev_inertia:
                break
            prev_inertia = inertia
        if inertia < best_inertia:
            best_inertia = inertia
            best_centers = centers.copy()
    return np.unique(best_centers)


def kmeans1d_fit(values, k: int, *, engine: str = "dp", seed: int = 0, level: int = 0) -> Codebook:
    """Cluster 1-D values into k ascending centroids.

    The default `dp` engine is exact and deterministic. `lloyd` runs seeded
    k-means++ restarts instead. If k exceeds the number of distinct values it
    is reduced with a warning.
    """
    if len(values) == 0:
        raise EmptyInputError("kmeans1d_fit requires at least one value")
    if k < 1:
        raise DomainError(f"cluster count must be >= 1, got {k}")
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("kmeans1d_fit requires finite values")
    xs, counts = np.unique(arr, return_counts=True)
    if k > xs.shape[0]:
        warnings.warn(f"k={k} exceeds {xs.shape[0]} distinct values; reducing")
        k = int(xs.shape[0])
    if engine == "dp":
        if k == 1:
            centroids = np.array([np.average(xs, weights=counts)])
        else:
            centroids = _kmeans_dp(xs, counts.astype(np.float64), k)
    elif engine == "lloyd":
        centroids = _kmeans_lloyd(arr, k, seed)
        if centroids.shape[0] < k:
            warnings.warn(f"lloyd engine converged to {centroids.shape[0]} distinct centers (k={k})")
    else:
        raise DomainError(f"unknown k-means engine {engine!r}")
    return Codebook(level=level, centroids=tuple(float(c) for c in centroids))


# ----------------------------------------------------------------------------
# residual scalar quantization


@dataclass(frozen=True)
class RsqSpec:
    """A hierarchy of codebooks; each level quantizes the previous level's residual."""

    scale: ScaleKind
    levels: tuple[Codebook, ...]

    def __post_init__(self):
        if len(self.levels) == 0:
            raise DomainError("an RSQ spec needs at least one level")
        for i, cb in enumerate(self.levels):
            if cb.level != i:
                raise DomainError(f"level indices must be consecutive, got {cb.level} at position {i}")

    @property
    def n_levels(self) -> int:
        return len(self.levels)


def rsq_fit(values, scale: ScaleKind, ks, *, engine: str = "dp", seed: int = 0) -> RsqSpec:
    """Fit one codebook per level on the running residuals of the training values.

    Training mean squared residual is non-increasing across levels; with the
    dp engine this is a theorem (each level's SSE is at most the SSE about 0),
    and it is asserted on every fit.
    """
    if len(values) == 0:
        raise EmptyInputError("rsq_fit requires at least one value")
    if len(ks) == 0:
        raise DomainError("rsq_fit requires at least one level size")
    res = np.array([transform(v, scale) for v in values], dtype=np.float64)
    levels = []
    prev_mse = float(np.mean(res * res))
    for lvl, kl in enumerate(ks):
        if kl < 1:
            raise DomainError(f"level sizes must be >= 1, got {kl}")
        cb = kmeans1d_fit(res, int(kl), engine=engine, seed=seed + lvl, level=lvl)
        cents = np.asarray(cb.centroids)
        res = res - cents[_nearest_index_vec(cents, res)]
        mse = float(np.mean(res * res))
        assert mse <= prev_mse, f"residual MSE rose at level {lvl}: {mse} > {prev_mse}"
        prev_mse = mse
        levels.append(cb)
    return RsqSpec(scale, tuple(levels))


def rsq_token(level: int, index: int) -> str:
    return f"<|L{level}_{index:03d}|>"


def rsq_encode(v: float, spec: RsqSpec) -> list[str]:
    """Exactly one token per level; each level quantizes the running residual."""
    r = transform(v, spec.scale)
    out = []
    for cb in spec.levels:
        q = nearest_index(cb.centroids, r)
        r = r - cb.centroids[q]
        out.append(rsq_token(cb.level, q))
    return out


def rsq_decode(tokens, spec: RsqSpec) -> float:
    """Sum one centroid per level (L0..L{N-1} order required), then invert the transform."""
    if len(tokens) != spec.n_levels:
        raise TokenError(f"RSQ decode needs exactly {spec.n_levels} tokens, got {len(tokens)}")
    total = 0.0
    for i, tok in enumerate(tokens):
        m = _LEVEL_RE.fullmatch(tok)
        if not m:
            raise TokenError(f"not an RSQ token literal: {tok!r}", offset=i)
        lvl, idx = int(m.group(1)), int(m.group(2))
        if lvl != i:
            raise TokenError(f"expected level {i} token, got {tok!r}", offset=i)
        cb = spec.levels[i]
        if not 0 <= idx < cb.k:
            raise TokenError(f"index {idx} out of range for level {i} (k={cb.k})", offset=i)
        total = total + cb.centroids[idx]
    return inverse_transform(total, spec.scale)
