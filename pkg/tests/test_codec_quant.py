import itertools
import math

import numpy as np
import pytest

from timetok.codec_quant import (
    RSQ_LEVEL_PRESETS,
    BinSpec,
    Codebook,
    RsqSpec,
    bin_decode,
    bin_encode,
    bin_fit,
    bin_index,
    kmeans1d_fit,
    nearest_index,
    rsq_decode,
    rsq_encode,
    rsq_fit,
)
from timetok.errors import DomainError, EmptyInputError, TokenError
from timetok.transforms import ScaleKind, transform

LIN = ScaleKind.linear()
LOG = ScaleKind.log10(1e-6)


# ----------------------------------------------------------------------------
# independent SSE oracle: every assignment of n points to k labeled clusters


def brute_force_sse(xs, k: int) -> float:
    xs = np.asarray(xs, dtype=float)
    n = len(xs)
    best = math.inf
    for assign in itertools.product(range(k), repeat=n):
        a = np.asarray(assign)
        sse = 0.0
        for c in range(k):
            pts = xs[a == c]
            if pts.size:
                sse += float(((pts - pts.mean()) ** 2).sum())
        if sse < best:
            best = sse
    return best


def assignment_sse(cb: Codebook, xs) -> float:
    return sum((x - cb.centroids[nearest_index(cb.centroids, x)]) ** 2 for x in map(float, xs))


# ----------------------------------------------------------------------------
# binning


def test_bin_fit_examples():
    spec = bin_fit(list(range(256)), LIN, 256)
    assert (spec.lo, spec.hi) == (0.0, 255.0)
    assert spec.width == 255.0 / 256.0

    spec = bin_fit([5, 5, 5], LIN, 4)
    assert (spec.lo, spec.hi) == (4.5, 5.5)


def test_bin_fit_matches_scan_oracle():
    rng = np.random.default_rng(2)
    vals = rng.lognormal(0, 1, 10000).tolist()
    spec = bin_fit(vals, LOG, 256)
    transformed = sorted(transform(v, LOG) for v in vals)
    assert (spec.lo, spec.hi) == (transformed[0], transformed[-1])


def test_bin_fit_errors():
    with pytest.raises(EmptyInputError):
        bin_fit([], LIN, 4)
    with pytest.raises(DomainError):
        bin_fit([1.0], LIN, 0)


def test_bin_encode_clamps_and_floors():
    spec = bin_fit(list(range(256)), LIN, 256)
    assert bin_encode(100.4, spec) == "<|bin_100|>"
    assert bin_index(255.0, spec) == 255  # the max lands in the last bin, not k
    assert bin_index(1e9, spec) == 255
    low = bin_fit([10.0, 20.0], LIN, 8)
    assert bin_index(1.0, low) == 0  # below the fitted range clamps down
    with pytest.raises(DomainError):
        bin_index(-1.0, low)  # negative is out of domain, not clamp


def test_bin_decode_center():
    spec = BinSpec(LIN, 1, 0.0, 1.0)
    assert bin_decode("<|bin_000|>", spec) == 0.5
    assert bin_decode(0, spec) == 0.5
    with pytest.raises(TokenError):
        bin_decode(1, spec)
    with pytest.raises(TokenError):
        bin_decode("<|bin_abc|>", spec)


def test_bin_decode_log_inverse():
    spec = BinSpec(LOG, 4, -6.0, 2.0)
    u = spec.center(2)
    got = bin_decode(2, spec)
    want = 10.0**u - 1e-6  # libm oracle; implementations may differ by ulps
    assert got == pytest.approx(want, rel=1e-14)


def test_bin_half_width_bound_exhaustive():
    for scale in (LIN, LOG):
        rng = np.random.default_rng(23)
        vals = rng.lognormal(0, 1.5, 4000).tolist()
        spec = bin_fit(vals, scale, 16)
        grid = np.linspace(0.0, max(vals), 10000)
        for v in grid:
            v = float(v)
            u = transform(v, scale)
            if spec.lo <= u <= spec.hi:
                u_hat = transform(bin_decode(bin_index(v, spec), spec), scale)
                assert abs(u_hat - u) <= spec.width / 2 + 1e-12


# ----------------------------------------------------------------------------
# k-means


def test_kmeans_spec_examples():
    assert kmeans1d_fit([1, 2, 10, 11], 2).centroids == (1.5, 10.5)
    assert kmeans1d_fit([7], 1).centroids == (7.0,)
    with pytest.warns(UserWarning, match="distinct"):
        cb = kmeans1d_fit([0, 0, 10, 10], 4)
    assert cb.centroids == (0.0, 10.0)
    assert assignment_sse(cb, [0, 0, 10, 10]) == 0.0


def test_kmeans_dp_optimal_vs_brute_force():
    rng = np.random.default_rng(31)
    for _ in range(80):
        n = int(rng.integers(1, 11))
        k = int(rng.integers(1, 4))
        xs = np.round(rng.normal(0, 10, n), 3).tolist()
        k_eff = min(k, len(set(xs)))
        cb = kmeans1d_fit(xs, k_eff)
        got = assignment_sse(cb, xs)
        want = brute_force_sse(xs, k_eff)
        assert got <= want + 1e-9 * max(1.0, want)
        assert got >= want - 1e-9 * max(1.0, want)


def test_kmeans_dp_not_worse_than_lloyd():
    rng = np.random.default_rng(37)
    for _ in range(10):
        xs = rng.lognormal(0, 1, 200).tolist()
        dp = assignment_sse(kmeans1d_fit(xs, 8), xs)
        lloyd_cb = kmeans1d_fit(xs, 8, engine="lloyd", seed=4)
        lloyd = assignment_sse(lloyd_cb, xs)
        assert dp <= lloyd + 1e-9 * max(1.0, lloyd)


def test_kmeans_deterministic():
    rng = np.random.default_rng(41)
    xs = rng.lognormal(0, 2, 3000).tolist()
    a = kmeans1d_fit(xs, 32)
    b = kmeans1d_fit(xs, 32)
    assert a.centroids == b.centroids


def test_kmeans_errors():
    with pytest.raises(EmptyInputError):
        kmeans1d_fit([], 2)
    with pytest.raises(DomainError):
        kmeans1d_fit([1.0], 0)
    with pytest.raises(DomainError):
        kmeans1d_fit([1.0, float("nan")], 1)
    with pytest.raises(DomainError):
        kmeans1d_fit([1.0], 1, engine="mystery")


def test_codebook_invariants():
    with pytest.raises(DomainError):
        Codebook(0, (2.0, 1.0))
    with pytest.raises(DomainError):
        Codebook(0, (1.0, 1.0))
    with pytest.raises(DomainError):
        Codebook(0, ())


# ----------------------------------------------------------------------------
# RSQ


def test_rsq_perfect_two_level():
    spec = rsq_fit([0.0, 1.0, 10.0, 11.0], LIN, [2, 2])
    assert spec.levels[0].centroids == (0.5, 10.5)
    assert spec.levels[1].centroids == (-0.5, 0.5)
    for v in (0.0, 1.0, 10.0, 11.0):
        assert rsq_decode(rsq_encode(v, spec), spec) == v


def test_rsq_single_level_exact():
    spec = rsq_fit([0.0, 10.0], LIN, [2])
    assert spec.levels[0].centroids == (0.0, 10.0)
    assert rsq_encode(0.0, spec) == ["<|L0_000|>"]
    assert rsq_decode(["<|L0_001|>"], spec) == 10.0


def test_rsq_hand_residual_trace():
    spec = rsq_fit([0.0, 1.0, 10.0, 11.0], LIN, [2, 2])
    assert rsq_encode(1.0, spec) == ["<|L0_000|>", "<|L1_001|>"]
    assert rsq_decode(["<|L0_000|>", "<|L1_001|>"], spec) == 1.0


def test_rsq_tie_breaks_low():
    spec = RsqSpec(LIN, (Codebook(0, (0.0, 1.0)),))
    assert rsq_encode(0.5, spec) == ["<|L0_000|>"]


def test_rsq_mse_monotone_lognormal():
    rng = np.random.default_rng(43)
    vals = rng.lognormal(0, 1.5, 2000).tolist()
    for scale in (LIN, LOG):
        spec = rsq_fit(vals, scale, [16, 16, 16, 16])  # the fit itself asserts monotonicity
        u = np.array([transform(v, scale) for v in vals])
        res = u.copy()
        mses = []
        for cb in spec.levels:
            cents = np.asarray(cb.centroids)
            mids = (cents[:-1] + cents[1:]) / 2
            res = res - cents[np.searchsorted(mids, res)]
            mses.append(float(np.mean(res**2)))
        assert all(b <= a for a, b in zip(mses, mses[1:]))


def test_rsq_decode_errors():
    spec = rsq_fit([0.0, 1.0, 10.0, 11.0], LIN, [2, 2])
    with pytest.raises(TokenError):
        rsq_decode(["<|L0_000|>"], spec)
    with pytest.raises(TokenError, match="level"):
        rsq_decode(["<|L1_000|>", "<|L0_000|>"], spec)
    with pytest.raises(TokenError, match="range"):
        rsq_decode(["<|L0_002|>", "<|L1_000|>"], spec)
    with pytest.raises(TokenError):
        rsq_decode(["<|L0_000|>", "nope"], spec)


def test_rsq_negative_sum_clamps():
    spec = RsqSpec(LIN, (Codebook(0, (-2.0, 5.0)),))
    assert rsq_decode(["<|L0_000|>"], spec) == 0.0


def test_rsq_encode_domain():
    spec = rsq_fit([0.0, 1.0], LIN, [2])
    with pytest.raises(DomainError):
        rsq_encode(-1.0, spec)
    with pytest.raises(DomainError):
        rsq_encode(float("nan"), spec)


def test_rsq_level_presets_budget():
    for name, ks in RSQ_LEVEL_PRESETS.items():
        assert sum(ks) == 256, name


def test_rsq_spec_level_order_enforced():
    with pytest.raises(DomainError):
        RsqSpec(LIN, (Codebook(1, (0.0,)),))
