import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timetok.errors import DomainError, EmptyInputError
from timetok.transforms import (
    Range,
    Scale,
    ScaleKind,
    _exp10_portable,
    _log10_portable,
    fit_minmax,
    histogram,
    histogram_csv,
    inverse_transform,
    transform,
    widen_if_degenerate,
)

LOG = ScaleKind.log10(1e-6)
LIN = ScaleKind.linear()


def test_transform_examples():
    assert transform(0.0, LOG) == -6.0
    assert transform(1.0, LIN) == 1.0
    # 0.999999 + 1e-6 rounds to exactly 1.0, so log10 is exactly 0
    assert transform(0.999999, LOG) == 0.0


def test_transform_domain_errors():
    for bad in (-1.0, float("nan"), float("inf")):
        with pytest.raises(DomainError):
            transform(bad, LIN)


def test_inverse_examples():
    assert inverse_transform(-6.0, LOG) == 0.0
    assert inverse_transform(0.0, LOG) == 0.999999
    assert inverse_transform(-3.0, LIN, return_clamped=True) == (0.0, True)
    assert inverse_transform(2.0, LIN, return_clamped=True) == (2.0, False)


def test_log_scale_requires_positive_epsilon():
    with pytest.raises(DomainError):
        ScaleKind(Scale.LOG10, 0.0)


def test_portable_log10_close_to_libm():
    rng = np.random.default_rng(5)
    for x in np.exp(rng.uniform(-40, 40, 20000)):
        a, b = _log10_portable(float(x)), math.log10(float(x))
        assert abs(a - b) <= 4 * math.ulp(b)


def test_portable_exp10_decades_exact():
    for n in range(-30, 31):
        assert _exp10_portable(float(n)) == float(f"1e{n}")


def test_fit_minmax():
    assert fit_minmax([3, 1, 2]) == Range(1.0, 3.0)
    r = fit_minmax([5, 5])
    assert r == Range(5.0, 5.0) and r.degenerate
    assert widen_if_degenerate(r) == Range(4.5, 5.5)
    with pytest.raises(EmptyInputError):
        fit_minmax([])


def test_fit_minmax_matches_scan_oracle():
    rng = np.random.default_rng(7)
    vals = rng.lognormal(0, 2, 10000).tolist()
    r = fit_minmax(vals)
    ordered = sorted(vals)
    assert r == Range(ordered[0], ordered[-1])


def test_histogram_basic():
    h = histogram([0, 1, 2, 3], 2, LIN)
    assert h.counts == (2, 2)
    assert h.edges == (0.0, 1.5, 3.0)


def test_histogram_single_value_widens():
    h = histogram([7.0], 5, LIN)
    assert sum(h.counts) == 1
    assert h.edges[0] == 6.5 and h.edges[-1] == 7.5


def test_histogram_conservation():
    rng = np.random.default_rng(11)
    vals = rng.lognormal(0, 1, 1000).tolist()
    for scale in (LIN, LOG):
        assert histogram(vals, 37, scale).total() == 1000


def test_histogram_csv_shape():
    text = histogram_csv(histogram([0, 1, 2, 3], 2, LIN))
    lines = text.strip().split("\n")
    assert lines[0] == "bin_lo,bin_hi,count"
    assert len(lines) == 3
    assert lines[1].endswith(",2")


def test_histogram_errors():
    with pytest.raises(EmptyInputError):
        histogram([], 4, LIN)
    with pytest.raises(DomainError):
        histogram([1.0], 0, LIN)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e9, allow_nan=False))
def test_round_trip_bound(v):
    for scale in (LIN, LOG):
        r = inverse_transform(transform(v, scale), scale)
        assert abs(r - v) <= 1e-9 * max(1.0, v)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=1e12, allow_nan=False),
    st.floats(min_value=0.0, max_value=1e12, allow_nan=False),
)
def test_monotonicity(a, b):
    lo, hi = min(a, b), max(a, b)
    for scale in (LIN, LOG):
        assert transform(lo, scale) <= transform(hi, scale)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=0, max_value=1e6, allow_nan=False), min_size=1, max_size=200))
def test_histogram_conservation_property(values):
    assert histogram(values, 13, LIN).total() == len(values)
