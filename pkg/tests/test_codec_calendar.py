import datetime

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timetok.codec_calendar import (
    EPOCH_MAX,
    EPOCH_MIN,
    REL_SECONDS_MAX,
    CivilTime,
    Resolution,
    civil_from_epoch,
    decode_abs,
    decode_rel,
    encode_abs,
    encode_rel,
    epoch_from_civil,
    rel_span_from_seconds,
)
from timetok.errors import DomainError, InvalidDateError, TokenError

from golden import (
    CAL_ABS_DAY_GOLDEN,
    CAL_ABS_SECOND_GOLDEN,
    CAL_REL_DAY_GOLDEN,
    CAL_REL_SECOND_GOLDEN,
    SO_DELTA_S,
    SO_EPOCH_1,
    SO_EPOCH_2,
)

UTC = datetime.timezone.utc


def dt_oracle(t: int) -> tuple:
    d = datetime.datetime.fromtimestamp(t, tz=UTC)
    return (d.year, d.month, d.day, d.hour, d.minute, d.second)


def test_epoch_origin():
    assert civil_from_epoch(0) == CivilTime(1970, 1, 1, 0, 0, 0)
    assert epoch_from_civil(CivilTime(1970, 1, 1)) == 0


def test_reference_instants():
    c = civil_from_epoch(SO_EPOCH_1)
    assert c == CivilTime(2022, 1, 13, 2, 52, 8)
    assert epoch_from_civil(CivilTime(2022, 1, 26, 5, 56, 36)) == SO_EPOCH_2
    assert SO_EPOCH_2 - SO_EPOCH_1 == SO_DELTA_S == 13 * 86400 + 3 * 3600 + 4 * 60 + 28


def test_leap_day():
    assert civil_from_epoch(951782400) == CivilTime(2000, 2, 29, 0, 0, 0)
    assert dt_oracle(951782400) == (2000, 2, 29, 0, 0, 0)


def test_invalid_dates():
    with pytest.raises(InvalidDateError):
        CivilTime(2022, 2, 30)
    with pytest.raises(InvalidDateError):
        CivilTime(2021, 2, 29)  # not a leap year
    with pytest.raises(InvalidDateError):
        CivilTime(2022, 13, 1)
    CivilTime(2020, 2, 29)  # leap year is fine


def test_epoch_range_errors():
    with pytest.raises(DomainError):
        civil_from_epoch(EPOCH_MIN - 1)
    with pytest.raises(DomainError):
        civil_from_epoch(EPOCH_MAX)
    civil_from_epoch(EPOCH_MIN)
    civil_from_epoch(EPOCH_MAX - 1)


def test_civil_matches_datetime_oracle():
    rng = np.random.default_rng(13)
    for t in rng.integers(EPOCH_MIN, EPOCH_MAX, 20000):
        t = int(t)
        c = civil_from_epoch(t)
        assert (c.year, c.month, c.day, c.hour, c.minute, c.second) == dt_oracle(t)
        assert epoch_from_civil(c) == t


def test_encode_abs_golden():
    assert tuple(encode_abs(SO_EPOCH_1, Resolution.SECOND)) == CAL_ABS_SECOND_GOLDEN[0]
    assert tuple(encode_abs(SO_EPOCH_2, Resolution.SECOND)) == CAL_ABS_SECOND_GOLDEN[1]
    assert tuple(encode_abs(SO_EPOCH_1, Resolution.DAY)) == CAL_ABS_DAY_GOLDEN[0]
    assert tuple(encode_abs(SO_EPOCH_2, Resolution.DAY)) == CAL_ABS_DAY_GOLDEN[1]
    assert encode_abs(0, Resolution.SECOND) == [
        "<|year_1970|>", "<|month_01|>", "<|day_01|>", "<|hour_00|>", "<|min_00|>", "<|sec_00|>",
    ]


def test_token_counts_per_resolution():
    for res, n in ((Resolution.DAY, 3), (Resolution.HOUR, 4), (Resolution.MINUTE, 5), (Resolution.SECOND, 6)):
        assert res.n_fields == n
        assert len(encode_abs(SO_EPOCH_1, res)) == n
        assert len(encode_rel(1000.0, res)) == n


def test_decode_abs_fill_rule():
    t = decode_abs(["<|year_2022|>", "<|month_01|>", "<|day_13|>"], Resolution.DAY)
    assert civil_from_epoch(t) == CivilTime(2022, 1, 13, 0, 0, 0)


def test_decode_abs_round_trip_golden():
    assert decode_abs(list(CAL_ABS_SECOND_GOLDEN[0]), Resolution.SECOND) == SO_EPOCH_1


def test_decode_abs_invalid():
    with pytest.raises(InvalidDateError):
        decode_abs(["<|year_2022|>", "<|month_13|>", "<|day_01|>"], Resolution.DAY)
    with pytest.raises(TokenError):
        decode_abs(["<|year_2022|>", "<|day_01|>", "<|month_01|>"], Resolution.DAY)
    with pytest.raises(TokenError):
        decode_abs(["<|year_2022|>", "<|month_01|>"], Resolution.DAY)
    with pytest.raises(TokenError):
        decode_abs(["<|year_22|>", "<|month_01|>", "<|day_01|>"], Resolution.DAY)


def test_encode_rel_golden():
    assert tuple(encode_rel(0, Resolution.SECOND)) == CAL_REL_SECOND_GOLDEN[0]
    assert tuple(encode_rel(SO_DELTA_S, Resolution.SECOND)) == CAL_REL_SECOND_GOLDEN[1]
    assert tuple(encode_rel(0, Resolution.DAY)) == CAL_REL_DAY_GOLDEN[0]
    assert tuple(encode_rel(SO_DELTA_S, Resolution.DAY)) == CAL_REL_DAY_GOLDEN[1]


def test_decode_rel_golden():
    assert decode_rel(list(CAL_REL_SECOND_GOLDEN[0]), Resolution.SECOND) == 0
    assert decode_rel(list(CAL_REL_SECOND_GOLDEN[1]), Resolution.SECOND) == SO_DELTA_S


def test_rel_span_canonical():
    s = rel_span_from_seconds(SO_DELTA_S)
    assert (s.years, s.months, s.days, s.hours, s.minutes, s.seconds) == (0, 0, 13, 3, 4, 28)
    # 13 months' worth of seconds decomposes as 1 year + remainder under fixed units
    s = rel_span_from_seconds(13 * 30 * 86400)
    assert (s.years, s.months, s.days) == (1, 0, 25)
    assert s.months * 30 + s.days < 365


def test_rel_range_error():
    with pytest.raises(DomainError):
        encode_rel(REL_SECONDS_MAX, Resolution.SECOND)
    with pytest.raises(DomainError):
        encode_rel(-1.0, Resolution.SECOND)
    encode_rel(REL_SECONDS_MAX - 1, Resolution.SECOND)


def test_decode_rel_rejects_bad_month():
    with pytest.raises(TokenError):
        decode_rel(["<|year_00|>", "<|month_13|>", "<|day_00|>"], Resolution.DAY)


@settings(max_examples=400, deadline=None)
@given(st.integers(min_value=EPOCH_MIN, max_value=EPOCH_MAX - 1))
def test_abs_second_round_trip_property(t):
    assert decode_abs(encode_abs(t, Resolution.SECOND), Resolution.SECOND) == t


@settings(max_examples=400, deadline=None)
@given(st.floats(min_value=0, max_value=3e9, allow_nan=False))
def test_rel_round_trip_is_floor(delta):
    assert decode_rel(encode_rel(delta, Resolution.SECOND), Resolution.SECOND) == int(delta)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=0, max_value=3e9, allow_nan=False),
    st.floats(min_value=0, max_value=3e9, allow_nan=False),
)
def test_rel_monotonicity(a, b):
    lo, hi = min(a, b), max(a, b)
    res = Resolution.SECOND
    assert decode_rel(encode_rel(lo, res), res) <= decode_rel(encode_rel(hi, res), res)


def test_decode_at_intermediate_resolutions():
    t = SO_EPOCH_1  # 02:52:08
    got_h = decode_abs(encode_abs(t, Resolution.HOUR), Resolution.HOUR)
    assert civil_from_epoch(got_h) == CivilTime(2022, 1, 13, 2, 0, 0)
    got_m = decode_abs(encode_abs(t, Resolution.MINUTE), Resolution.MINUTE)
    assert civil_from_epoch(got_m) == CivilTime(2022, 1, 13, 2, 52, 0)
    assert decode_rel(encode_rel(SO_DELTA_S, Resolution.HOUR), Resolution.HOUR) == 13 * 86400 + 3 * 3600
    assert decode_rel(encode_rel(SO_DELTA_S, Resolution.MINUTE), Resolution.MINUTE) == SO_DELTA_S - 28


def test_day_resolution_truncation_bound():
    rng = np.random.default_rng(17)
    for delta in rng.uniform(0, 1e8, 2000):
        got = decode_rel(encode_rel(float(delta), Resolution.DAY), Resolution.DAY)
        assert 0 <= delta - got < 86400
