import math
import struct

import numpy as np
import pytest

from timetok.bench import (
    SyntheticConfig,
    TokensPerValue,
    analyze,
    compare,
    fit_preset,
    gen_synthetic,
    reconstruction_rmse,
    report_csv,
    report_table,
    tokens_per_value,
)
from timetok.codec_quant import bin_fit
from timetok.core import TimeUnit, save_dataset
from timetok.errors import DomainError, EmptyInputError, UnitMismatchError
from timetok.template import TokenizerSpec, fit_tokenizer
from timetok.transforms import ScaleKind


def small_dataset(seed=0, shape="lognormal", n=60, slen=20, **kw):
    return gen_synthetic(SyntheticConfig(shape=shape, n_sequences=n, seq_len=slen, seed=seed, **kw))


def test_tokens_per_value_table():
    d = small_dataset()
    want = {
        "numeric": TokensPerValue(4.0, True),
        "byte": TokensPerValue(4.0, False),
        "cal_abs_day": TokensPerValue(3.0, False),
        "cal_abs_second": TokensPerValue(6.0, False),
        "cal_rel_day": TokensPerValue(3.0, False),
        "cal_rel_second": TokensPerValue(6.0, False),
        "bin_linear_256": TokensPerValue(1.0, False),
        "bin_log_256": TokensPerValue(1.0, False),
        "rsq_linear_l1": TokensPerValue(1.0, False),
        "rsq_linear_l4": TokensPerValue(4.0, False),
        "rsq_log_l1": TokensPerValue(1.0, False),
        "rsq_log_l4": TokensPerValue(4.0, False),
    }
    for name, expected in want.items():
        assert tokens_per_value(fit_preset(name, d)) == expected, name


def test_rmse_byte_exact_on_float32_values():
    spec = fit_tokenizer("byte", unit=TimeUnit.HOUR)
    values = [struct.unpack("<f", struct.pack("<f", v))[0] for v in (0.0, 1.5, 7.25, 1e-3)]
    assert reconstruction_rmse(spec, values) == 0.0


def test_rmse_single_bin_over_unit_interval():
    spec = TokenizerSpec("scale_bin", bin_fit([0.0, 1.0], ScaleKind.linear(), 1), TimeUnit.HOUR)
    assert reconstruction_rmse(spec, [0.0, 1.0]) == 0.5  # both decode to the center


def test_rmse_rsq_zero_on_training_fixed_points():
    spec = fit_tokenizer(
        "rsq", unit=TimeUnit.HOUR, dataset=small_dataset(), scale=ScaleKind.linear(), levels=(4, 4)
    )
    # values that are exact codec fixed points reconstruct exactly
    from timetok.template import decode_value, encode_value

    fixed = [decode_value(spec, encode_value(spec, v)) for v in (0.1, 0.5, 2.0)]
    assert reconstruction_rmse(spec, fixed) == 0.0


def test_rmse_empty_error():
    with pytest.raises(EmptyInputError):
        reconstruction_rmse(fit_tokenizer("byte", unit=TimeUnit.HOUR), [])


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    save_dataset(small_dataset(seed=1), a)
    save_dataset(small_dataset(seed=1), b)
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.jsonl"
    save_dataset(small_dataset(seed=2), c)
    assert a.read_bytes() != c.read_bytes()


def test_gen_lognormal_clt_bound():
    d = gen_synthetic(SyntheticConfig(shape="lognormal", n_sequences=100, seq_len=101, seed=3))
    gaps = np.array([v for s in d.all_sequences() for v in s.intervals()[1:]])
    n = gaps.size
    assert n == 100 * 100
    assert abs(np.log(gaps).mean() - 0.0) <= 3.0 * 1.0 / math.sqrt(n)


def test_gen_spiky_atoms_exact():
    d = gen_synthetic(
        SyntheticConfig(shape="spiky", atoms=(1.0, 7.0), atom_weights=(0.5, 0.5), jitter=0.0,
                        n_sequences=20, seq_len=30, seed=4)
    )
    gaps = {v for s in d.all_sequences() for v in s.intervals()[1:]}
    assert gaps <= {1.0, 7.0}


def test_gen_structure():
    d = small_dataset(seed=5, n=10, slen=4)
    assert len(d.train) >= 1 and len(d.val) >= 1 and len(d.test) >= 1
    for seq in d.all_sequences():
        assert seq.events[0].interval_units == 0.0
        assert len(seq) == 4


def test_gen_validation():
    with pytest.raises(DomainError):
        SyntheticConfig(shape="weird")
    with pytest.raises(DomainError):
        SyntheticConfig(atom_weights=(0.6, 0.6))
    with pytest.raises(DomainError):
        SyntheticConfig(n_sequences=0)


def test_compare_single_spec():
    d = small_dataset(seed=6)
    report = compare([fit_preset("byte", d)], d)
    assert len(report.rows) == 1
    assert report.rows[0].strategy == "byte"
    assert report.rows[0].vocab_added == 256


def test_compare_unit_mismatch():
    d = small_dataset(seed=7)
    wrong = fit_tokenizer("byte", unit=TimeUnit.MONTH)
    with pytest.raises(UnitMismatchError):
        compare([wrong], d)


def test_compare_codec_floor_relationships():
    d = small_dataset(seed=8, n=80, slen=30, log_sd=1.5)
    byte = fit_preset("byte", d)
    bin_log = fit_preset("bin_log_256", d)
    rsq_l1 = fit_preset("rsq_log_l1", d)
    rsq_l4 = fit_preset("rsq_log_l4", d)
    report = compare([byte, bin_log, rsq_l1, rsq_l4], d, split="train")
    rows = {(r.strategy, r.levels_or_bins): r.reconstruction_rmse for r in report.rows}
    gaps = [v for s in d.train for v in s.intervals()]
    # float32 narrowing is the byte codec's only loss
    assert rows[("byte", "-")] <= 1e-7 * max(gaps)
    assert rows[("rsq", "64-64-64-64")] <= rows[("rsq", "256")] + 1e-12


def test_compare_row_order_follows_input():
    d = small_dataset(seed=9)
    specs = [fit_preset("byte", d), fit_preset("numeric", d)]
    r1 = compare(specs, d)
    r2 = compare(specs[::-1], d)
    assert [r.strategy for r in r1.rows] == ["byte", "numeric"]
    assert [r.strategy for r in r2.rows] == ["numeric", "byte"]
    as_set = lambda rep: {(r.strategy, r.reconstruction_rmse) for r in rep.rows}
    assert as_set(r1) == as_set(r2)


def test_report_formats():
    d = small_dataset(seed=10)
    report = compare([fit_preset("numeric", d), fit_preset("bin_log_256", d)], d)
    csv = report_csv(report)
    assert csv.startswith("strategy,scale,levels_or_bins,tokens_per_value,vocab_added,reconstruction_rmse")
    assert "~4" in csv  # the numeric estimate is flagged
    table = report_table(report)
    assert "codec floor" in table


def test_analyze_constant_intervals():
    d = gen_synthetic(
        SyntheticConfig(shape="spiky", atoms=(2.0,), atom_weights=(1.0,), jitter=0.0,
                        n_sequences=10, seq_len=10, seed=11)
    )
    lin, log = analyze(d, bins=12)
    assert sum(1 for c in lin.counts if c) == 1
    assert sum(1 for c in log.counts if c) == 1
    assert lin.total() == log.total() == 10 * 9


def test_analyze_lognormal_mode_near_mu():
    mu, sd = 1.2, 0.8
    d = gen_synthetic(
        SyntheticConfig(shape="lognormal", log_mean=mu, log_sd=sd, n_sequences=150, seq_len=60, seed=12)
    )
    _, log_hist = analyze(d, bins=40)
    j = max(range(len(log_hist.counts)), key=lambda i: log_hist.counts[i])
    center = (log_hist.edges[j] + log_hist.edges[j + 1]) / 2
    assert abs(center - mu / math.log(10)) <= sd / math.log(10)


def test_scale_alignment_echo():
    rng = np.random.default_rng(123)
    lognormal = rng.lognormal(0.0, 1.5, 20000).tolist()
    uniform = rng.uniform(1.0, 2.0, 20000).tolist()
    lin, log = ScaleKind.linear(), ScaleKind.log10()

    def floor_rmse(values, scale):
        spec = TokenizerSpec("scale_bin", bin_fit(values, scale, 256), TimeUnit.HOUR)
        return reconstruction_rmse(spec, values)

    assert floor_rmse(lognormal, log) < floor_rmse(lognormal, lin)
    assert floor_rmse(uniform, lin) <= floor_rmse(uniform, log)
