#!/usr/bin/env python3
"""Regenerate the golden parity fixtures from the primary implementation.

Everything the TypeScript tests compare against comes from here: CLI-produced
spec/manifest/stream/decode files plus library-level probe tables. Run from
anywhere; writes into ../fixtures. Requires the primary package installed.
"""

from __future__ import annotations

import json
import struct
import subprocess
import sys
from pathlib import Path

import numpy as np

from timetok.bench import STANDARD_PRESETS
from timetok.codec_calendar import EPOCH_MAX, EPOCH_MIN
from timetok.template import decode_value, encode_value, load_spec
from timetok.transforms import _exp10_portable, _log10_portable
from timetok.codec_simple import encode_numeric

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
PRESET_FLAGS = {
    "numeric": ["--strategy", "numeric", "--precision", "6"],
    "byte": ["--strategy", "byte"],
    "cal_abs_day": ["--strategy", "cal-abs", "--resolution", "day"],
    "cal_abs_second": ["--strategy", "cal-abs", "--resolution", "second"],
    "cal_rel_day": ["--strategy", "cal-rel", "--resolution", "day"],
    "cal_rel_second": ["--strategy", "cal-rel", "--resolution", "second"],
    "bin_linear_256": ["--strategy", "bin", "--scale", "linear", "--bins", "256"],
    "bin_log_256": ["--strategy", "bin", "--scale", "log", "--bins", "256"],
    "rsq_linear_l1": ["--strategy", "rsq", "--scale", "linear", "--levels", "256"],
    "rsq_linear_l4": ["--strategy", "rsq", "--scale", "linear", "--levels", "64,64,64,64"],
    "rsq_log_l1": ["--strategy", "rsq", "--scale", "log", "--levels", "256"],
    "rsq_log_l4": ["--strategy", "rsq", "--scale", "log", "--levels", "64,64,64,64"],
}


def cli(*args: str) -> None:
    subprocess.run([sys.executable, "-m", "timetok.cli", *args], check=True, capture_output=True)


def f64_hex(x: float) -> str:
    return struct.pack(">d", x).hex()


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    data = FIXTURES / "dataset.jsonl"
    cli("gen", "--shape", "mixed", "--n-seqs", "120", "--seq-len", "10", "--seed", "424242",
        "--unit", "hour", "--log-mean", "0.3", "--log-sd", "1.4",
        "--atoms", "0.25,2,36", "--weights", "0.5,0.3,0.2", "--jitter", "0.03",
        "--out", str(data))

    assert set(PRESET_FLAGS) == set(STANDARD_PRESETS)
    for name, flags in PRESET_FLAGS.items():
        cli("fit", *flags, "--unit", "hour", "--data", str(data),
            "--out", str(FIXTURES / f"spec_{name}.json"),
            "--manifest", str(FIXTURES / f"manifest_{name}.json"))
        cli("encode", "--spec", str(FIXTURES / f"spec_{name}.json"), "--data", str(data),
            "--unit", "hour", "--order", "type-time", "--out", str(FIXTURES / f"stream_{name}.jsonl"))
        cli("decode", "--spec", str(FIXTURES / f"spec_{name}.json"),
            "--tokens", str(FIXTURES / f"stream_{name}.jsonl"),
            "--order", "type-time", "--out", str(FIXTURES / f"decoded_{name}.jsonl"))

    # library-level probe tables: wider value coverage than the dataset
    rng = np.random.default_rng(20240607)
    unit_probes = [0.0, 1e-9, 0.5, 1.0, 1e6] + rng.lognormal(0.0, 2.0, 995).tolist()
    epoch_probes = [int(EPOCH_MIN), int(EPOCH_MAX) - 1] + [
        int(t) for t in rng.integers(EPOCH_MIN, EPOCH_MAX, 998)
    ]
    values = {}
    for name in PRESET_FLAGS:
        spec = load_spec(FIXTURES / f"spec_{name}.json")
        if spec.strategy == "cal_abs":
            probes = [float(t) for t in epoch_probes]
        elif spec.strategy == "cal_rel":
            # stay under the 99-fixed-year span ceiling
            probes = [min(v * 3600.0, 3.0e9) for v in unit_probes]
        else:
            probes = [float(v) for v in unit_probes]
        rows = []
        for v in probes:
            tokens = encode_value(spec, v)
            rows.append({"v": f64_hex(v), "tokens": tokens, "decoded": f64_hex(decode_value(spec, tokens))})
        values[name] = rows
    (FIXTURES / "values.json").write_text(json.dumps(values), encoding="utf-8")

    # math mirrors: pin the portable log10/exp10 and the fixed-point formatter
    xs = np.concatenate([
        np.exp(rng.uniform(-35, 35, 3000)),
        np.array([1e-6, 1.0, 0.999999 + 1e-6, 10.0, 117.49]),
    ])
    math_rows = {
        "log10": [[f64_hex(float(x)), f64_hex(_log10_portable(float(x)))] for x in xs],
        "exp10": [
            [f64_hex(float(u)), f64_hex(_exp10_portable(float(u)))]
            for u in np.concatenate([rng.uniform(-25, 25, 3000), np.arange(-30.0, 31.0)])
        ],
    }
    (FIXTURES / "math.json").write_text(json.dumps(math_rows), encoding="utf-8")

    fmt_vals = [0.0, 2.5, 3.5, 0.0078125, 0.0234375, 123456.5, 0.1, 1 / 3] + rng.lognormal(0, 3, 500).tolist()
    fmt_rows = []
    for v in fmt_vals:
        for p in (0, 2, 6, 12):
            fmt_rows.append([f64_hex(float(v)), p, encode_numeric(float(v), p)])
    (FIXTURES / "fixed_format.json").write_text(json.dumps(fmt_rows), encoding="utf-8")
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
