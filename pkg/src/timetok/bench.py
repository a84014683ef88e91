"""Benchmark engine: codec-floor RMSE, token accounting, distribution analysis.

The quantitative metric here is reconstruction RMSE, i.e. the quantization
error of decode(encode(v)) in dataset units. Reports label it "codec floor":
it bounds what any model using the tokenizer could achieve, and is not a
model-prediction error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .codec_quant import RSQ_LEVEL_PRESETS
from .core import Dataset, Event, EventSequence, TimeUnit
from .errors import DomainError, EmptyInputError, UnitMismatchError
from .codec_calendar import Resolution
from .template import TokenizerSpec, build_manifest, decode_value, encode_value, fit_tokenizer
from .transforms import Histogram, ScaleKind, histogram

__all__ = [
    "BenchRow",
    "BenchReport",
    "TokensPerValue",
    "SyntheticConfig",
    "STANDARD_PRESETS",
    "fit_preset",
    "tokens_per_value",
    "reconstruction_rmse",
    "gen_synthetic",
    "compare",
    "analyze",
    "report_csv",
    "report_table",
]

_GEN_EPOCH_BASE = 1577836800  # 2020-01-01T00:00:00Z


class TokensPerValue(NamedTuple):
    value: float
    estimate: bool


def tokens_per_value(spec: TokenizerSpec) -> TokensPerValue:
    """Tokens emitted per time value; the numeric strategy's ~4 is an estimate
    because the host tokenizer owns the actual fragmentation."""
    if spec.strategy == "numeric":
        return TokensPerValue(4.0, True)
    if spec.strategy == "byte":
        return TokensPerValue(4.0, False)
    if spec.strategy in ("cal_abs", "cal_rel"):
        return TokensPerValue(float(spec.params.resolution.n_fields), False)
    if spec.strategy == "scale_bin":
        return TokensPerValue(1.0, False)
    return TokensPerValue(float(spec.params.n_levels), False)


def reconstruction_rmse(spec: TokenizerSpec, values: Sequence[float]) -> float:
    """sqrt(mean((decode(encode(v)) - v)^2)) in dataset units.

    `values` are interval values in dataset units, except for cal_abs where
    they are absolute epoch seconds (its codec reads instants, not gaps);
    either way the errors are reported in dataset units.
    """
    if len(values) == 0:
        raise EmptyInputError("reconstruction_rmse requires at least one value")
    spu = spec.unit.seconds_per_unit
    total = 0.0
    for v in values:
        v = float(v)
        if spec.strategy == "cal_abs":
            err = (decode_value(spec, encode_value(spec, v)) - v) / spu
        elif spec.strategy == "cal_rel":
            delta_s = v * spu
            err = (decode_value(spec, encode_value(spec, delta_s)) - delta_s) / spu
        else:
            err = decode_value(spec, encode_value(spec, v)) - v
        total += err * err
    return math.sqrt(total / len(values))


# ----------------------------------------------------------------------------
# synthetic datasets


@dataclass(frozen=True)
class SyntheticConfig:
    """Deterministic generator settings; the seed fully determines the output."""

    shape: str = "lognormal"
    n_sequences: int = 100
    seq_len: int = 20
    seed: int = 0
    unit: TimeUnit = TimeUnit.HOUR
    log_mean: float = 0.0
    log_sd: float = 1.0
    atoms: tuple[float, ...] = (1.0, 7.0)
    atom_weights: tuple[float, ...] = (0.5, 0.5)
    jitter: float = 0.0
    mix_weight: float = 0.5
    type_alphabet: tuple[str, ...] = ("A", "B", "C", "D")

    def __post_init__(self):
        if self.shape not in ("lognormal", "spiky", "mixed"):
            raise DomainError(f"unknown shape {self.shape!r}")
        if self.n_sequences < 1 or self.seq_len < 1:
            raise DomainError("n_sequences and seq_len must be >= 1")
        if len(self.atoms) != len(self.atom_weights):
            raise DomainError("atoms and atom_weights must have equal length")
        if abs(sum(self.atom_weights) - 1.0) > 1e-9:
            raise DomainError(f"atom_weights must sum to 1, got {sum(self.atom_weights)}")
        if not 0.0 <= self.mix_weight <= 1.0:
            raise DomainError(f"mix_weight must be in [0, 1], got {self.mix_weight}")
        if any(a < 0 for a in self.atoms) or self.jitter < 0:
            raise DomainError("atoms and jitter must be >= 0")
        if not self.type_alphabet:
            raise DomainError("type_alphabet must be non-empty")


def _draw_interval(cfg: SyntheticConfig, rng: np.random.Generator) -> float:
    def lognormal() -> float:
        return float(rng.lognormal(cfg.log_mean, cfg.log_sd))

    def spiky() -> float:
        atom = cfg.atoms[int(rng.choice(len(cfg.atoms), p=cfg.atom_weights))]
        v = atom + (float(rng.uniform(-cfg.jitter, cfg.jitter)) if cfg.jitter else 0.0)
        return v if v > 0.0 else 0.0

    if cfg.shape == "lognormal":
        return lognormal()
    if cfg.shape == "spiky":
        return spiky()
    return lognormal() if rng.random() < cfg.mix_weight else spiky()


def gen_synthetic(cfg: SyntheticConfig) -> Dataset:
    """Generate train/val/test sequences with the configured gap distribution."""
    rng = np.random.default_rng(cfg.seed)
    spu = cfg.unit.seconds_per_unit
    seqs = []
    for s in range(cfg.n_sequences):
        acc = float(_GEN_EPOCH_BASE + s * 86400)
        events = []
        for i in range(cfg.seq_len):
            iv = 0.0 if i == 0 else _draw_interval(cfg, rng)
            acc += iv * spu
            ty = cfg.type_alphabet[int(rng.integers(len(cfg.type_alphabet)))]
            events.append(Event(ty, int(math.floor(acc)), iv))
        seqs.append(EventSequence(tuple(events)))
    n = cfg.n_sequences
    n_val = max(1, n // 10) if n >= 3 else 0
    n_test = max(1, n // 10) if n >= 3 else 0
    n_train = n - n_val - n_test
    return Dataset(
        name=f"synthetic-{cfg.shape}-{cfg.seed}",
        unit=cfg.unit,
        train=tuple(seqs[:n_train]),
        val=tuple(seqs[n_train : n_train + n_val]),
        test=tuple(seqs[n_train + n_val :]),
    )


# ----------------------------------------------------------------------------
# comparison reports


@dataclass(frozen=True)
class BenchRow:
    strategy: str
    scale: str
    levels_or_bins: str
    tokens_per_value: float
    tokens_estimate: bool
    vocab_added: int
    reconstruction_rmse: float


@dataclass(frozen=True)
class BenchReport:
    dataset: str
    split: str
    unit: TimeUnit
    rows: tuple[BenchRow, ...]


def _spec_labels(spec: TokenizerSpec) -> tuple[str, str]:
    if spec.strategy in ("numeric", "byte"):
        return "-", f"p{spec.params.precision}" if spec.strategy == "numeric" else "-"
    if spec.strategy in ("cal_abs", "cal_rel"):
        return "-", spec.params.resolution.value
    if spec.strategy == "scale_bin":
        return spec.params.scale.kind.value, str(spec.params.k)
    return spec.params.scale.kind.value, "-".join(str(cb.k) for cb in spec.params.levels)


def compare(specs: Sequence[TokenizerSpec], d: Dataset, split: str = "test") -> BenchReport:
    """One codec-floor row per spec, evaluated on the chosen split."""
    seqs = d.split(split)
    if not seqs:
        raise EmptyInputError(f"split {split!r} has no sequences")
    intervals = [v for seq in seqs for v in seq.intervals()]
    stamps = [float(t) for seq in seqs for t in seq.timestamps()]
    rows = []
    for spec in specs:
        if spec.unit is not d.unit:
            raise UnitMismatchError(
                f"spec unit {spec.unit.value} != dataset unit {d.unit.value}"
            )
        values = stamps if spec.strategy == "cal_abs" else intervals
        tpv = tokens_per_value(spec)
        scale, lob = _spec_labels(spec)
        rows.append(
            BenchRow(
                strategy=spec.strategy,
                scale=scale,
                levels_or_bins=lob,
                tokens_per_value=tpv.value,
                tokens_estimate=tpv.estimate,
                vocab_added=build_manifest(spec).count("strategy"),
                reconstruction_rmse=reconstruction_rmse(spec, values),
            )
        )
    return BenchReport(dataset=d.name, split=split, unit=d.unit, rows=tuple(rows))


def report_csv(report: BenchReport) -> str:
    lines = ["strategy,scale,levels_or_bins,tokens_per_value,vocab_added,reconstruction_rmse"]
    for r in report.rows:
        tpv = f"~{r.tokens_per_value:g}" if r.tokens_estimate else f"{r.tokens_per_value:g}"
        lines.append(f"{r.strategy},{r.scale},{r.levels_or_bins},{tpv},{r.vocab_added},{r.reconstruction_rmse!r}")
    return "\n".join(lines) + "\n"


def report_table(report: BenchReport) -> str:
    head = f"codec floor on {report.dataset} ({report.split} split, unit={report.unit.value})"
    cols = ["strategy", "scale", "levels/bins", "tokens", "vocab+", "rmse (codec floor)"]
    body = []
    for r in report.rows:
        tpv = f"~{r.tokens_per_value:g}" if r.tokens_estimate else f"{r.tokens_per_value:g}"
        body.append(
            [r.strategy, r.scale, r.levels_or_bins, tpv, str(r.vocab_added), f"{r.reconstruction_rmse:.6g}"]
        )
    widths = [max(len(c), *(len(row[i]) for row in body)) for i, c in enumerate(cols)]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    out = [head, fmt.format(*cols)]
    out += [fmt.format(*row) for row in body]
    return "\n".join(out) + "\n"


def analyze(d: Dataset, bins: int = 60) -> tuple[Histogram, Histogram]:
    """Linear- and log-scale histograms of the inter-event gaps.

    First-event intervals are structural zeros, not gaps, so they are left out.
    """
    gaps = [v for seq in d.all_sequences() for v in seq.intervals()[1:]]
    if not gaps:
        raise EmptyInputError("dataset has no inter-event gaps to analyze")
    return (
        histogram(gaps, bins, ScaleKind.linear()),
        histogram(gaps, bins, ScaleKind.log10()),
    )


# ----------------------------------------------------------------------------
# the standard strategy presets (one per report row)

STANDARD_PRESETS: dict[str, dict] = {
    "numeric": {"strategy": "numeric", "precision": 6},
    "byte": {"strategy": "byte"},
    "cal_abs_day": {"strategy": "cal_abs", "resolution": Resolution.DAY},
    "cal_abs_second": {"strategy": "cal_abs", "resolution": Resolution.SECOND},
    "cal_rel_day": {"strategy": "cal_rel", "resolution": Resolution.DAY},
    "cal_rel_second": {"strategy": "cal_rel", "resolution": Resolution.SECOND},
    "bin_linear_256": {"strategy": "scale_bin", "scale": ScaleKind.linear(), "bins": 256},
    "bin_log_256": {"strategy": "scale_bin", "scale": ScaleKind.log10(), "bins": 256},
    "rsq_linear_l1": {"strategy": "rsq", "scale": ScaleKind.linear(), "levels": RSQ_LEVEL_PRESETS["256"]},
    "rsq_linear_l4": {"strategy": "rsq", "scale": ScaleKind.linear(), "levels": RSQ_LEVEL_PRESETS["64-64-64-64"]},
    "rsq_log_l1": {"strategy": "rsq", "scale": ScaleKind.log10(), "levels": RSQ_LEVEL_PRESETS["256"]},
    "rsq_log_l4": {"strategy": "rsq", "scale": ScaleKind.log10(), "levels": RSQ_LEVEL_PRESETS["64-64-64-64"]},
}


def fit_preset(name: str, dataset: Dataset) -> TokenizerSpec:
    if name not in STANDARD_PRESETS:
        raise DomainError(f"unknown preset {name!r}, expected one of {sorted(STANDARD_PRESETS)}")
    kwargs = dict(STANDARD_PRESETS[name])
    return fit_tokenizer(kwargs.pop("strategy"), unit=dataset.unit, dataset=dataset, **kwargs)
