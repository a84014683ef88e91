"""Event templates, fitted tokenizer specs, vocabulary manifests, persistence.

Every event renders as

    <|begin_of_event|> <|type_prefix|> {type text} <|time_prefix|> {time tokens} <|end_of_event|>

(`time_type` order swaps the two payload blocks). The type text passes
through verbatim as a single stream element; splitting it into subwords is
the host tokenizer's job. Streams are lists of strings, so parsing is
positional and a type text can never collide with a marker.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from . import codec_calendar as cal
from . import codec_quant as quant
from . import codec_simple as simple
from .codec_quant import BinSpec, Codebook, RsqSpec
from .core import Dataset, EventSequence, TimeUnit
from .errors import (
    ChecksumMismatchError,
    DomainError,
    EmptyInputError,
    SpecFileError,
    TimetokError,
    TokenError,
    VersionMismatchError,
)
from .transforms import Scale, ScaleKind

__all__ = [
    "SPEC_FORMAT_VERSION",
    "STRATEGIES",
    "BEGIN_EVENT",
    "TYPE_PREFIX",
    "TIME_PREFIX",
    "END_EVENT",
    "STRUCTURAL_TOKENS",
    "TemplateOrder",
    "NumericParams",
    "ByteParams",
    "CalAbsParams",
    "CalRelParams",
    "TokenizerSpec",
    "VocabManifest",
    "fit_tokenizer",
    "encode_value",
    "decode_value",
    "payload_arity",
    "render_event",
    "render_sequence",
    "parse_stream",
    "build_manifest",
    "manifest_json",
    "save_spec",
    "load_spec",
    "spec_to_json",
]

SPEC_FORMAT_VERSION = "1"
STRATEGIES = ("numeric", "byte", "cal_abs", "cal_rel", "scale_bin", "rsq")

BEGIN_EVENT = "<|begin_of_event|>"
TYPE_PREFIX = "<|type_prefix|>"
TIME_PREFIX = "<|time_prefix|>"
END_EVENT = "<|end_of_event|>"
STRUCTURAL_TOKENS = (BEGIN_EVENT, TYPE_PREFIX, TIME_PREFIX, END_EVENT)


class TemplateOrder(Enum):
    TYPE_TIME = "type_time"
    TIME_TYPE = "time_type"


@dataclass(frozen=True)
class NumericParams:
    precision: int = 6

    def __post_init__(self):
        if not 0 <= self.precision <= 17:
            raise DomainError(f"precision must be in [0, 17], got {self.precision}")


@dataclass(frozen=True)
class ByteParams:
    pass


@dataclass(frozen=True)
class CalAbsParams:
    resolution: cal.Resolution
    year_lo: int
    year_hi: int

    def __post_init__(self):
        if not 1900 <= self.year_lo <= self.year_hi <= 2199:
            raise DomainError(
                f"fitted year range [{self.year_lo}, {self.year_hi}] outside [1900, 2199]"
            )


@dataclass(frozen=True)
class CalRelParams:
    resolution: cal.Resolution


Params = NumericParams | ByteParams | CalAbsParams | CalRelParams | BinSpec | RsqSpec

_PARAM_TYPES = {
    "numeric": NumericParams,
    "byte": ByteParams,
    "cal_abs": CalAbsParams,
    "cal_rel": CalRelParams,
    "scale_bin": BinSpec,
    "rsq": RsqSpec,
}


@dataclass(frozen=True)
class TokenizerSpec:
    """A fitted, serializable tokenizer: strategy, parameters, and data unit."""

    strategy: str
    params: Params
    unit: TimeUnit
    version: str = SPEC_FORMAT_VERSION

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise SpecFileError(f"unknown strategy {self.strategy!r}, expected one of {STRATEGIES}")
        want = _PARAM_TYPES[self.strategy]
        if not isinstance(self.params, want):
            raise SpecFileError(
                f"strategy {self.strategy!r} needs {want.__name__} params, got {type(self.params).__name__}"
            )


def fit_tokenizer(
    strategy: str,
    *,
    unit: TimeUnit,
    dataset: Dataset | None = None,
    scale: ScaleKind | None = None,
    bins: int = 256,
    levels=(64, 64, 64, 64),
    resolution: cal.Resolution = cal.Resolution.SECOND,
    precision: int = 6,
    year_margin: int = 2,
    engine: str = "dp",
    seed: int = 0,
) -> TokenizerSpec:
    """Build a TokenizerSpec, fitting data-driven strategies on the train split.

    All train intervals participate in the fit, including the structural zero
    on every sequence's first event.
    """
    if strategy == "numeric":
        return TokenizerSpec("numeric", NumericParams(precision), unit)
    if strategy == "byte":
        return TokenizerSpec("byte", ByteParams(), unit)
    if strategy == "cal_rel":
        return TokenizerSpec("cal_rel", CalRelParams(resolution), unit)

    if dataset is None:
        raise EmptyInputError(f"strategy {strategy!r} needs training data to fit")
    if dataset.unit is not unit:
        raise DomainError(f"dataset unit {dataset.unit.value} != requested unit {unit.value}")
    if len(dataset.train) == 0:
        raise EmptyInputError("training split is empty")

    if strategy == "cal_abs":
        years = []
        for seq in dataset.train:
            years.append(cal.civil_from_epoch(seq.events[0].timestamp_s).year)
            years.append(cal.civil_from_epoch(seq.events[-1].timestamp_s).year)
        lo = max(1900, min(years) - year_margin)
        hi = min(2199, max(years) + year_margin)
        return TokenizerSpec("cal_abs", CalAbsParams(resolution, lo, hi), unit)

    train_values = [v for seq in dataset.train for v in seq.intervals()]
    if scale is None:
        scale = ScaleKind.linear()
    if strategy == "scale_bin":
        return TokenizerSpec("scale_bin", quant.bin_fit(train_values, scale, bins), unit)
    if strategy == "rsq":
        return TokenizerSpec("rsq", quant.rsq_fit(train_values, scale, list(levels), engine=engine, seed=seed), unit)
    raise SpecFileError(f"unknown strategy {strategy!r}")


# ----------------------------------------------------------------------------
# value-level encode/decode (the per-strategy time payload)


def payload_arity(spec: TokenizerSpec) -> int:
    """Number of stream elements the time payload occupies for one event."""
    if spec.strategy in ("numeric", "scale_bin"):
        return 1
    if spec.strategy == "byte":
        return 4
    if spec.strategy in ("cal_abs", "cal_rel"):
        return spec.params.resolution.n_fields
    return spec.params.n_levels


def encode_value(spec: TokenizerSpec, v: float) -> list[str]:
    """Encode one time value. Calendar strategies read seconds (absolute epoch
    for cal_abs, gap for cal_rel); everything else reads dataset units."""
    if spec.strategy == "numeric":
        return [simple.encode_numeric(v, spec.params.precision)]
    if spec.strategy == "byte":
        return [t.literal for t in simple.encode_bytes(v)]
    if spec.strategy == "cal_abs":
        return cal.encode_abs(int(math.floor(v)), spec.params.resolution)
    if spec.strategy == "cal_rel":
        return cal.encode_rel(v, spec.params.resolution)
    if spec.strategy == "scale_bin":
        return [quant.bin_encode(v, spec.params)]
    return quant.rsq_encode(v, spec.params)


def decode_value(spec: TokenizerSpec, payload) -> float:
    """Inverse of encode_value, up to each codec's documented loss.

    Returns dataset units for numeric/byte/bin/rsq, whole seconds for
    cal_rel, and epoch seconds for cal_abs.
    """
    if spec.strategy == "numeric":
        if len(payload) != 1:
            raise TokenError(f"numeric payload must be 1 element, got {len(payload)}")
        return simple.decode_numeric(payload[0])
    if spec.strategy == "byte":
        return simple.decode_bytes(payload)
    if spec.strategy == "cal_abs":
        return float(cal.decode_abs(payload, spec.params.resolution))
    if spec.strategy == "cal_rel":
        return float(cal.decode_rel(payload, spec.params.resolution))
    if spec.strategy == "scale_bin":
        if len(payload) != 1:
            raise TokenError(f"bin payload must be 1 token, got {len(payload)}")
        return quant.bin_decode(payload[0], spec.params)
    return quant.rsq_decode(payload, spec.params)


# ----------------------------------------------------------------------------
# event-stream rendering and parsing


def render_event(type_text: str, time_tokens, order: TemplateOrder) -> list[str]:
    if order is TemplateOrder.TYPE_TIME:
        return [BEGIN_EVENT, TYPE_PREFIX, type_text, TIME_PREFIX, *time_tokens, END_EVENT]
    return [BEGIN_EVENT, TIME_PREFIX, *time_tokens, TYPE_PREFIX, type_text, END_EVENT]


def event_time_value(spec: TokenizerSpec, seq: EventSequence, i: int) -> float:
    """The raw value the strategy encodes for event i of a sequence."""
    if spec.strategy == "cal_abs":
        return float(seq.events[i].timestamp_s)
    if spec.strategy == "cal_rel":
        if i == 0:
            return 0.0
        return float(seq.events[i].timestamp_s - seq.events[i - 1].timestamp_s)
    return seq.events[i].interval_units


def render_sequence(
    seq: EventSequence, spec: TokenizerSpec, order: TemplateOrder = TemplateOrder.TYPE_TIME
) -> list[str]:
    out: list[str] = []
    for i, ev in enumerate(seq.events):
        try:
            time_tokens = encode_value(spec, event_time_value(spec, seq, i))
        except TimetokError as exc:
            raise type(exc)(f"event {i}: {exc}") from None
        out.extend(render_event(ev.type_text, time_tokens, order))
    return out


def _expect(stream, i: int, token: str):
    if i >= len(stream):
        raise TokenError(f"truncated event: expected {token}", offset=len(stream))
    if stream[i] != token:
        raise TokenError(f"expected {token}, got {stream[i]!r}", offset=i)


def parse_stream(
    stream, spec: TokenizerSpec, order: TemplateOrder = TemplateOrder.TYPE_TIME
) -> list[tuple[str, float]]:
    """Recover (type_text, decoded time value) pairs from a rendered stream."""
    arity = payload_arity(spec)
    out: list[tuple[str, float]] = []
    i = 0
    n = len(stream)
    while i < n:
        _expect(stream, i, BEGIN_EVENT)
        if order is TemplateOrder.TYPE_TIME:
            _expect(stream, i + 1, TYPE_PREFIX)
            if i + 2 >= n:
                raise TokenError("truncated event: missing type text", offset=n)
            type_text = stream[i + 2]
            _expect(stream, i + 3, TIME_PREFIX)
            pay_at = i + 4
            payload = stream[pay_at : pay_at + arity]
        else:
            _expect(stream, i + 1, TIME_PREFIX)
            pay_at = i + 2
            payload = stream[pay_at : pay_at + arity]
            _expect(stream, pay_at + arity, TYPE_PREFIX)
            if pay_at + arity + 1 >= n:
                raise TokenError("truncated event: missing type text", offset=n)
            type_text = stream[pay_at + arity + 1]
        if len(payload) < arity:
            raise TokenError(f"truncated time payload: expected {arity} tokens", offset=n)
        end_at = (pay_at + arity) if order is TemplateOrder.TYPE_TIME else (pay_at + arity + 2)
        _expect(stream, end_at, END_EVENT)
        try:
            value = decode_value(spec, payload)
        except TimetokError as exc:
            raise TokenError(f"event {len(out)}: {exc}", offset=pay_at) from None
        out.append((type_text, value))
        i = end_at + 1
    return out


# ----------------------------------------------------------------------------
# vocabulary manifests


@dataclass(frozen=True)
class VocabManifest:
    """Ordered special tokens a strategy adds to a host vocabulary."""

    tokens: tuple[str, ...]
    counts: tuple[tuple[str, int], ...]

    def count(self, category: str) -> int:
        return dict(self.counts)[category]


def _calendar_tokens(params) -> list[str]:
    res_fields = params.resolution.n_fields
    out: list[str] = []
    if isinstance(params, CalAbsParams):
        out += [f"<|year_{y:04d}|>" for y in range(params.year_lo, params.year_hi + 1)]
        ranges = [("month", 1, 12), ("day", 1, 31), ("hour", 0, 23), ("min", 0, 59), ("sec", 0, 59)]
    else:
        out += [f"<|year_{y:02d}|>" for y in range(0, 100)]
        ranges = [("month", 0, 12), ("day", 0, 30), ("hour", 0, 23), ("min", 0, 59), ("sec", 0, 59)]
    for name, lo, hi in ranges[: res_fields - 1]:
        out += [f"<|{name}_{v:02d}|>" for v in range(lo, hi + 1)]
    return out


def build_manifest(spec: TokenizerSpec) -> VocabManifest:
    """Structural tokens plus the strategy's own token inventory, in stable order."""
    strategy_tokens: list[str] = []
    if spec.strategy == "byte":
        strategy_tokens = [t.literal for t in simple.BYTE_TOKENS]
    elif spec.strategy == "scale_bin":
        strategy_tokens = [f"<|bin_{j:03d}|>" for j in range(spec.params.k)]
    elif spec.strategy == "rsq":
        for cb in spec.params.levels:
            strategy_tokens += [quant.rsq_token(cb.level, i) for i in range(cb.k)]
    elif spec.strategy in ("cal_abs", "cal_rel"):
        strategy_tokens = _calendar_tokens(spec.params)
    tokens = list(STRUCTURAL_TOKENS) + strategy_tokens
    if len(set(tokens)) != len(tokens):
        raise SpecFileError("manifest produced duplicate token literals")
    return VocabManifest(
        tokens=tuple(tokens),
        counts=(("structural", len(STRUCTURAL_TOKENS)), ("strategy", len(strategy_tokens))),
    )


def manifest_json(manifest: VocabManifest) -> str:
    obj = {"tokens": list(manifest.tokens), "counts": dict(manifest.counts)}
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------------------
# persistence


def _scale_to_obj(s: ScaleKind) -> dict:
    return {"kind": s.kind.value, "epsilon": float(s.epsilon)}


def _scale_from_obj(obj) -> ScaleKind:
    try:
        return ScaleKind(Scale(obj["kind"]), float(obj["epsilon"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFileError(f"bad scale object: {exc}") from None


def _params_to_obj(spec: TokenizerSpec) -> dict:
    p = spec.params
    if isinstance(p, NumericParams):
        return {"precision": p.precision}
    if isinstance(p, ByteParams):
        return {}
    if isinstance(p, CalAbsParams):
        return {"resolution": p.resolution.value, "year_lo": p.year_lo, "year_hi": p.year_hi}
    if isinstance(p, CalRelParams):
        return {"resolution": p.resolution.value}
    if isinstance(p, BinSpec):
        return {"scale": _scale_to_obj(p.scale), "k": p.k, "lo": float(p.lo), "hi": float(p.hi)}
    return {
        "scale": _scale_to_obj(p.scale),
        "levels": [[float(c) for c in cb.centroids] for cb in p.levels],
    }


def _params_from_obj(strategy: str, obj) -> Params:
    try:
        if strategy == "numeric":
            return NumericParams(int(obj["precision"]))
        if strategy == "byte":
            return ByteParams()
        if strategy == "cal_abs":
            return CalAbsParams(cal.Resolution(obj["resolution"]), int(obj["year_lo"]), int(obj["year_hi"]))
        if strategy == "cal_rel":
            return CalRelParams(cal.Resolution(obj["resolution"]))
        if strategy == "scale_bin":
            return BinSpec(_scale_from_obj(obj["scale"]), int(obj["k"]), float(obj["lo"]), float(obj["hi"]))
        if strategy == "rsq":
            levels = tuple(
                Codebook(level=i, centroids=tuple(float(c) for c in row))
                for i, row in enumerate(obj["levels"])
            )
            return RsqSpec(_scale_from_obj(obj["scale"]), levels)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFileError(f"bad params for strategy {strategy!r}: {exc}") from None
    raise SpecFileError(f"unknown strategy {strategy!r}")


def _canonical(node):
    """Floats become IEEE-754 bit strings so the checksum is runtime-neutral."""
    if isinstance(node, float):
        return "f:" + struct.pack(">d", node).hex()
    if isinstance(node, dict):
        return {k: _canonical(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_canonical(v) for v in node]
    return node


def _checksum(body: dict) -> str:
    blob = json.dumps(_canonical(body), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(blob.encode("utf-8")).hexdigest()


def spec_to_json(spec: TokenizerSpec) -> str:
    body = {
        "version": spec.version,
        "strategy": spec.strategy,
        "unit": spec.unit.value,
        "params": _params_to_obj(spec),
    }
    body["checksum"] = _checksum(body)
    return json.dumps(body, indent=2) + "\n"


def save_spec(spec: TokenizerSpec, path: str | Path) -> None:
    Path(path).write_text(spec_to_json(spec), encoding="utf-8")


def load_spec(path: str | Path) -> TokenizerSpec:
    """Load a spec file, verifying version and checksum before building params."""
    try:
        body = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"spec file is not valid JSON: {exc.msg}") from None
    if not isinstance(body, dict):
        raise SpecFileError("spec file must hold a JSON object")
    for key in ("version", "strategy", "unit", "params", "checksum"):
        if key not in body:
            raise SpecFileError(f"spec file missing key {key!r}")
    if body["version"] != SPEC_FORMAT_VERSION:
        raise VersionMismatchError(
            f"spec version {body['version']!r} != supported {SPEC_FORMAT_VERSION!r}"
        )
    stored = body["checksum"]
    expected = _checksum({k: body[k] for k in ("version", "strategy", "unit", "params")})
    if stored != expected:
        raise ChecksumMismatchError(f"checksum mismatch: file has {stored}, content is {expected}")
    try:
        unit = TimeUnit(body["unit"])
    except ValueError as exc:
        raise SpecFileError(str(exc)) from None
    return TokenizerSpec(
        strategy=body["strategy"],
        params=_params_from_obj(body["strategy"], body["params"]),
        unit=unit,
        version=body["version"],
    )
