"""Domain types for event sequences plus JSONL ingestion and split statistics.

Dataset files are JSONL, one sequence per line:

    {"split": "train", "type_text": [...], "timestamp": [...], "interval": [...]}

`timestamp` holds integer epoch seconds UTC, `interval` the pre-computed gap
to the previous event in dataset units (first entry must be 0). The unit is
never inferred from the file; callers supply it.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import ParseError, ValidationError

__all__ = [
    "TimeUnit",
    "Event",
    "EventSequence",
    "Dataset",
    "DatasetStats",
    "SPLITS",
    "load_dataset",
    "save_dataset",
    "dataset_stats",
    "validate_consistency",
]

SPLITS = ("train", "val", "test")


class TimeUnit(Enum):
    """Unit the dataset's interval column is measured in (month is fixed at 30 days)."""

    SECOND = "second"
    HOUR = "hour"
    DAY = "day"
    WEEK = "week"
    MONTH = "month"

    @property
    def seconds_per_unit(self) -> int:
        return _SECONDS_PER_UNIT[self]


_SECONDS_PER_UNIT = {
    TimeUnit.SECOND: 1,
    TimeUnit.HOUR: 3600,
    TimeUnit.DAY: 86400,
    TimeUnit.WEEK: 604800,
    TimeUnit.MONTH: 2592000,
}


@dataclass(frozen=True)
class Event:
    """One event: its textual type, absolute time, and gap to the previous event."""

    type_text: str
    timestamp_s: int
    interval_units: float

    def __post_init__(self):
        if not self.type_text:
            raise ValidationError("type_text must be non-empty")
        if not isinstance(self.timestamp_s, int):
            raise ValidationError(f"timestamp_s must be an integer, got {self.timestamp_s!r}")
        if not math.isfinite(self.interval_units) or self.interval_units < 0:
            raise ValidationError(f"interval_units must be finite and >= 0, got {self.interval_units!r}")


@dataclass(frozen=True)
class EventSequence:
    """Ordered events with non-decreasing timestamps; the first interval is 0."""

    events: tuple[Event, ...]

    def __post_init__(self):
        if len(self.events) == 0:
            raise ValidationError("an event sequence needs at least one event")
        if self.events[0].interval_units != 0.0:
            raise ValidationError(
                f"first event must have interval 0, got {self.events[0].interval_units!r}"
            )
        for i in range(1, len(self.events)):
            if self.events[i].timestamp_s < self.events[i - 1].timestamp_s:
                raise ValidationError(
                    f"timestamps must be non-decreasing (event {i}: "
                    f"{self.events[i].timestamp_s} < {self.events[i - 1].timestamp_s})"
                )

    def __len__(self) -> int:
        return len(self.events)

    def intervals(self) -> list[float]:
        return [e.interval_units for e in self.events]

    def timestamps(self) -> list[int]:
        return [e.timestamp_s for e in self.events]

    def types(self) -> list[str]:
        return [e.type_text for e in self.events]


@dataclass(frozen=True)
class Dataset:
    """Named dataset with one TimeUnit and train/val/test sequence lists."""

    name: str
    unit: TimeUnit
    train: tuple[EventSequence, ...] = ()
    val: tuple[EventSequence, ...] = ()
    test: tuple[EventSequence, ...] = ()

    def split(self, name: str) -> tuple[EventSequence, ...]:
        if name not in SPLITS:
            raise ValidationError(f"unknown split {name!r}, expected one of {SPLITS}")
        return getattr(self, name)

    def all_sequences(self) -> list[EventSequence]:
        return list(self.train) + list(self.val) + list(self.test)


@dataclass(frozen=True)
class DatasetStats:
    n_types: int
    n_events: int
    n_seqs: int
    split_sizes: tuple[int, int, int]
    avg_seq_len: float

    def render(self) -> str:
        tr, va, te = self.split_sizes
        return (
            f"types={self.n_types} events={self.n_events} seqs={self.n_seqs} "
            f"split={tr}/{va}/{te} avg_len={self.avg_seq_len:.2f}"
        )


def _require(obj: dict, key: str, line: int):
    if key not in obj:
        raise ValidationError(f"missing field {key!r} on line {line}")
    return obj[key]


def _sequence_from_record(rec: dict, line: int) -> tuple[str, EventSequence]:
    split = _require(rec, "split", line)
    if split not in SPLITS:
        raise ValidationError(f"field 'split' must be one of {SPLITS}, got {split!r} on line {line}")
    types = _require(rec, "type_text", line)
    stamps = _require(rec, "timestamp", line)
    gaps = _require(rec, "interval", line)
    if not (isinstance(types, list) and isinstance(stamps, list) and isinstance(gaps, list)):
        raise ValidationError(f"type_text/timestamp/interval must be arrays on line {line}")
    if not (len(types) == len(stamps) == len(gaps)):
        raise ValidationError(
            f"array lengths differ on line {line}: "
            f"type_text={len(types)} timestamp={len(stamps)} interval={len(gaps)}"
        )
    events = []
    for i, (ty, ts, iv) in enumerate(zip(types, stamps, gaps)):
        if not isinstance(ty, str) or not ty:
            raise ValidationError(f"field 'type_text[{i}]' must be a non-empty string on line {line}")
        if isinstance(ts, bool) or not isinstance(ts, int):
            raise ValidationError(f"field 'timestamp[{i}]' must be an integer on line {line}")
        if isinstance(iv, bool) or not isinstance(iv, (int, float)):
            raise ValidationError(f"field 'interval[{i}]' must be a number on line {line}")
        iv = float(iv)
        if not math.isfinite(iv) or iv < 0:
            raise ValidationError(f"field 'interval[{i}]' must be finite and >= 0 on line {line}")
        events.append(Event(ty, ts, iv))
    try:
        seq = EventSequence(tuple(events))
    except ValidationError as exc:
        raise ValidationError(f"{exc} on line {line}") from None
    return split, seq


def load_dataset(path: str | Path, unit: TimeUnit, name: str | None = None) -> Dataset:
    """Load and validate a JSONL dataset file; every invariant is enforced."""
    path = Path(path)
    buckets: dict[str, list[EventSequence]] = {s: [] for s in SPLITS}
    with path.open("r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed JSON: {exc.msg}", line=line_no) from None
            if not isinstance(rec, dict):
                raise ParseError("each line must be a JSON object", line=line_no)
            split, seq = _sequence_from_record(rec, line_no)
            buckets[split].append(seq)
    return Dataset(
        name=name or path.stem,
        unit=unit,
        train=tuple(buckets["train"]),
        val=tuple(buckets["val"]),
        test=tuple(buckets["test"]),
    )


def _record_json(split: str, seq: EventSequence) -> str:
    rec = {
        "split": split,
        "type_text": seq.types(),
        "timestamp": seq.timestamps(),
        "interval": seq.intervals(),
    }
    return json.dumps(rec, ensure_ascii=False)


def save_dataset(d: Dataset, path: str | Path) -> None:
    """Write the canonical JSONL form; loading it back reproduces identical fields."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for split in SPLITS:
            for seq in d.split(split):
                fh.write(_record_json(split, seq) + "\n")


def dataset_stats(d: Dataset) -> DatasetStats:
    """Exact counts over all splits; avg length is 0 (with a warning) when empty."""
    seqs = d.all_sequences()
    n_seqs = len(seqs)
    n_events = sum(len(s) for s in seqs)
    types = set()
    for s in seqs:
        types.update(s.types())
    if n_seqs == 0:
        warnings.warn("dataset has no sequences; avg_seq_len reported as 0")
        avg = 0.0
    else:
        avg = n_events / n_seqs
    return DatasetStats(
        n_types=len(types),
        n_events=n_events,
        n_seqs=n_seqs,
        split_sizes=(len(d.train), len(d.val), len(d.test)),
        avg_seq_len=avg,
    )


def validate_consistency(seq: EventSequence, unit: TimeUnit, tol: float) -> list[str]:
    """Cross-check stored intervals against timestamp differences.

    Returns one warning string per event whose interval disagrees with the
    timestamp delta by more than `tol` units. Mismatches are warnings rather
    than errors because shipped datasets carry pre-rounded intervals.
    """
    if tol < 0:
        raise ValidationError(f"tol must be >= 0, got {tol}")
    spu = unit.seconds_per_unit
    out = []
    for i in range(1, len(seq.events)):
        dt = seq.events[i].timestamp_s - seq.events[i - 1].timestamp_s
        err = abs(seq.events[i].interval_units * spu - dt)
        if err > tol * spu:
            out.append(
                f"event {i}: interval {seq.events[i].interval_units!r} {unit.value}(s) "
                f"vs timestamp delta {dt} s (off by {err:.3f} s)"
            )
    return out
