"""Command-line surface: fit / encode / decode / analyze / bench / gen / stats.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error. Errors
print a single machine-parseable line `timetok: error[<kind>]: <message>` to
stderr. Every command is a pure function of its argv, input files, and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .bench import (
    STANDARD_PRESETS,
    SyntheticConfig,
    analyze,
    compare,
    fit_preset,
    gen_synthetic,
    report_csv,
    report_table,
)
from .codec_calendar import Resolution
from .core import TimeUnit, dataset_stats, load_dataset, save_dataset, validate_consistency
from .errors import TimetokError
from .template import (
    SPEC_FORMAT_VERSION,
    TemplateOrder,
    TokenizerSpec,
    build_manifest,
    fit_tokenizer,
    load_spec,
    manifest_json,
    parse_stream,
    render_sequence,
    save_spec,
)
from .transforms import ScaleKind, histogram_csv

_STRATEGY_FLAGS = {
    "numeric": "numeric",
    "byte": "byte",
    "cal-abs": "cal_abs",
    "cal-rel": "cal_rel",
    "bin": "scale_bin",
    "rsq": "rsq",
}
_ORDER_FLAGS = {"type-time": TemplateOrder.TYPE_TIME, "time-type": TemplateOrder.TIME_TYPE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract is exit 1
        raise UsageError(message)


def _scale(name: str) -> ScaleKind:
    return ScaleKind.log10() if name == "log" else ScaleKind.linear()


def _levels(text: str) -> tuple[int, ...]:
    try:
        levels = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"--levels expects comma-separated integers, got {text!r}") from None
    if not levels or any(k < 1 for k in levels):
        raise UsageError(f"--levels entries must be >= 1, got {text!r}")
    return levels


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _build_parser() -> _Parser:
    p = _Parser(prog="timetok", description=__doc__)
    p.add_argument("--version", action="version", version=f"timetok {__version__} (spec format {SPEC_FORMAT_VERSION})")
    sub = p.add_subparsers(dest="command", required=True)

    def add_data(sp, required=True):
        sp.add_argument("--data", required=required, help="dataset JSONL file")
        sp.add_argument("--unit", choices=[u.value for u in TimeUnit], required=required)

    sp = sub.add_parser("fit", help="fit a tokenizer spec and write it to a file")
    sp.add_argument("--strategy", choices=sorted(_STRATEGY_FLAGS), required=True)
    add_data(sp, required=False)
    sp.add_argument("--scale", choices=["linear", "log"], default="linear")
    sp.add_argument("--bins", type=int, default=256)
    sp.add_argument("--levels", default="64,64,64,64")
    sp.add_argument("--resolution", choices=[r.value for r in Resolution], default="second")
    sp.add_argument("--precision", type=int, default=6)
    sp.add_argument("--year-margin", type=int, default=2)
    sp.add_argument("--engine", choices=["dp", "lloyd"], default="dp")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="spec JSON output path")
    sp.add_argument("--manifest", help="also write the vocabulary manifest here")

    sp = sub.add_parser("encode", help="render datasets into token streams")
    sp.add_argument("--spec", required=True)
    add_data(sp, required=True)
    sp.add_argument("--order", choices=sorted(_ORDER_FLAGS), default="type-time")
    sp.add_argument("--split", choices=["train", "val", "test", "all"], default="all")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out", required=True, help="token-stream JSONL output path")

    sp = sub.add_parser("decode", help="parse token streams back into typed values")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--tokens", required=True, help="token-stream JSONL input path")
    sp.add_argument("--order", choices=sorted(_ORDER_FLAGS), default="type-time")
    sp.add_argument("--out", required=True, help="decoded JSONL output path")

    sp = sub.add_parser("analyze", help="histogram the inter-event gap distribution")
    add_data(sp)
    sp.add_argument("--bins", type=int, default=60)
    sp.add_argument("--out", help="CSV prefix; writes <out>.linear.csv and <out>.log.csv")

    sp = sub.add_parser("bench", help="codec-floor comparison across strategies")
    add_data(sp)
    sp.add_argument("--spec", action="append", default=[], help="fitted spec file (repeatable)")
    sp.add_argument("--presets", help="comma list of preset names, or 'all'")
    sp.add_argument("--split", choices=["train", "val", "test"], default="test")
    sp.add_argument("--engine", choices=["dp", "lloyd"], default="dp")
    sp.add_argument("--out", help="CSV output path")

    sp = sub.add_parser("gen", help="generate a deterministic synthetic dataset")
    sp.add_argument("--shape", choices=["lognormal", "spiky", "mixed"], default="lognormal")
    sp.add_argument("--n-seqs", type=int, default=100)
    sp.add_argument("--seq-len", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--unit", choices=[u.value for u in TimeUnit], default="hour")
    sp.add_argument("--log-mean", type=float, default=0.0)
    sp.add_argument("--log-sd", type=float, default=1.0)
    sp.add_argument("--atoms", default="1,7")
    sp.add_argument("--weights", default="0.5,0.5")
    sp.add_argument("--jitter", type=float, default=0.0)
    sp.add_argument("--mix-weight", type=float, default=0.5)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("stats", help="dataset statistics; optional interval consistency check")
    add_data(sp)
    sp.add_argument("--check-tol", type=float, help="warn on |interval - delta| > tol units")
    return p


def _cmd_fit(args) -> int:
    strategy = _STRATEGY_FLAGS[args.strategy]
    dataset = None
    if args.data is not None:
        if args.unit is None:
            raise UsageError("--unit is required when --data is given")
        dataset = load_dataset(args.data, TimeUnit(args.unit))
        unit = dataset.unit
    elif strategy in ("cal_abs", "scale_bin", "rsq"):
        raise UsageError(f"--strategy {args.strategy} needs --data/--unit to fit")
    elif args.unit is None:
        raise UsageError("--unit is required")
    else:
        unit = TimeUnit(args.unit)
    spec = fit_tokenizer(
        strategy,
        unit=unit,
        dataset=dataset,
        scale=_scale(args.scale),
        bins=args.bins,
        levels=_levels(args.levels),
        resolution=Resolution(args.resolution),
        precision=args.precision,
        year_margin=args.year_margin,
        engine=args.engine,
        seed=args.seed,
    )
    save_spec(spec, args.out)
    if args.manifest:
        Path(args.manifest).write_text(manifest_json(build_manifest(spec)), encoding="utf-8")
    print(f"wrote {args.out} ({spec.strategy}, unit={spec.unit.value})")
    return 0


def _cmd_encode(args) -> int:
    spec = load_spec(args.spec)
    dataset = load_dataset(args.data, TimeUnit(args.unit))
    if dataset.unit is not spec.unit:
        raise TimetokError(f"dataset unit {dataset.unit.value} != spec unit {spec.unit.value}")
    order = _ORDER_FLAGS[args.order]
    seqs = dataset.all_sequences() if args.split == "all" else list(dataset.split(args.split))
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            streams = list(pool.map(lambda s: render_sequence(s, spec, order), seqs))
    else:
        streams = [render_sequence(s, spec, order) for s in seqs]
    with open(args.out, "w", encoding="utf-8") as fh:
        for stream in streams:
            fh.write(json.dumps({"tokens": stream}, ensure_ascii=False) + "\n")
    print(f"encoded {len(streams)} sequences -> {args.out}")
    return 0


def _cmd_decode(args) -> int:
    spec = load_spec(args.spec)
    order = _ORDER_FLAGS[args.order]
    out_lines = []
    with open(args.tokens, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            rec = json.loads(raw)
            events = parse_stream(rec["tokens"], spec, order)
            out_lines.append(
                json.dumps(
                    {"type_text": [t for t, _ in events], "value": [v for _, v in events]},
                    ensure_ascii=False,
                )
            )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out_lines) + ("\n" if out_lines else ""))
    print(f"decoded {len(out_lines)} sequences -> {args.out}")
    return 0


def _cmd_analyze(args) -> int:
    dataset = load_dataset(args.data, TimeUnit(args.unit))
    lin, log = analyze(dataset, bins=args.bins)
    print(f"{dataset.name}: {lin.total()} gaps, linear range [{lin.edges[0]:.6g}, {lin.edges[-1]:.6g}]")
    print(f"log10 range [{log.edges[0]:.6g}, {log.edges[-1]:.6g}]")
    if args.out:
        Path(args.out + ".linear.csv").write_text(histogram_csv(lin), encoding="utf-8")
        Path(args.out + ".log.csv").write_text(histogram_csv(log), encoding="utf-8")
        print(f"wrote {args.out}.linear.csv and {args.out}.log.csv")
    return 0


def _cmd_bench(args) -> int:
    dataset = load_dataset(args.data, TimeUnit(args.unit))
    specs: list[TokenizerSpec] = [load_spec(path) for path in args.spec]
    if args.presets:
        names = list(STANDARD_PRESETS) if args.presets == "all" else args.presets.split(",")
        for name in names:
            specs.append(fit_preset(name.strip(), dataset))
    if not specs:
        raise UsageError("bench needs --spec files and/or --presets")
    report = compare(specs, dataset, split=args.split)
    sys.stdout.write(report_table(report))
    if args.out:
        Path(args.out).write_text(report_csv(report), encoding="utf-8")
        print(f"wrote {args.out}")
    return 0


def _cmd_gen(args) -> int:
    cfg = SyntheticConfig(
        shape=args.shape,
        n_sequences=args.n_seqs,
        seq_len=args.seq_len,
        seed=args.seed,
        unit=TimeUnit(args.unit),
        log_mean=args.log_mean,
        log_sd=args.log_sd,
        atoms=_floats(args.atoms),
        atom_weights=_floats(args.weights),
        jitter=args.jitter,
        mix_weight=args.mix_weight,
    )
    dataset = gen_synthetic(cfg)
    save_dataset(dataset, args.out)
    stats = dataset_stats(dataset)
    print(f"wrote {args.out}: {stats.render()}")
    return 0


def _cmd_stats(args) -> int:
    dataset = load_dataset(args.data, TimeUnit(args.unit))
    print(dataset_stats(dataset).render())
    if args.check_tol is not None:
        n_warn = 0
        for seq in dataset.all_sequences():
            n_warn += len(validate_consistency(seq, dataset.unit, args.check_tol))
        print(f"consistency: {n_warn} interval/timestamp mismatches at tol={args.check_tol}")
    return 0


_COMMANDS = {
    "fit": _cmd_fit,
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "analyze": _cmd_analyze,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
    "stats": _cmd_stats,
}


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"timetok: error[usage]: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except TimetokError as exc:
        print(f"timetok: error[data]: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"timetok: error[data]: {exc}", file=sys.stderr)
        return 2
    except SystemExit:
        raise
    except Exception as exc:  # anything else is a bug, not bad input
        print(f"timetok: error[internal]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
