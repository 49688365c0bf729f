"""Command-line surface.

Subcommands: validate, match, eval, sweep, synth, scatter. Exit codes:
0 on success, 1 for validation errors (bad data, bad arguments), 2 for
I/O errors. Matching defaults are epsilon 0.005, 10 runs, criterion
label-prob.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .core import accuracy
from .errors import ValidationError
from .experiment import PairEntry, scatter_points, sweep
from .io import (LogFormat, read_manifest, read_predictions, read_synth_spec,
                 write_predictions, write_report)
from .matcher import (DEFAULT_EPSILON, DEFAULT_RUNS, MatchConfig,
                      MatchCriterion, TargetOrder, designate_pair,
                      repeat_match)
from .metrics import (BinningSpec, build_report, fraction_unmatched,
                      matched_accuracies)
from .rng import GENERATOR_NAME


def _add_match_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                        help="probability tolerance (default %(default)s)")
    parser.add_argument("--criterion", choices=[c.value for c in MatchCriterion],
                        default=MatchCriterion.LABEL_AND_PROBABILITY.value,
                        help="matching criterion (default %(default)s)")
    parser.add_argument("--runs", type=int, default=DEFAULT_RUNS,
                        help="number of runs with consecutive seeds (default %(default)s)")
    parser.add_argument("--seed", type=int, default=0,
                        help="base seed (default %(default)s)")
    parser.add_argument("--target-order", choices=[o.value for o in TargetOrder],
                        default=TargetOrder.FILE_ORDER.value,
                        help="target iteration order (default %(default)s)")
    parser.add_argument("--auto-swap", action="store_true",
                        help="swap src/tgt when the target set is larger")
    parser.add_argument("--include-unmatched-src", action="store_true",
                        help="surface unmatched source records in the output")


def _build_config(args: argparse.Namespace) -> MatchConfig:
    return MatchConfig(
        epsilon=args.epsilon,
        criterion=MatchCriterion(args.criterion),
        seed=args.seed,
        target_order=TargetOrder(args.target_order),
    )


def _load_pair(args: argparse.Namespace):
    src = read_predictions(args.src, args.classes)
    tgt = read_predictions(args.tgt, args.classes)
    return designate_pair(src, tgt, auto_swap=args.auto_swap)


def _cmd_validate(args: argparse.Namespace) -> int:
    fmt = LogFormat(args.format) if args.format else None
    pset = read_predictions(args.log, args.classes, format=fmt)
    for warning in pset.validation_warnings():
        print(f"warning: {warning}", file=sys.stderr)
    print(f"{args.log}: {len(pset)} records, {pset.num_classes} classes, OK")
    return 0


def _cmd_match(args: argparse.Namespace) -> int:
    src, tgt = _load_pair(args)
    cfg = _build_config(args)
    outcomes = repeat_match(src, tgt, cfg, args.runs)
    per_run = []
    for o in outcomes:
        entry = {
            "seed": o.seed,
            "matched": len(o.tgt_matched),
            "unmatched": len(o.tgt_unmatched),
            "fraction_unmatched": fraction_unmatched(o),
        }
        if o.src_matched:
            acc_s, acc_t = matched_accuracies(o)
            entry["matched_accuracy_src"] = acc_s
            entry["matched_accuracy_tgt"] = acc_t
        else:
            entry["matched_accuracy_src"] = None
            entry["matched_accuracy_tgt"] = None
        if args.include_unmatched_src:
            entry["src_unmatched"] = len(o.src_unmatched)
            entry["src_unmatched_accuracy"] = (
                accuracy(o.src_unmatched) if o.src_unmatched else None
            )
        per_run.append(entry)
    n_runs = len(outcomes)
    summary = {
        "src": src.name,
        "tgt": tgt.name,
        "num_src": len(src),
        "num_tgt": len(tgt),
        "epsilon": cfg.epsilon,
        "criterion": cfg.criterion.value,
        "target_order": cfg.target_order.value,
        "prng": GENERATOR_NAME,
        "runs": n_runs,
        "fraction_unmatched_mean":
            sum(r["fraction_unmatched"] for r in per_run) / n_runs,
        "per_run": per_run,
    }
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    src, tgt = _load_pair(args)
    cfg = _build_config(args)
    outcomes = repeat_match(src, tgt, cfg, args.runs)
    report = build_report(src, tgt, outcomes, BinningSpec(args.bins),
                          include_src_unmatched=args.include_unmatched_src)
    write_report(report, args.out, format=args.format)
    print(f"wrote {args.format} report to {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    entries = []
    for name, src_path, tgt_path in read_manifest(args.manifest):
        src = read_predictions(src_path, args.classes)
        tgt = read_predictions(tgt_path, args.classes)
        entries.append(PairEntry(name, src, tgt))
    cfg = _build_config(args)
    rows = sweep(entries, cfg, runs=args.runs, bins=BinningSpec(args.bins))
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "model_name", "accuracy_src", "accuracy_tgt", "accuracy_gap",
            "matched_accuracy_src", "matched_accuracy_src_stderr",
            "matched_accuracy_tgt", "matched_accuracy_tgt_stderr",
            "matched_gap", "fraction_unmatched",
        ])
        for r in rows:
            writer.writerow([
                r.model_name, repr(r.accuracy_src), repr(r.accuracy_tgt),
                repr(r.accuracy_gap), repr(r.matched_accuracy_src),
                repr(r.matched_accuracy_src_stderr), repr(r.matched_accuracy_tgt),
                repr(r.matched_accuracy_tgt_stderr), repr(r.matched_gap),
                repr(r.fraction_unmatched),
            ])
    print(f"wrote sweep table ({len(rows)} rows) to {args.out}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    from .synth import sample_set

    spec = read_synth_spec(args.spec)
    pset = sample_set(spec, args.seed, name=args.name)
    write_predictions(pset, args.out)
    print(f"wrote {len(pset)} synthetic records to {args.out}")
    return 0


def _cmd_scatter(args: argparse.Namespace) -> int:
    entries = []
    for name, src_path, tgt_path in read_manifest(args.manifest):
        src = read_predictions(src_path, args.classes)
        tgt = read_predictions(tgt_path, args.classes)
        entries.append(PairEntry(name, src, tgt))
    points = scatter_points(entries)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model_name", "dataset_name", "accuracy", "mean_confidence"])
        for pt in points:
            writer.writerow([pt.model_name, pt.dataset_name,
                             repr(pt.accuracy), repr(pt.mean_confidence)])
    print(f"wrote {len(points)} scatter points to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predmatch",
        description="Compare classifier accuracy across two test datasets by "
                    "matching predictions on labels and confidences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a prediction log")
    p.add_argument("log", type=Path)
    p.add_argument("--classes", type=int, required=True, metavar="K")
    p.add_argument("--format", choices=[f.value for f in LogFormat], default=None)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("match", help="match two logs and print a summary")
    p.add_argument("--src", type=Path, required=True)
    p.add_argument("--tgt", type=Path, required=True)
    p.add_argument("--classes", type=int, required=True, metavar="K")
    _add_match_args(p)
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("eval", help="match two logs and write a full report")
    p.add_argument("--src", type=Path, required=True)
    p.add_argument("--tgt", type=Path, required=True)
    p.add_argument("--classes", type=int, required=True, metavar="K")
    _add_match_args(p)
    p.add_argument("--bins", type=int, default=15)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=["json", "csv-bundle"], default="json")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="evaluate every pair in a manifest")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--classes", type=int, required=True, metavar="K")
    _add_match_args(p)
    p.add_argument("--bins", type=int, default=15)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("synth", help="generate a synthetic prediction log")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--name", default="synth")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("scatter", help="accuracy/confidence points per pair")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--classes", type=int, required=True, metavar="K")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_scatter)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; usage problems are validation
        # errors in this tool's exit-code contract (2 is reserved for I/O)
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
