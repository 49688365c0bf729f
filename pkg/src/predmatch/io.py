"""Prediction-log ingestion and report serialization.

The canonical log format is JSON lines: one object per line with required
keys ``y`` (int ground truth), ``yhat`` (int predicted label), ``p`` (real
in [0, 1]), and an optional ``id`` echoed in diagnostics. CSV with a
mandatory ``y,yhat,p`` header is accepted as a convenience. Labels are
0-based on disk. Reals are serialized with shortest round-trip decimals so
epsilon comparisons survive write/read cycles.
"""

from __future__ import annotations

import csv
import json
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import PredictionSet
from .errors import ValidationError
from .metrics import HistogramBin, ReliabilityBin, Report
from .synth import (Affine, Beta, CalibrationFn, ConfidenceDist, Fixed,
                    Identity, Power, SynthSpec)


class LogFormat(Enum):
    JSONL = "jsonl"
    CSV = "csv"


def infer_format(path: str | Path) -> LogFormat:
    return LogFormat.CSV if Path(path).suffix.lower() == ".csv" else LogFormat.JSONL


def _check_record(path, lineno, y, yhat, p, num_classes, rec_id):
    tag = f"{path}:{lineno}"
    if rec_id is not None:
        tag += f" (id={rec_id})"
    if y < 0 or y >= num_classes:
        raise ValidationError(f"{tag}: label y={y} outside [0, {num_classes})")
    if yhat < 0 or yhat >= num_classes:
        raise ValidationError(f"{tag}: label yhat={yhat} outside [0, {num_classes})")
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"{tag}: p={p!r} outside [0, 1]")


def _read_jsonl(path: Path, num_classes: int):
    ys, yhats, ps = [], [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise ValidationError(f"{path}:{lineno}: expected an object per line")
            rec_id = obj.get("id")
            missing = [k for k in ("y", "yhat", "p") if k not in obj]
            if missing:
                raise ValidationError(
                    f"{path}:{lineno}: missing key(s) {', '.join(missing)}"
                )
            y, yhat, p = obj["y"], obj["yhat"], obj["p"]
            if isinstance(y, bool) or not isinstance(y, int):
                raise ValidationError(f"{path}:{lineno}: y must be an integer")
            if isinstance(yhat, bool) or not isinstance(yhat, int):
                raise ValidationError(f"{path}:{lineno}: yhat must be an integer")
            if isinstance(p, bool) or not isinstance(p, (int, float)):
                raise ValidationError(f"{path}:{lineno}: p must be a number")
            p = float(p)
            _check_record(path, lineno, y, yhat, p, num_classes, rec_id)
            ys.append(y)
            yhats.append(yhat)
            ps.append(p)
    return ys, yhats, ps


def _read_csv(path: Path, num_classes: int):
    ys, yhats, ps = [], [], []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty prediction log") from None
        header = [h.strip() for h in header]
        try:
            iy, iyhat, ip = header.index("y"), header.index("yhat"), header.index("p")
        except ValueError:
            raise ValidationError(
                f"{path}:1: header must contain columns y, yhat, p (got {header})"
            ) from None
        iid = header.index("id") if "id" in header else None
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            rec_id = row[iid] if iid is not None and iid < len(row) else None
            try:
                y = int(row[iy])
                yhat = int(row[iyhat])
                p = float(row[ip])
            except (ValueError, IndexError) as exc:
                raise ValidationError(f"{path}:{lineno}: malformed row ({exc})") from exc
            _check_record(path, lineno, y, yhat, p, num_classes, rec_id)
            ys.append(y)
            yhats.append(yhat)
            ps.append(p)
    return ys, yhats, ps


def read_predictions(path: str | Path, num_classes: int,
                     format: LogFormat | None = None,
                     name: str | None = None) -> PredictionSet:
    """Load a prediction log; file order becomes record order."""
    path = Path(path)
    fmt = format or infer_format(path)
    if fmt is LogFormat.JSONL:
        ys, yhats, ps = _read_jsonl(path, num_classes)
    else:
        ys, yhats, ps = _read_csv(path, num_classes)
    if not ys:
        raise ValidationError(f"{path}: empty prediction log")
    return PredictionSet.from_arrays(
        name if name is not None else path.stem,
        num_classes,
        np.array(ys, dtype=np.int64),
        np.array(yhats, dtype=np.int64),
        np.array(ps, dtype=np.float64),
    )


def write_predictions(pset: PredictionSet, path: str | Path,
                      format: LogFormat | None = None) -> None:
    path = Path(path)
    fmt = format or infer_format(path)
    if fmt is LogFormat.JSONL:
        with open(path, "w", encoding="utf-8") as fh:
            for r in pset.records:
                fh.write(json.dumps(
                    {"y": r.ground_truth, "yhat": r.predicted, "p": r.confidence},
                    separators=(",", ":"),
                ))
                fh.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["y", "yhat", "p"])
            for r in pset.records:
                writer.writerow([r.ground_truth, r.predicted, repr(r.confidence)])


# ---------------------------------------------------------------------------
# report serialization

def _curve_to_jsonable(curve: Sequence[ReliabilityBin]) -> list[dict]:
    return [
        {"lower": b.lower, "upper": b.upper, "count": b.count,
         "mean_confidence": b.mean_confidence, "accuracy": b.accuracy}
        for b in curve
    ]


def _hist_to_jsonable(hist: Sequence[HistogramBin]) -> list[dict]:
    return [{"lower": b.lower, "upper": b.upper, "density": b.density} for b in hist]


def report_to_dict(report: Report) -> dict:
    return {
        "src_name": report.src_name,
        "tgt_name": report.tgt_name,
        "runs": report.runs,
        "seeds": list(report.seeds),
        "epsilon": report.epsilon,
        "criterion": report.criterion,
        "target_order": report.target_order,
        "prng": report.prng,
        "num_bins": report.num_bins,
        "accuracy_src": report.accuracy_src,
        "accuracy_tgt": report.accuracy_tgt,
        "mean_confidence_src": report.mean_confidence_src,
        "mean_confidence_tgt": report.mean_confidence_tgt,
        "matched_accuracy_src_mean": report.matched_accuracy_src_mean,
        "matched_accuracy_src_stderr": report.matched_accuracy_src_stderr,
        "matched_accuracy_tgt_mean": report.matched_accuracy_tgt_mean,
        "matched_accuracy_tgt_stderr": report.matched_accuracy_tgt_stderr,
        "fraction_unmatched_mean": report.fraction_unmatched_mean,
        "accuracy_tgt_unmatched_mean": report.accuracy_tgt_unmatched_mean,
        "accuracy_src_unmatched_mean": report.accuracy_src_unmatched_mean,
        "curves": {k: _curve_to_jsonable(v) for k, v in report.curves.items()},
        "histograms": {k: _hist_to_jsonable(v) for k, v in report.histograms.items()},
    }


def report_from_dict(d: dict) -> Report:
    curves = {
        k: tuple(
            ReliabilityBin(b["lower"], b["upper"], b["count"],
                           b["mean_confidence"], b["accuracy"])
            for b in v
        )
        for k, v in d["curves"].items()
    }
    histograms = {
        k: tuple(HistogramBin(b["lower"], b["upper"], b["density"]) for b in v)
        for k, v in d["histograms"].items()
    }
    return Report(
        src_name=d["src_name"],
        tgt_name=d["tgt_name"],
        runs=d["runs"],
        seeds=tuple(d["seeds"]),
        epsilon=d["epsilon"],
        criterion=d["criterion"],
        target_order=d["target_order"],
        prng=d["prng"],
        num_bins=d["num_bins"],
        accuracy_src=d["accuracy_src"],
        accuracy_tgt=d["accuracy_tgt"],
        mean_confidence_src=d["mean_confidence_src"],
        mean_confidence_tgt=d["mean_confidence_tgt"],
        matched_accuracy_src_mean=d["matched_accuracy_src_mean"],
        matched_accuracy_src_stderr=d["matched_accuracy_src_stderr"],
        matched_accuracy_tgt_mean=d["matched_accuracy_tgt_mean"],
        matched_accuracy_tgt_stderr=d["matched_accuracy_tgt_stderr"],
        fraction_unmatched_mean=d["fraction_unmatched_mean"],
        accuracy_tgt_unmatched_mean=d["accuracy_tgt_unmatched_mean"],
        accuracy_src_unmatched_mean=d["accuracy_src_unmatched_mean"],
        curves=curves,
        histograms=histograms,
    )


def write_report(report: Report, path: str | Path, format: str = "json") -> None:
    """Serialize a report as a JSON file or a directory of CSV files.

    JSON is the round-trip format (read_report restores the exact report);
    the csv-bundle is a plotting-friendly export: one file per curve and
    histogram plus a scalars file.
    """
    path = Path(path)
    if format == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report_to_dict(report), fh, indent=2)
            fh.write("\n")
    elif format == "csv-bundle":
        path.mkdir(parents=True, exist_ok=True)
        d = report_to_dict(report)
        with open(path / "scalars.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["key", "value"])
            for key, value in d.items():
                if key in ("curves", "histograms"):
                    continue
                if key == "seeds":
                    value = " ".join(str(s) for s in value)
                writer.writerow([key, "" if value is None else value])
        for subset, curve in d["curves"].items():
            with open(path / f"curve_{subset}.csv", "w", encoding="utf-8",
                      newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["lower", "upper", "count", "mean_confidence",
                                 "accuracy"])
                for b in curve:
                    writer.writerow([
                        repr(b["lower"]), repr(b["upper"]), b["count"],
                        "" if b["mean_confidence"] is None else repr(b["mean_confidence"]),
                        "" if b["accuracy"] is None else repr(b["accuracy"]),
                    ])
        for subset, hist in d["histograms"].items():
            with open(path / f"hist_{subset}.csv", "w", encoding="utf-8",
                      newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["lower", "upper", "density"])
                for b in hist:
                    writer.writerow([repr(b["lower"]), repr(b["upper"]),
                                     repr(b["density"])])
    else:
        raise ValidationError(f"unknown report format {format!r}")


def read_report(path: str | Path) -> Report:
    """Inverse of write_report for the JSON format."""
    with open(path, "r", encoding="utf-8") as fh:
        return report_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# manifests and synth specs

def read_manifest(path: str | Path) -> list[tuple[str, Path, Path]]:
    """Sweep manifest: CSV with header name,src_path,tgt_path.

    Relative log paths are resolved against the manifest's directory.
    """
    path = Path(path)
    base = path.parent
    entries = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValidationError(f"{path}: empty manifest") from None
        expected = ["name", "src_path", "tgt_path"]
        if header != expected:
            raise ValidationError(
                f"{path}:1: manifest header must be {','.join(expected)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValidationError(f"{path}:{lineno}: expected 3 columns")
            name, src_path, tgt_path = (c.strip() for c in row)
            entries.append((name, base / src_path, base / tgt_path))
    if not entries:
        raise ValidationError(f"{path}: manifest lists no pairs")
    return entries


def parse_synth_spec(d: dict) -> SynthSpec:
    """Build a SynthSpec from its config-file dictionary form."""
    try:
        n = int(d["n"])
        num_classes = int(d["num_classes"])
        dist_cfg = d["confidence_dist"]
    except KeyError as exc:
        raise ValidationError(f"synth spec missing key {exc}") from exc
    if not isinstance(dist_cfg, dict) or len(dist_cfg) != 1:
        raise ValidationError("confidence_dist must be {'beta': [a, b]} or {'fixed': p}")
    dist: ConfidenceDist
    if "beta" in dist_cfg:
        params = dist_cfg["beta"]
        if not isinstance(params, (list, tuple)) or len(params) != 2:
            raise ValidationError("beta distribution takes exactly [alpha, beta]")
        dist = Beta(float(params[0]), float(params[1]))
    elif "fixed" in dist_cfg:
        dist = Fixed(float(dist_cfg["fixed"]))
    else:
        raise ValidationError(f"unknown confidence_dist {dist_cfg!r}")
    calib: CalibrationFn = Identity()
    cal_cfg = d.get("calibration", {"identity": True})
    if not isinstance(cal_cfg, dict) or len(cal_cfg) != 1:
        raise ValidationError(
            "calibration must be {'identity': true}, {'affine': [c0, c1]} "
            "or {'power': gamma}"
        )
    if "identity" in cal_cfg:
        calib = Identity()
    elif "affine" in cal_cfg:
        params = cal_cfg["affine"]
        if not isinstance(params, (list, tuple)) or len(params) != 2:
            raise ValidationError("affine calibration takes exactly [c0, c1]")
        calib = Affine(float(params[0]), float(params[1]))
    elif "power" in cal_cfg:
        calib = Power(float(cal_cfg["power"]))
    else:
        raise ValidationError(f"unknown calibration {cal_cfg!r}")
    return SynthSpec(
        n=n,
        num_classes=num_classes,
        confidence_dist=dist,
        calibration=calib,
        floor_at_chance=bool(d.get("floor_at_chance", False)),
    )


def read_synth_spec(path: str | Path) -> SynthSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(d, dict):
        raise ValidationError(f"{path}: synth spec must be a JSON object")
    return parse_synth_spec(d)
