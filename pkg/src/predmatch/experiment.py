"""Multi-pair orchestration: sweep tables and accuracy/confidence scatter.

A sweep evaluates many (model, source log, target log) entries with the
same matching settings and emits one row per entry, sorted by ascending
source accuracy (ties broken by model name). Entry i runs with base seed
``cfg.seed + i * runs`` so appending entries never perturbs earlier rows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

from .core import PredictionSet, accuracy, mean_confidence
from .errors import ValidationError
from .matcher import DEFAULT_RUNS, MatchConfig, repeat_match
from .metrics import BinningSpec, Report, build_report
from .rng import MASK64


@dataclass(frozen=True)
class PairEntry:
    model_name: str
    src: PredictionSet
    tgt: PredictionSet

    def __post_init__(self):
        if self.src.num_classes != self.tgt.num_classes:
            raise ValidationError(
                f"entry {self.model_name!r}: source and target disagree on num_classes"
            )


@dataclass(frozen=True)
class SweepRow:
    model_name: str
    accuracy_src: float
    accuracy_tgt: float
    accuracy_gap: float
    matched_accuracy_src: float
    matched_accuracy_src_stderr: float
    matched_accuracy_tgt: float
    matched_accuracy_tgt_stderr: float
    matched_gap: float
    fraction_unmatched: float

    @classmethod
    def from_report(cls, model_name: str, report: Report) -> "SweepRow":
        return cls(
            model_name=model_name,
            accuracy_src=report.accuracy_src,
            accuracy_tgt=report.accuracy_tgt,
            accuracy_gap=report.accuracy_src - report.accuracy_tgt,
            matched_accuracy_src=report.matched_accuracy_src_mean,
            matched_accuracy_src_stderr=report.matched_accuracy_src_stderr,
            matched_accuracy_tgt=report.matched_accuracy_tgt_mean,
            matched_accuracy_tgt_stderr=report.matched_accuracy_tgt_stderr,
            matched_gap=(report.matched_accuracy_src_mean
                         - report.matched_accuracy_tgt_mean),
            fraction_unmatched=report.fraction_unmatched_mean,
        )


class ScatterPoint(NamedTuple):
    model_name: str
    dataset_name: str
    accuracy: float
    mean_confidence: float


def sweep(entries: Sequence[PairEntry], cfg: MatchConfig,
          runs: int = DEFAULT_RUNS,
          bins: BinningSpec | None = None) -> list[SweepRow]:
    """One row per entry, sorted by (accuracy_src, model_name) ascending."""
    if len(entries) == 0:
        raise ValidationError("sweep requires at least one entry")
    if bins is None:
        bins = BinningSpec()
    rows = []
    for i, entry in enumerate(entries):
        entry_cfg = replace(cfg, seed=(cfg.seed + i * runs) & MASK64)
        outcomes = repeat_match(entry.src, entry.tgt, entry_cfg, runs)
        report = build_report(entry.src, entry.tgt, outcomes, bins)
        rows.append(SweepRow.from_report(entry.model_name, report))
    rows.sort(key=lambda r: (r.accuracy_src, r.model_name))
    return rows


def scatter_points(entries: Sequence[PairEntry]) -> list[ScatterPoint]:
    """Two (accuracy, mean confidence) points per entry: source and target."""
    if len(entries) == 0:
        raise ValidationError("scatter requires at least one entry")
    points = []
    for entry in entries:
        for ds in (entry.src, entry.tgt):
            points.append(ScatterPoint(
                entry.model_name, ds.name,
                accuracy(ds.records), mean_confidence(ds.records),
            ))
    return points
