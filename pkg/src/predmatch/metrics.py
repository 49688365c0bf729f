"""Matched-accuracy statistics, reliability curves, densities, ECE, reports.

All statistics here are pure functions of match outcomes and record
sequences. Curve and histogram binning is equal-width over [0, 1] with the
last bin closed on the right; empty bins report absent statistics rather
than zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import PredictionRecord, PredictionSet, accuracy, mean_confidence
from .errors import ValidationError
from .matcher import MatchOutcome
from .rng import GENERATOR_NAME

DEFAULT_NUM_BINS = 15


@dataclass(frozen=True)
class BinningSpec:
    """Equal-width binning of [0, 1]; the last bin is right-closed."""

    num_bins: int = DEFAULT_NUM_BINS

    def __post_init__(self):
        if self.num_bins < 1:
            raise ValidationError("num_bins must be >= 1")

    def edges(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.num_bins + 1)

    def assign(self, confidences: np.ndarray) -> np.ndarray:
        """Bin index for each confidence in [0, 1]."""
        idx = np.searchsorted(self.edges(), confidences, side="right") - 1
        return np.clip(idx, 0, self.num_bins - 1)


@dataclass(frozen=True)
class ReliabilityBin:
    lower: float
    upper: float
    count: int
    mean_confidence: float | None
    accuracy: float | None


@dataclass(frozen=True)
class HistogramBin:
    lower: float
    upper: float
    density: float


def matched_accuracies(outcome: MatchOutcome) -> tuple[float, float]:
    """(accuracy on src_matched, accuracy on tgt_matched)."""
    if len(outcome.src_matched) == 0:
        raise ValidationError("no matched datapoints")
    return accuracy(outcome.src_matched), accuracy(outcome.tgt_matched)


def fraction_unmatched(outcome: MatchOutcome) -> float:
    """Share of target records that found no eligible source candidate."""
    total = outcome.num_targets
    return len(outcome.tgt_unmatched) / total


def _bin_stats(records: Sequence[PredictionRecord], bins: BinningSpec):
    if len(records) == 0:
        raise ValidationError("empty evaluation set")
    conf = np.fromiter((r.confidence for r in records), np.float64, len(records))
    correct = np.fromiter((r.correct for r in records), np.float64, len(records))
    idx = bins.assign(conf)
    b = bins.num_bins
    counts = np.bincount(idx, minlength=b)
    conf_sums = np.bincount(idx, weights=conf, minlength=b)
    correct_sums = np.bincount(idx, weights=correct, minlength=b)
    return counts, conf_sums, correct_sums


def reliability_curve(records: Sequence[PredictionRecord],
                      bins: BinningSpec) -> tuple[ReliabilityBin, ...]:
    """Per-bin count, mean confidence, and accuracy (absent when empty)."""
    counts, conf_sums, correct_sums = _bin_stats(records, bins)
    edges = bins.edges()
    out = []
    for b in range(bins.num_bins):
        c = int(counts[b])
        if c == 0:
            out.append(ReliabilityBin(float(edges[b]), float(edges[b + 1]), 0, None, None))
        else:
            out.append(ReliabilityBin(
                float(edges[b]), float(edges[b + 1]), c,
                float(conf_sums[b] / c), float(correct_sums[b] / c),
            ))
    return tuple(out)


def confidence_histogram(records: Sequence[PredictionRecord],
                         bins: BinningSpec) -> tuple[HistogramBin, ...]:
    """Normalized confidence densities per bin (summing to 1)."""
    counts, _, _ = _bin_stats(records, bins)
    n = counts.sum()
    edges = bins.edges()
    return tuple(
        HistogramBin(float(edges[b]), float(edges[b + 1]), float(counts[b] / n))
        for b in range(bins.num_bins)
    )


def ece(records: Sequence[PredictionRecord], bins: BinningSpec) -> float:
    """Expected calibration error: count-weighted |accuracy - confidence|."""
    counts, conf_sums, correct_sums = _bin_stats(records, bins)
    n = counts.sum()
    total = 0.0
    for b in range(bins.num_bins):
        c = counts[b]
        if c == 0:
            continue
        total += (c / n) * abs(correct_sums[b] / c - conf_sums[b] / c)
    return float(total)


def _mean_stderr(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


@dataclass(frozen=True)
class Report:
    """Per-pair aggregate over one or more matching runs.

    Scalar statistics are averaged over runs (with the standard error of
    the mean where stated); curves and histograms come from the first run,
    whose seed is seeds[0].
    """

    src_name: str
    tgt_name: str
    runs: int
    seeds: tuple[int, ...]
    epsilon: float
    criterion: str
    target_order: str
    prng: str
    num_bins: int
    accuracy_src: float
    accuracy_tgt: float
    mean_confidence_src: float
    mean_confidence_tgt: float
    matched_accuracy_src_mean: float
    matched_accuracy_src_stderr: float
    matched_accuracy_tgt_mean: float
    matched_accuracy_tgt_stderr: float
    fraction_unmatched_mean: float
    accuracy_tgt_unmatched_mean: float | None
    accuracy_src_unmatched_mean: float | None
    curves: dict[str, tuple[ReliabilityBin, ...]] = field(repr=False)
    histograms: dict[str, tuple[HistogramBin, ...]] = field(repr=False)

    @property
    def accuracy_gap(self) -> float:
        return self.accuracy_src - self.accuracy_tgt

    @property
    def matched_accuracy_gap(self) -> float:
        return self.matched_accuracy_src_mean - self.matched_accuracy_tgt_mean


def build_report(src: PredictionSet, tgt: PredictionSet,
                 outcomes: Sequence[MatchOutcome], bins: BinningSpec,
                 include_src_unmatched: bool = False,
                 curves_per_run: bool = False) -> Report:
    """Aggregate outcomes of one (src, tgt) pair into a report.

    Curves and histograms describe the first run's subsets; averaging them
    across runs is not well defined because subset membership varies per
    run. ``curves_per_run`` additionally emits every run's subsets under
    ``<subset>@run<i>`` keys.
    """
    if len(outcomes) == 0:
        raise ValidationError("no outcomes to report")
    for o in outcomes:
        if o.src_name != src.name or o.tgt_name != tgt.name:
            raise ValidationError(
                f"outcome for pair ({o.src_name!r}, {o.tgt_name!r}) does not "
                f"belong to ({src.name!r}, {tgt.name!r})"
            )
        if o.num_targets != len(tgt):
            raise ValidationError("outcome target count disagrees with target set")

    acc_pairs = [matched_accuracies(o) for o in outcomes]
    m_src_mean, m_src_se = _mean_stderr([a for a, _ in acc_pairs])
    m_tgt_mean, m_tgt_se = _mean_stderr([b for _, b in acc_pairs])
    frac_mean = math.fsum(fraction_unmatched(o) for o in outcomes) / len(outcomes)

    unmatched_accs = [accuracy(o.tgt_unmatched) for o in outcomes if o.tgt_unmatched]
    acc_unmatched = (
        math.fsum(unmatched_accs) / len(unmatched_accs) if unmatched_accs else None
    )

    rep_run = outcomes[0]
    subsets: dict[str, Sequence[PredictionRecord]] = {
        "src": src.records,
        "tgt": tgt.records,
        "src_matched": rep_run.src_matched,
        "tgt_matched": rep_run.tgt_matched,
        "tgt_unmatched": rep_run.tgt_unmatched,
    }
    acc_src_unmatched = None
    if include_src_unmatched:
        subsets["src_unmatched"] = rep_run.src_unmatched
        per_run = [accuracy(o.src_unmatched) for o in outcomes if o.src_unmatched]
        if per_run:
            acc_src_unmatched = math.fsum(per_run) / len(per_run)
    if curves_per_run:
        for i, o in enumerate(outcomes):
            subsets[f"src_matched@run{i}"] = o.src_matched
            subsets[f"tgt_matched@run{i}"] = o.tgt_matched
            subsets[f"tgt_unmatched@run{i}"] = o.tgt_unmatched
            if include_src_unmatched:
                subsets[f"src_unmatched@run{i}"] = o.src_unmatched

    curves = {}
    histograms = {}
    for name, records in subsets.items():
        if len(records) == 0:
            continue
        curves[name] = reliability_curve(records, bins)
        histograms[name] = confidence_histogram(records, bins)

    cfg = outcomes[0].config
    return Report(
        src_name=src.name,
        tgt_name=tgt.name,
        runs=len(outcomes),
        seeds=tuple(o.seed for o in outcomes),
        epsilon=cfg.epsilon,
        criterion=cfg.criterion.value,
        target_order=cfg.target_order.value,
        prng=GENERATOR_NAME,
        num_bins=bins.num_bins,
        accuracy_src=accuracy(src.records),
        accuracy_tgt=accuracy(tgt.records),
        mean_confidence_src=mean_confidence(src.records),
        mean_confidence_tgt=mean_confidence(tgt.records),
        matched_accuracy_src_mean=m_src_mean,
        matched_accuracy_src_stderr=m_src_se,
        matched_accuracy_tgt_mean=m_tgt_mean,
        matched_accuracy_tgt_stderr=m_tgt_se,
        fraction_unmatched_mean=frac_mean,
        accuracy_tgt_unmatched_mean=acc_unmatched,
        accuracy_src_unmatched_mean=acc_src_unmatched,
        curves=curves,
        histograms=histograms,
    )
