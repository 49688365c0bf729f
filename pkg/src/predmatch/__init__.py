"""Compare a classifier's accuracy across two similar test datasets by
matching predictions on predicted labels and/or probabilities within a
tolerance, then reporting accuracy, matched accuracy, fraction unmatched,
reliability curves, and confidence densities."""

from .core import (ClassLabel, PredictionRecord, PredictionSet, accuracy,
                   mean_confidence)
from .errors import PredmatchError, ValidationError
from .experiment import PairEntry, ScatterPoint, SweepRow, scatter_points, sweep
from .matcher import (MatchConfig, MatchCriterion, MatchOutcome, TargetOrder,
                      candidate_indices, designate_pair, match_greedy,
                      match_indexed, repeat_match)
from .metrics import (BinningSpec, HistogramBin, ReliabilityBin, Report,
                      build_report, confidence_histogram, ece,
                      fraction_unmatched, matched_accuracies,
                      reliability_curve)
from .rng import GENERATOR_NAME, Xoshiro256StarStar
from .synth import (Affine, Beta, CalibrationFn, ConfidenceDist, Fixed,
                    Identity, Power, SynthSpec, make_shift_pair, sample_set)

__version__ = "0.1.0"

__all__ = [
    "ClassLabel", "PredictionRecord", "PredictionSet", "accuracy",
    "mean_confidence",
    "PredmatchError", "ValidationError",
    "MatchConfig", "MatchCriterion", "MatchOutcome", "TargetOrder",
    "candidate_indices", "designate_pair", "match_greedy", "match_indexed",
    "repeat_match",
    "BinningSpec", "HistogramBin", "ReliabilityBin", "Report", "build_report",
    "confidence_histogram", "ece", "fraction_unmatched", "matched_accuracies",
    "reliability_curve",
    "Affine", "Beta", "CalibrationFn", "ConfidenceDist", "Fixed", "Identity",
    "Power", "SynthSpec", "make_shift_pair", "sample_set",
    "PairEntry", "ScatterPoint", "SweepRow", "scatter_points", "sweep",
    "GENERATOR_NAME", "Xoshiro256StarStar",
    "__version__",
]
