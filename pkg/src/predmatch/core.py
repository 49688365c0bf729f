"""Domain types for prediction logs.

A prediction record is one datapoint's (ground truth, predicted label,
predicted probability) triple as produced by a classifier's softmax head;
a prediction set is the ordered, validated collection of records for one
test dataset. Labels are 0-based integers in [0, num_classes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ValidationError

# Class labels are plain validated ints; see check_label.
ClassLabel = int


def check_label(label: int, num_classes: int) -> int:
    """Validate a 0-based class label against the label-space size."""
    if not isinstance(label, (int, np.integer)) or isinstance(label, bool):
        raise ValidationError(f"label must be an integer, got {label!r}")
    if not 0 <= label < num_classes:
        raise ValidationError(
            f"label {label} outside [0, {num_classes})"
        )
    return int(label)


@dataclass(frozen=True, slots=True)
class PredictionRecord:
    """One datapoint: ordinal position, ground truth, prediction, confidence."""

    index: int
    ground_truth: ClassLabel
    predicted: ClassLabel
    confidence: float

    def __post_init__(self):
        if self.index < 0:
            raise ValidationError(f"record index must be >= 0, got {self.index}")
        if self.ground_truth < 0 or self.predicted < 0:
            raise ValidationError("labels must be non-negative")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValidationError(
                f"confidence {self.confidence!r} outside [0, 1]"
            )

    @property
    def correct(self) -> bool:
        return self.ground_truth == self.predicted


@dataclass(frozen=True)
class PredictionSet(Sequence):
    """Ordered collection of prediction records for one test dataset.

    Invariants: at least one record, record indices are exactly 0..n-1 in
    order, and every label is below num_classes. Instances are immutable;
    numpy views of the columns are cached on first use for the kernels.
    """

    name: str
    num_classes: int
    records: tuple[PredictionRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if self.num_classes < 1:
            raise ValidationError("num_classes must be >= 1")
        if len(self.records) == 0:
            raise ValidationError(f"prediction set {self.name!r} is empty")
        k = self.num_classes
        for pos, rec in enumerate(self.records):
            if rec.index != pos:
                raise ValidationError(
                    f"record at position {pos} carries index {rec.index}"
                )
            if rec.ground_truth >= k or rec.predicted >= k:
                raise ValidationError(
                    f"record {pos}: label outside [0, {k})"
                )

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def __iter__(self) -> Iterator[PredictionRecord]:
        return iter(self.records)

    @classmethod
    def from_arrays(cls, name: str, num_classes: int, ground_truth, predicted,
                    confidence) -> "PredictionSet":
        """Build a set from three aligned columns (any array-likes)."""
        y = np.asarray(ground_truth, dtype=np.int64)
        yhat = np.asarray(predicted, dtype=np.int64)
        p = np.asarray(confidence, dtype=np.float64)
        if not (y.shape == yhat.shape == p.shape) or y.ndim != 1:
            raise ValidationError("columns must be 1-d and of equal length")
        records = tuple(
            PredictionRecord(i, int(y[i]), int(yhat[i]), float(p[i]))
            for i in range(y.shape[0])
        )
        ps = cls(name, num_classes, records)
        ps.__dict__["_arrays"] = _freeze(y, yhat, p)
        return ps

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(ground_truth, predicted, confidence) as read-only numpy columns."""
        cached = self.__dict__.get("_arrays")
        if cached is None:
            n = len(self.records)
            y = np.fromiter((r.ground_truth for r in self.records), np.int64, n)
            yhat = np.fromiter((r.predicted for r in self.records), np.int64, n)
            p = np.fromiter((r.confidence for r in self.records), np.float64, n)
            cached = _freeze(y, yhat, p)
            self.__dict__["_arrays"] = cached
        return cached

    def validation_warnings(self) -> list[str]:
        """Non-fatal data oddities, e.g. confidences below chance level 1/K."""
        warnings = []
        chance = 1.0 / self.num_classes
        below = sum(1 for r in self.records if r.confidence < chance)
        if below:
            warnings.append(
                f"{below} of {len(self.records)} records have confidence below "
                f"chance level 1/{self.num_classes}"
            )
        return warnings


def _freeze(*arrays: np.ndarray) -> tuple[np.ndarray, ...]:
    for a in arrays:
        a.setflags(write=False)
    return arrays


def accuracy(records: Iterable[PredictionRecord]) -> float:
    """Fraction of records whose prediction equals the ground truth."""
    n = 0
    correct = 0
    for r in records:
        n += 1
        if r.ground_truth == r.predicted:
            correct += 1
    if n == 0:
        raise ValidationError("empty evaluation set")
    return correct / n


def mean_confidence(records: Iterable[PredictionRecord]) -> float:
    """Arithmetic mean of the predicted probabilities.

    Uses exact summation, so the result is independent of record order.
    """
    confs = [r.confidence for r in records]
    if not confs:
        raise ValidationError("empty evaluation set")
    return math.fsum(confs) / len(confs)
