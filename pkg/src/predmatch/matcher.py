"""Greedy randomized matching of target predictions to source predictions.

For every target record, the eligible source candidates are the not yet
matched records whose confidence window [p - eps, p + eps] contains the
target confidence (and, under the label-and-probability criterion, whose
predicted label agrees). One candidate is drawn uniformly at random and
permanently removed from the pool. Candidates are always presented to the
draw in ascending original-index order, which makes the naive reference
implementation and the indexed fast path bit-for-bit interchangeable.

``match_greedy`` is the plain reference: a linear scan of the remaining
pool per target. ``match_indexed`` answers the same queries from per-label
confidence-sorted indexes and is the implementation behind the CLI; its
inner loop runs either as a numba kernel or as a numpy fallback (see
_backend), with identical output.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np

from . import _backend
from .core import PredictionRecord, PredictionSet
from .errors import ValidationError
from .rng import MASK64, Xoshiro256StarStar

DEFAULT_EPSILON = 0.005
DEFAULT_RUNS = 10


class MatchCriterion(Enum):
    """Candidate eligibility rule."""

    LABEL_AND_PROBABILITY = "label-prob"
    PROBABILITY_ONLY = "prob"


class TargetOrder(Enum):
    """Order in which target records drive the matching loop."""

    FILE_ORDER = "file"
    SHUFFLED_PER_SEED = "shuffle"


@dataclass(frozen=True)
class MatchConfig:
    epsilon: float = DEFAULT_EPSILON
    criterion: MatchCriterion = MatchCriterion.LABEL_AND_PROBABILITY
    seed: int = 0
    target_order: TargetOrder = TargetOrder.FILE_ORDER

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValidationError(f"epsilon {self.epsilon!r} outside [0, 1]")
        if not isinstance(self.criterion, MatchCriterion):
            raise ValidationError(f"bad criterion {self.criterion!r}")
        if not isinstance(self.target_order, TargetOrder):
            raise ValidationError(f"bad target order {self.target_order!r}")
        if not 0 <= int(self.seed) <= MASK64:
            raise ValidationError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class MatchOutcome:
    """Result partitions of one matching run.

    src_matched and tgt_matched are pair-aligned: the i-th entries were
    matched to each other. src_unmatched is carried for completeness but
    excluded from default reports.
    """

    src_name: str
    tgt_name: str
    seed: int
    config: MatchConfig
    src_matched: tuple[PredictionRecord, ...]
    tgt_matched: tuple[PredictionRecord, ...]
    tgt_unmatched: tuple[PredictionRecord, ...]
    src_unmatched: tuple[PredictionRecord, ...]

    @property
    def num_targets(self) -> int:
        return len(self.tgt_matched) + len(self.tgt_unmatched)


def _eligible(src_conf: float, tgt_conf: float, eps: float) -> bool:
    # inclusive interval test, exact 64-bit comparisons, no fuzz
    return src_conf - eps <= tgt_conf <= src_conf + eps


def candidate_indices(pool: Sequence[PredictionRecord], target: PredictionRecord,
                      criterion: MatchCriterion, epsilon: float) -> list[int]:
    """Positions (ascending) of the pool records eligible for ``target``."""
    need_label = criterion is MatchCriterion.LABEL_AND_PROBABILITY
    out = []
    for i, rec in enumerate(pool):
        if need_label and rec.predicted != target.predicted:
            continue
        if _eligible(rec.confidence, target.confidence, epsilon):
            out.append(i)
    return out


def designate_pair(a: PredictionSet, b: PredictionSet,
                   auto_swap: bool = False) -> tuple[PredictionSet, PredictionSet]:
    """Return (src, tgt); by convention the larger set should be the source.

    Warns when the target is larger than the source; with ``auto_swap`` the
    pair is reordered instead.
    """
    src, tgt = a, b
    if len(tgt) > len(src):
        if auto_swap:
            src, tgt = tgt, src
        else:
            warnings.warn(
                f"target set {tgt.name!r} ({len(tgt)}) is larger than source "
                f"{src.name!r} ({len(src)}); convention puts the larger set "
                "first (pass auto_swap=True to reorder)",
                stacklevel=2,
            )
    return src, tgt


def _check_pair(src, tgt) -> None:
    if len(tgt) == 0:
        raise ValidationError("target set is empty")
    if src.num_classes != tgt.num_classes:
        raise ValidationError(
            f"num_classes mismatch: source has {src.num_classes}, "
            f"target has {tgt.num_classes}"
        )


def _iteration_order(rng: Xoshiro256StarStar, num_targets: int,
                     cfg: MatchConfig) -> np.ndarray:
    if cfg.target_order is TargetOrder.SHUFFLED_PER_SEED:
        return np.array(rng.permutation(num_targets), dtype=np.int64)
    return np.arange(num_targets, dtype=np.int64)


def _build_outcome(src: PredictionSet, tgt: PredictionSet, cfg: MatchConfig,
                   order: np.ndarray, picks: np.ndarray) -> MatchOutcome:
    src_matched = []
    tgt_matched = []
    tgt_unmatched = []
    picked = np.zeros(len(src), dtype=bool)
    for k in range(order.shape[0]):
        t_rec = tgt.records[order[k]]
        s_idx = picks[k]
        if s_idx < 0:
            tgt_unmatched.append(t_rec)
        else:
            src_matched.append(src.records[s_idx])
            tgt_matched.append(t_rec)
            picked[s_idx] = True
    src_unmatched = tuple(r for r, hit in zip(src.records, picked) if not hit)
    return MatchOutcome(
        src_name=src.name,
        tgt_name=tgt.name,
        seed=cfg.seed,
        config=cfg,
        src_matched=tuple(src_matched),
        tgt_matched=tuple(tgt_matched),
        tgt_unmatched=tuple(tgt_unmatched),
        src_unmatched=src_unmatched,
    )


def _empty_source_outcome(src, tgt, cfg, order) -> MatchOutcome:
    warnings.warn("source set is empty; every target stays unmatched")
    picks = np.full(order.shape[0], -1, dtype=np.int64)
    return _build_outcome(src, tgt, cfg, order, picks)


def match_greedy(src: PredictionSet, tgt: PredictionSet,
                 cfg: MatchConfig) -> MatchOutcome:
    """Reference implementation: per target, scan the whole remaining pool."""
    _check_pair(src, tgt)
    rng = Xoshiro256StarStar(cfg.seed)
    order = _iteration_order(rng, len(tgt), cfg)
    if len(src) == 0:
        return _empty_source_outcome(src, tgt, cfg, order)

    _, s_yhat, s_conf = src.arrays()
    _, t_yhat, t_conf = tgt.arrays()
    lowers = s_conf - cfg.epsilon
    uppers = s_conf + cfg.epsilon
    need_label = cfg.criterion is MatchCriterion.LABEL_AND_PROBABILITY

    alive = np.ones(len(src), dtype=bool)
    picks = np.empty(order.shape[0], dtype=np.int64)
    for k in range(order.shape[0]):
        ti = order[k]
        tc = t_conf[ti]
        eligible = alive & (lowers <= tc) & (tc <= uppers)
        if need_label:
            eligible &= s_yhat == t_yhat[ti]
        cands = np.flatnonzero(eligible)
        if cands.size == 0:
            picks[k] = -1
            continue
        u = rng.randbelow(cands.size)
        sel = cands[u]
        alive[sel] = False
        picks[k] = sel
    return _build_outcome(src, tgt, cfg, order, picks)


class _SourceIndex:
    """Per-predicted-label confidence-sorted view of the source records."""

    __slots__ = ("sorted_conf", "sorted_idx", "group_lo", "group_hi")

    def __init__(self, s_yhat: np.ndarray, s_conf: np.ndarray,
                 num_classes: int, by_label: bool):
        n = s_conf.shape[0]
        ordinal = np.arange(n)
        if by_label:
            order = np.lexsort((ordinal, s_conf, s_yhat))
            sorted_labels = s_yhat[order]
            ks = np.arange(num_classes)
            self.group_lo = np.searchsorted(sorted_labels, ks, side="left").astype(np.int64)
            self.group_hi = np.searchsorted(sorted_labels, ks, side="right").astype(np.int64)
        else:
            order = np.lexsort((ordinal, s_conf))
            self.group_lo = np.zeros(1, dtype=np.int64)
            self.group_hi = np.full(1, n, dtype=np.int64)
        self.sorted_conf = np.ascontiguousarray(s_conf[order])
        self.sorted_idx = order.astype(np.int64)


def _match_indexed_numpy(index: _SourceIndex, t_conf, t_group, order,
                         eps: float, rng: Xoshiro256StarStar) -> np.ndarray:
    sorted_conf = index.sorted_conf
    sorted_idx = index.sorted_idx
    group_lo = index.group_lo
    group_hi = index.group_hi
    alive = np.ones(sorted_conf.shape[0], dtype=bool)
    picks = np.empty(order.shape[0], dtype=np.int64)
    for k in range(order.shape[0]):
        ti = order[k]
        tc = float(t_conf[ti])
        g = t_group[ti]
        lo0 = int(group_lo[g])
        hi0 = int(group_hi[g])
        if lo0 >= hi0:
            picks[k] = -1
            continue
        window = sorted_conf[lo0:hi0]
        lo = lo0 + int(np.searchsorted(window, tc - eps, side="left"))
        hi = lo0 + int(np.searchsorted(window, tc + eps, side="right"))
        # pin boundaries with the exact predicate (searchsorted bounds can be
        # 1 ulp off the inclusive interval test)
        while lo > lo0 and _eligible(float(sorted_conf[lo - 1]), tc, eps):
            lo -= 1
        while lo < hi and not _eligible(float(sorted_conf[lo]), tc, eps):
            lo += 1
        while hi < hi0 and _eligible(float(sorted_conf[hi]), tc, eps):
            hi += 1
        while hi > lo and not _eligible(float(sorted_conf[hi - 1]), tc, eps):
            hi -= 1
        rel = np.flatnonzero(alive[lo:hi])
        c = rel.size
        if c == 0:
            picks[k] = -1
            continue
        u = rng.randbelow(c)
        cands = sorted_idx[lo:hi][rel]
        j = int(np.argpartition(cands, u)[u]) if c > 1 else 0
        picks[k] = cands[j]
        alive[lo + rel[j]] = False
    return picks


def _match_indexed_numba(index: _SourceIndex, t_conf, t_group, order,
                         eps: float, rng: Xoshiro256StarStar) -> np.ndarray:
    from . import _kernels

    state = np.array(rng.state, dtype=np.uint64)
    picks = np.empty(order.shape[0], dtype=np.int64)
    _kernels.match_kernel(
        index.sorted_conf, index.sorted_idx, index.group_lo, index.group_hi,
        np.ascontiguousarray(t_conf), t_group, order, float(eps), state, picks,
    )
    return picks


def match_indexed(src: PredictionSet, tgt: PredictionSet, cfg: MatchConfig,
                  backend: str | None = None) -> MatchOutcome:
    """Fast path; output is bit-identical to :func:`match_greedy`.

    ``backend`` forces "numba" or "numpy"; by default the numba kernel is
    used when available unless PREDMATCH_NO_NUMBA is set.
    """
    _check_pair(src, tgt)
    backend = _backend.resolve_backend(backend)
    rng = Xoshiro256StarStar(cfg.seed)
    order = _iteration_order(rng, len(tgt), cfg)
    if len(src) == 0:
        return _empty_source_outcome(src, tgt, cfg, order)

    _, s_yhat, s_conf = src.arrays()
    _, t_yhat, t_conf = tgt.arrays()
    by_label = cfg.criterion is MatchCriterion.LABEL_AND_PROBABILITY
    index = _SourceIndex(s_yhat, s_conf, src.num_classes, by_label)
    if by_label:
        t_group = np.ascontiguousarray(t_yhat)
    else:
        t_group = np.zeros(len(tgt), dtype=np.int64)

    if backend == "numba":
        picks = _match_indexed_numba(index, t_conf, t_group, order, cfg.epsilon, rng)
    else:
        picks = _match_indexed_numpy(index, t_conf, t_group, order, cfg.epsilon, rng)
    return _build_outcome(src, tgt, cfg, order, picks)


def repeat_match(src: PredictionSet, tgt: PredictionSet, cfg: MatchConfig,
                 runs: int = DEFAULT_RUNS, *, impl: str = "indexed",
                 backend: str | None = None) -> list[MatchOutcome]:
    """Run the matcher for seeds cfg.seed, cfg.seed+1, ..., cfg.seed+runs-1."""
    if runs < 1:
        raise ValidationError("runs must be >= 1")
    if impl not in ("indexed", "reference"):
        raise ValidationError(f"unknown impl {impl!r}")
    outcomes = []
    for i in range(runs):
        run_cfg = replace(cfg, seed=(cfg.seed + i) & MASK64)
        if impl == "indexed":
            outcomes.append(match_indexed(src, tgt, run_cfg, backend=backend))
        else:
            outcomes.append(match_greedy(src, tgt, run_cfg))
    return outcomes
