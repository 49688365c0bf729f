"""Synthetic prediction sets with known calibration and confidence density.

Lets the matching protocol's claims be checked at desk scale without any
trained model: each record draws a confidence p, a uniform predicted label,
and is made correct with probability acc(p) given by a chosen calibration
function. Generation consumes the package's deterministic PRNG stream, so
sets are reproducible bit for bit; a numba kernel and a pure-Python loop
implement the identical stream (see _backend).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import PredictionSet
from .errors import ValidationError
from .rng import Xoshiro256StarStar, splitmix64

_DIST_BETA = 0
_DIST_FIXED = 1
_CAL_IDENTITY = 0
_CAL_AFFINE = 1
_CAL_POWER = 2


@dataclass(frozen=True)
class Identity:
    """acc(p) = p."""

    def __call__(self, p: float) -> float:
        return p

    def _kernel_args(self):
        return _CAL_IDENTITY, 0.0, 0.0


@dataclass(frozen=True)
class Affine:
    """acc(p) = clamp(c0 + c1 * p, 0, 1)."""

    c0: float
    c1: float

    def __call__(self, p: float) -> float:
        q = self.c0 + self.c1 * p
        if q < 0.0:
            return 0.0
        if q > 1.0:
            return 1.0
        return q

    def _kernel_args(self):
        return _CAL_AFFINE, self.c0, self.c1


@dataclass(frozen=True)
class Power:
    """acc(p) = p ** gamma, gamma > 0."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValidationError("power calibration requires gamma > 0")

    def __call__(self, p: float) -> float:
        return p ** self.gamma

    def _kernel_args(self):
        return _CAL_POWER, self.gamma, 0.0


CalibrationFn = Identity | Affine | Power


@dataclass(frozen=True)
class Beta:
    """Beta(alpha, beta) confidence distribution on [0, 1]."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0.0 and self.beta > 0.0):
            raise ValidationError("beta parameters must be > 0")

    def _kernel_args(self):
        return _DIST_BETA, self.alpha, self.beta


@dataclass(frozen=True)
class Fixed:
    """Degenerate distribution: every confidence equals ``value``."""

    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValidationError("fixed confidence must lie in [0, 1]")

    def _kernel_args(self):
        return _DIST_FIXED, self.value, 0.0


ConfidenceDist = Beta | Fixed


@dataclass(frozen=True)
class SynthSpec:
    """Generative recipe for one synthetic prediction set."""

    n: int
    num_classes: int
    confidence_dist: ConfidenceDist
    calibration: CalibrationFn = Identity()
    floor_at_chance: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        if self.num_classes < 2:
            raise ValidationError("num_classes must be >= 2")


def _sample_python(spec: SynthSpec, rng: Xoshiro256StarStar):
    n = spec.n
    k = spec.num_classes
    inv_k = 1.0 / k
    dist = spec.confidence_dist
    calib = spec.calibration
    is_beta = isinstance(dist, Beta)
    y = np.empty(n, dtype=np.int64)
    yhat = np.empty(n, dtype=np.int64)
    p = np.empty(n, dtype=np.float64)
    for i in range(n):
        pi = rng.beta(dist.alpha, dist.beta) if is_beta else dist.value
        if spec.floor_at_chance:
            pi = inv_k + (1.0 - inv_k) * pi
        pred = rng.randbelow(k)
        q = calib(pi)
        if rng.next_float() < q:
            truth = pred
        else:
            j = rng.randbelow(k - 1)
            truth = j if j < pred else j + 1
        y[i] = truth
        yhat[i] = pred
        p[i] = pi
    return y, yhat, p


def _sample_numba(spec: SynthSpec, rng: Xoshiro256StarStar):
    from . import _kernels

    dist_kind, p0, p1 = spec.confidence_dist._kernel_args()
    calib_kind, c0, c1 = spec.calibration._kernel_args()
    state = np.array(rng.state, dtype=np.uint64)
    y = np.empty(spec.n, dtype=np.int64)
    yhat = np.empty(spec.n, dtype=np.int64)
    p = np.empty(spec.n, dtype=np.float64)
    _kernels.synth_kernel(state, spec.num_classes, dist_kind, p0, p1,
                          spec.floor_at_chance, calib_kind, c0, c1, y, yhat, p)
    return y, yhat, p


def sample_set(spec: SynthSpec, seed: int, name: str = "synth",
               backend: str | None = None) -> PredictionSet:
    """Generate a prediction set; deterministic given (spec, seed)."""
    backend = _backend.resolve_backend(backend)
    rng = Xoshiro256StarStar(seed)
    if backend == "numba":
        y, yhat, p = _sample_numba(spec, rng)
    else:
        y, yhat, p = _sample_python(spec, rng)
    return PredictionSet.from_arrays(name, spec.num_classes, y, yhat, p)


def make_shift_pair(src_spec: SynthSpec, tgt_spec: SynthSpec, seed: int,
                    src_name: str = "synth-src", tgt_name: str = "synth-tgt",
                    backend: str | None = None) -> tuple[PredictionSet, PredictionSet]:
    """Two independent sets from seed streams derived from one seed."""
    if src_spec.num_classes != tgt_spec.num_classes:
        raise ValidationError("shift pair specs must share num_classes")
    x = int(seed)
    x, src_seed = splitmix64(x)
    _, tgt_seed = splitmix64(x)
    src = sample_set(src_spec, src_seed, name=src_name, backend=backend)
    tgt = sample_set(tgt_spec, tgt_seed, name=tgt_name, backend=backend)
    return src, tgt
