import numpy as np
import pytest

from predmatch import Beta, Identity, PredictionRecord, PredictionSet, SynthSpec, sample_set


def make_records(triples):
    """Build records from (ground_truth, predicted, confidence) triples."""
    return tuple(
        PredictionRecord(i, y, yhat, p) for i, (y, yhat, p) in enumerate(triples)
    )


def make_set(name, num_classes, triples):
    return PredictionSet(name, num_classes, make_records(triples))


def random_set(rng, name, n, num_classes, quantize=False):
    """Random valid prediction set; quantize snaps confidences to a 0.01 grid
    so that exact-equality matches occur."""
    y = rng.integers(0, num_classes, n)
    yhat = rng.integers(0, num_classes, n)
    p = rng.random(n)
    if quantize:
        p = np.round(p, 2)
    return PredictionSet.from_arrays(name, num_classes, y, yhat, p)


@pytest.fixture(scope="session")
def identity_50k():
    """Identity-calibrated Beta(2,2) set; every confidence bin well populated."""
    return sample_set(SynthSpec(50000, 10, Beta(2, 2), Identity()), seed=20240501)


@pytest.fixture(scope="session")
def beta82_50k():
    return sample_set(SynthSpec(50000, 10, Beta(8, 2), Identity()), seed=20240502)
