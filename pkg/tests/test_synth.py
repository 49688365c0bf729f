"""Synthetic generator: calibration guarantees, determinism, backend parity."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predmatch import (Affine, Beta, Fixed, Identity, MatchConfig,
                       MatchCriterion, Power, SynthSpec, ValidationError,
                       accuracy, make_shift_pair, matched_accuracies,
                       mean_confidence, repeat_match, sample_set)
from predmatch import _backend


class TestSpecValidation:
    def test_rejects_bad_sizes(self):
        with pytest.raises(ValidationError):
            SynthSpec(0, 10, Beta(2, 2))
        with pytest.raises(ValidationError):
            SynthSpec(10, 1, Beta(2, 2))

    def test_rejects_bad_distribution(self):
        with pytest.raises(ValidationError):
            Beta(0.0, 1.0)
        with pytest.raises(ValidationError):
            Fixed(1.5)

    def test_rejects_bad_power(self):
        with pytest.raises(ValidationError):
            Power(0.0)


class TestCalibrationFns:
    def test_identity(self):
        assert Identity()(0.37) == 0.37

    def test_affine_clamps(self):
        f = Affine(0.5, 1.0)
        assert f(0.2) == 0.7
        assert f(0.9) == 1.0
        assert Affine(-0.5, 0.2)(0.1) == 0.0

    def test_power(self):
        assert Power(2.0)(0.8) == pytest.approx(0.64, abs=1e-15)


class TestSampleSet:
    def test_single_record_is_valid(self):
        ps = sample_set(SynthSpec(1, 3, Beta(2, 5)), seed=0)
        assert len(ps) == 1
        assert 0.0 <= ps[0].confidence <= 1.0
        assert 0 <= ps[0].predicted < 3
        assert 0 <= ps[0].ground_truth < 3

    def test_identity_calibration_accuracy_tracks_confidence(self, identity_50k):
        acc = accuracy(identity_50k.records)
        conf = mean_confidence(identity_50k.records)
        assert abs(acc - conf) <= 0.006  # 3 sigma of the paired difference

    def test_power_two_at_fixed_confidence(self):
        ps = sample_set(SynthSpec(20000, 5, Fixed(0.8), Power(2.0)), seed=77)
        assert all(r.confidence == 0.8 for r in ps.records[:50])
        assert abs(accuracy(ps.records) - 0.64) <= 0.01

    def test_floor_at_chance_rescaling(self):
        spec = SynthSpec(2000, 4, Beta(1, 8), floor_at_chance=True)
        ps = sample_set(spec, seed=5)
        assert min(r.confidence for r in ps.records) >= 0.25

    def test_deterministic(self):
        spec = SynthSpec(500, 7, Beta(3, 2), Power(1.5))
        a = sample_set(spec, seed=123)
        b = sample_set(spec, seed=123)
        assert a == b
        c = sample_set(spec, seed=124)
        assert c != a

    @pytest.mark.skipif(not _backend.numba_available(), reason="numba not installed")
    @pytest.mark.parametrize("spec", [
        SynthSpec(4000, 10, Beta(8, 2), Identity()),
        SynthSpec(4000, 10, Beta(5, 3), Power(2.0)),
        SynthSpec(4000, 5, Beta(0.5, 0.7), Affine(0.2, 0.6), floor_at_chance=True),
        SynthSpec(2000, 3, Fixed(0.8), Power(2.0)),
    ])
    def test_backend_parity(self, spec):
        a = sample_set(spec, seed=31337, backend="numba")
        b = sample_set(spec, seed=31337, backend="numpy")
        ya, ha, pa = a.arrays()
        yb, hb, pb = b.arrays()
        assert np.array_equal(ya, yb)
        assert np.array_equal(ha, hb)
        assert np.array_equal(pa.view(np.uint64), pb.view(np.uint64))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 50), st.integers(2, 12), st.integers(0, 2**32),
           st.sampled_from([Identity(), Power(2.0), Affine(0.3, 0.5)]))
    def test_generated_sets_always_valid(self, n, k, seed, calibration):
        # PredictionSet construction re-validates every invariant
        ps = sample_set(SynthSpec(n, k, Beta(2, 3), calibration), seed=seed)
        assert len(ps) == n
        assert ps.num_classes == k

    def test_conditional_accuracy_tracks_calibration(self, identity_50k):
        # within each 0.05-wide confidence band, empirical accuracy stays
        # within 0.05 of the calibration value at the band's mean confidence
        _, _, conf = identity_50k.arrays()
        correct = np.fromiter((r.correct for r in identity_50k.records),
                              np.float64, len(identity_50k))
        idx = np.clip((conf / 0.05).astype(np.int64), 0, 19)
        for b in range(20):
            mask = idx == b
            count = int(mask.sum())
            if count == 0:
                continue
            acc_b = correct[mask].mean()
            cal_b = conf[mask].mean()  # Identity: acc(p) = p
            assert abs(acc_b - cal_b) <= 0.05, (b, count)

    def test_conditional_accuracy_power_two(self):
        ps = sample_set(SynthSpec(50000, 10, Beta(2, 2), Power(2.0)), seed=8)
        _, _, conf = ps.arrays()
        correct = np.fromiter((r.correct for r in ps.records), np.float64, len(ps))
        idx = np.clip((conf / 0.05).astype(np.int64), 0, 19)
        for b in range(20):
            mask = idx == b
            if int(mask.sum()) < 100:
                continue
            acc_b = correct[mask].mean()
            cal_b = conf[mask].mean() ** 2
            assert abs(acc_b - cal_b) <= 0.05, b


class TestMakeShiftPair:
    def test_mismatched_classes_error(self):
        with pytest.raises(ValidationError, match="num_classes"):
            make_shift_pair(SynthSpec(10, 4, Beta(2, 2)),
                            SynthSpec(10, 5, Beta(2, 2)), seed=0)

    def test_identical_specs_have_close_accuracies(self):
        spec = SynthSpec(20000, 10, Beta(2, 2))
        a, b = make_shift_pair(spec, spec, seed=42)
        assert a != b  # independent streams
        # two-sample 3 sigma bound at E[p] = 0.5
        bound = 3.0 * np.sqrt(2 * 0.25 / 20000)
        assert abs(accuracy(a.records) - accuracy(b.records)) <= bound

    def test_names_and_determinism(self):
        spec = SynthSpec(50, 3, Beta(2, 2))
        a, b = make_shift_pair(spec, spec, seed=7, src_name="one", tgt_name="two")
        assert (a.name, b.name) == ("one", "two")
        a2, b2 = make_shift_pair(spec, spec, seed=7, src_name="one", tgt_name="two")
        assert (a, b) == (a2, b2)

    def test_raw_gap_matches_beta_means(self):
        # E[Beta(8,2)] = 0.8 and E[Beta(5,3)] = 0.625: identity calibration
        # puts the expected accuracy gap at 0.175
        src, tgt = make_shift_pair(SynthSpec(20000, 10, Beta(8, 2)),
                                   SynthSpec(20000, 10, Beta(5, 3)), seed=11)
        gap = accuracy(src.records) - accuracy(tgt.records)
        assert abs(gap - 0.175) <= 0.015

    def test_matched_gap_collapses_under_probability_matching(self):
        src, tgt = make_shift_pair(SynthSpec(30000, 10, Beta(8, 2)),
                                   SynthSpec(6000, 10, Beta(5, 3)), seed=13)
        cfg = MatchConfig(epsilon=0.005,
                          criterion=MatchCriterion.PROBABILITY_ONLY, seed=0)
        outcomes = repeat_match(src, tgt, cfg, runs=5)
        gaps = [a - b for a, b in map(matched_accuracies, outcomes)]
        mean_gap = sum(gaps) / len(gaps)
        # matched pairs share confidence within eps and the same calibration
        assert abs(mean_gap) <= 0.005 + 3.0 * np.sqrt(2 * 0.25 / 5000)
