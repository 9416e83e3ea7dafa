"""Rank predictors: empirical scaling, drift correction, corruption."""

import random
from fractions import Fraction

import pytest

from listlabel.core import Key
from listlabel.predictors import (
    PredictionVector,
    SequenceSlice,
    best_fit_slope,
    corrupt,
    empirical_rank,
    predictor1,
    predictor2,
    select_predictor,
)


def slice_of(raws, offset=0):
    return SequenceSlice([Key(r, i) for i, r in enumerate(raws)], offset)


class TestEmpiricalRank:
    def test_counts_strictly_smaller_plus_one(self):
        train = slice_of([10, 20, 30, 40])
        assert empirical_rank(train, Key(25, 0)) == 3

    def test_below_all_is_one(self):
        assert empirical_rank(slice_of([10, 20]), Key(5, 0)) == 1

    def test_ties_rank_low(self):
        assert empirical_rank(slice_of([10, 20, 30, 40]), Key(20, 0)) == 2

    def test_above_all(self):
        assert empirical_rank(slice_of([10, 20]), Key(99, 0)) == 3


class TestPredictor1:
    def test_scales_by_size_ratio(self):
        train = slice_of([10, 20, 30, 40])
        test = slice_of([25, 1, 1, 1, 1, 1, 1, 1])
        ranks = predictor1(train, test).ranks
        assert ranks[0] == 6  # rank 3 of 4, scaled into 8

    def test_identity_when_sizes_match(self):
        train = slice_of([10, 20, 30, 40])
        test = slice_of([10, 20, 30, 40])
        assert predictor1(train, test).ranks == [1, 2, 3, 4]

    def test_clamps_to_test_size(self):
        train = slice_of([10, 20, 30, 40])
        test = slice_of([999] * 8)
        assert predictor1(train, test).ranks == [8] * 8

    def test_empty_train_rejected(self):
        with pytest.raises(ValueError):
            predictor1(slice_of([]), slice_of([1]))


class TestBestFitSlope:
    def test_perfect_line(self):
        assert best_fit_slope(slice_of([5, 7, 9, 11])) == 2

    def test_constant_keys(self):
        assert best_fit_slope(slice_of([10, 10, 10])) == 0

    def test_three_points_exact_rational(self):
        assert best_fit_slope(slice_of([1, 2, 4])) == Fraction(3, 2)

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            best_fit_slope(slice_of([5]))


class TestPredictor2:
    def test_zero_slope_equals_predictor1(self):
        train = slice_of([10, 10, 10, 10])
        test = slice_of([5, 10, 15, 20], offset=4)
        assert predictor2(train, test).ranks == predictor1(train, test).ranks

    def test_unit_drift_shifts_train_by_window_distance(self):
        # slope 1, test right after a train of 4: the comparison points
        # move up by 4 raw units, so the continuing line maps onto 1..4
        train = slice_of([1, 2, 3, 4])
        test = slice_of([5, 6, 7, 8], offset=4)
        assert predictor2(train, test).ranks == [1, 2, 3, 4]
        # without the shift the same keys all collapse to the top rank
        assert predictor1(train, test).ranks == [4, 4, 4, 4]


class TestSelectPredictor:
    def test_stationary_stream_picks_plain_scaling(self):
        raws = random.Random(6).sample(range(10**6), 64)
        assert select_predictor(slice_of(raws)) == "predictor1"

    def test_drifting_stream_picks_drift_correction(self):
        rng = random.Random(6)
        raws = [t * 1000 + rng.randint(-50, 50) for t in range(64)]
        assert select_predictor(slice_of(raws)) == "predictor2"

    def test_exact_tie_prefers_plain_scaling(self):
        # constant keys: zero slope makes both candidates identical
        assert select_predictor(slice_of([7, 7, 7, 7])) == "predictor1"

    def test_too_small_train_rejected(self):
        with pytest.raises(ValueError):
            select_predictor(slice_of([1, 2, 3]))


class TestCorrupt:
    def test_zero_percent_is_identity(self):
        pred = PredictionVector([3, 1, 4, 1, 5])
        assert corrupt(pred, 0, 5, rng_seed=9).ranks == [3, 1, 4, 1, 5]

    def test_full_corruption_of_low_ranks_goes_high(self):
        pred = PredictionVector([1, 2, 2, 1])
        assert corrupt(pred, 100, 4, rng_seed=9).ranks == [4, 4, 4, 4]

    def test_equidistant_breaks_toward_top(self):
        pred = PredictionVector([5] * 9)  # rank 5 of 9: both ends 4 away
        assert corrupt(pred, 100, 9, rng_seed=1).ranks == [9] * 9

    def test_high_ranks_go_low(self):
        pred = PredictionVector([10, 9] * 5)
        assert corrupt(pred, 100, 10, rng_seed=1).ranks == [1] * 10

    def test_exact_count_corrupted_deterministically(self):
        base = list(range(2, 42))  # none already at an endpoint
        first = corrupt(PredictionVector(list(base)), 25, 40, rng_seed=5)
        again = corrupt(PredictionVector(list(base)), 25, 40, rng_seed=5)
        assert first.ranks == again.ranks
        changed = sum(1 for a, b in zip(base, first.ranks) if a != b)
        assert changed == 10  # floor(25 * 40 / 100)

    def test_size_mismatch_and_bad_percent_rejected(self):
        with pytest.raises(ValueError):
            corrupt(PredictionVector([1, 2]), 10, 3, rng_seed=0)
        with pytest.raises(ValueError):
            corrupt(PredictionVector([1]), 101, 1, rng_seed=0)
