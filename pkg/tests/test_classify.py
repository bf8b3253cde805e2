import numpy as np
import pytest

from saxopt.classify import (
    Dataset,
    RepresentationParams,
    encode_dataset,
    holdout_error,
    loo_error,
)
from saxopt.core import (
    BreakpointSet,
    SymbolicWord,
    build_dist_table,
    discretize,
    gaussian_breakpoints,
    paa,
    znormalize,
)

from conftest import make_dataset
from oracles import holdout_error_bruteforce, loo_error_bruteforce


def random_words(rng, count, width=4, alpha=5, n=16):
    return [SymbolicWord(rng.integers(0, alpha, width), n) for _ in range(count)]


def as_pairs(words):
    return [(w.symbols.tolist(), w.source_length) for w in words]


class TestEncodeDataset:
    def test_identical_series_identical_words(self):
        data = make_dataset([[1, 2, 3, 4]] * 3, [0, 0, 1])
        params = RepresentationParams(3, 2, gaussian_breakpoints(3), np.ones(2))
        words = encode_dataset(data, params)
        assert all(np.array_equal(w.symbols, words[0].symbols) for w in words)

    def test_full_resolution_equals_direct_discretization(self):
        data = make_dataset([[0.1, 2.0, -3.0, 0.5]], [0])
        cuts = gaussian_breakpoints(3)
        params = RepresentationParams(3, 4, cuts, np.ones(4))
        word = encode_dataset(data, params)[0]
        direct = discretize(paa(znormalize(data.series[0]), 4), cuts)
        assert np.array_equal(word.symbols, direct.symbols)

    def test_two_series_hand_composed(self):
        # [0,0,6,6] z-normalizes to [-1,-1,1,1]; frame means [-1, 1]
        data = make_dataset([[0, 0, 6, 6], [6, 6, 0, 0]], [0, 1])
        params = RepresentationParams(
            3, 2, BreakpointSet([-0.43, 0.43]), np.ones(2)
        )
        words = encode_dataset(data, params)
        assert words[0].symbols.tolist() == [0, 2]
        assert words[1].symbols.tolist() == [2, 0]
        assert words[0].source_length == 4

    def test_segments_beyond_length_rejected(self):
        data = make_dataset([[1, 2, 3]], [0])
        params = RepresentationParams(3, 4, gaussian_breakpoints(3), np.ones(4))
        with pytest.raises(ValueError):
            encode_dataset(data, params)


class TestLooError:
    def test_separated_classes_zero_error(self):
        table = build_dist_table(gaussian_breakpoints(3))
        words = [
            SymbolicWord([0, 0], 8),
            SymbolicWord([0, 0], 8),
            SymbolicWord([2, 2], 8),
            SymbolicWord([2, 2], 8),
        ]
        assert loo_error(words, [0, 0, 1, 1], table, np.ones(2)) == 0.0

    def test_identical_words_follow_lowest_index_rule(self):
        # all distances 0: word 0 predicts labels[1], everyone else labels[0]
        table = build_dist_table(gaussian_breakpoints(3))
        words = [SymbolicWord([1, 1], 8)] * 3
        assert loo_error(words, [0, 1, 0], table, np.ones(2)) == pytest.approx(2 / 3)
        assert loo_error(words, [0, 0, 0], table, np.ones(2)) == 0.0

    def test_three_word_hand_instance_matches_oracle(self):
        table = build_dist_table(gaussian_breakpoints(4))
        words = [
            SymbolicWord([0, 3], 8),
            SymbolicWord([0, 0], 8),
            SymbolicWord([3, 3], 8),
        ]
        labels = [0, 0, 1]
        weights = np.array([1.0, 0.5])
        got = loo_error(words, labels, table, weights)
        expected = loo_error_bruteforce(
            as_pairs(words), labels, table.cells.tolist(), weights.tolist()
        )
        assert got == expected

    def test_matches_bruteforce_on_random_instances(self):
        rng = np.random.default_rng(42)
        table = build_dist_table(gaussian_breakpoints(5))
        for _ in range(60):
            k = int(rng.integers(2, 11))
            words = random_words(rng, k)
            labels = rng.integers(0, 3, k).tolist()
            weights = rng.uniform(0.1, 2.0, 4)
            got = loo_error(words, labels, table, weights)
            expected = loo_error_bruteforce(
                as_pairs(words), labels, table.cells.tolist(), weights.tolist()
            )
            assert got == expected

    def test_requires_two_words(self):
        table = build_dist_table(gaussian_breakpoints(3))
        with pytest.raises(ValueError):
            loo_error([SymbolicWord([0], 4)], [0], table, np.ones(1))

    def test_error_is_integer_ratio(self):
        rng = np.random.default_rng(8)
        table = build_dist_table(gaussian_breakpoints(5))
        words = random_words(rng, 7)
        err = loo_error(words, rng.integers(0, 2, 7), table, np.ones(4))
        assert 0.0 <= err <= 1.0
        assert (err * 7) == round(err * 7)


class TestHoldoutError:
    def test_test_equals_train_zero_error(self):
        table = build_dist_table(gaussian_breakpoints(3))
        words = [SymbolicWord([0, 2], 8), SymbolicWord([2, 0], 8)]
        labels = [0, 1]
        assert holdout_error(words, labels, words, labels, table, np.ones(2)) == 0.0

    def test_single_train_word_labels_everything(self):
        table = build_dist_table(gaussian_breakpoints(3))
        train = [SymbolicWord([0, 0], 8)]
        test = [SymbolicWord([2, 2], 8), SymbolicWord([0, 0], 8)]
        err = holdout_error(train, [5], test, [5, 4], table, np.ones(2))
        assert err == 0.5

    def test_four_train_three_test_matches_oracle(self):
        rng = np.random.default_rng(3)
        table = build_dist_table(gaussian_breakpoints(5))
        train, test = random_words(rng, 4), random_words(rng, 3)
        train_labels = [0, 1, 1, 0]
        test_labels = [1, 0, 1]
        weights = rng.uniform(0.2, 1.5, 4)
        got = holdout_error(train, train_labels, test, test_labels, table, weights)
        expected = holdout_error_bruteforce(
            as_pairs(train),
            train_labels,
            as_pairs(test),
            test_labels,
            table.cells.tolist(),
            weights.tolist(),
        )
        assert got == expected

    def test_empty_sides_rejected(self):
        table = build_dist_table(gaussian_breakpoints(3))
        word = [SymbolicWord([0, 1], 8)]
        with pytest.raises(ValueError):
            holdout_error([], [], word, [0], table, np.ones(2))
        with pytest.raises(ValueError):
            holdout_error(word, [0], [], [], table, np.ones(2))


class TestWeightScaleInvariance:
    def test_predictions_unchanged_under_scaling(self):
        rng = np.random.default_rng(17)
        table = build_dist_table(gaussian_breakpoints(5))
        for _ in range(25):
            k = int(rng.integers(3, 9))
            words = random_words(rng, k)
            labels = rng.integers(0, 2, k)
            weights = rng.uniform(0.1, 2.0, 4)
            scale = float(rng.uniform(0.05, 20.0))
            base = loo_error(words, labels, table, weights)
            scaled = loo_error(words, labels, table, scale * weights)
            assert base == scaled


class TestDatasetValidation:
    def test_ragged_series_rejected(self):
        with pytest.raises(ValueError):
            make_dataset([[1, 2, 3], [1, 2]], [0, 1])

    def test_missing_labels_rejected(self):
        from saxopt.core import TimeSeries

        with pytest.raises(ValueError):
            Dataset((TimeSeries(np.array([1.0, 2.0]), None),))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Dataset(())
