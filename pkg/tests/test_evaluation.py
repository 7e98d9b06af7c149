import hashlib
import os
import sys
import unittest
from unittest.mock import patch

import numpy as np

# Add src to the path so we can import mibench modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../src")))

from mibench.classifiers import ClassifierSettings, LabeledSet, accuracy_percent, train_model
from mibench.core.config import SelectionMode
from mibench.core.exceptions import CellFailedError, InvalidParameterError
from mibench.evaluation import (
    SI,
    SS,
    AccuracySummary,
    EvaluationSettings,
    ExperimentCell,
    aggregate_subjects,
    derive_seed,
    distribution_stats,
    run_cell,
    run_design,
    split_half,
    subsample,
    winners,
)
from mibench.evaluation.seeding import split_seed
from mibench.features.extraction import FeatureTable
from tests.helpers import gaussian_set, small_feature_table


def _balanced(n_per_class: int, dimension: int = 2, seed: int = 0, separation: float = 3.0) -> LabeledSet:
    data = gaussian_set(np.random.default_rng(seed), n_per_class, dimension, separation)
    return LabeledSet(data.features, data.labels, tuple(f"S01:{i}" for i in range(len(data))))


def _summary(design, algorithm, n, accuracies, subject=None, failed=False):
    cell = ExperimentCell(design, algorithm, n, repetitions=max(len(accuracies), 1), subject_id=subject)
    return AccuracySummary(cell=cell, accuracies=tuple(accuracies), failed=failed)


class TestSeeding(unittest.TestCase):

    def test_derive_seed_is_blake2b_of_the_cell_key(self):
        digest = hashlib.blake2b(b"42|SS|S03|LDA|20|7", digest_size=8).digest()
        self.assertEqual(derive_seed(42, "SS", "S03", "LDA", 20, 7), int.from_bytes(digest, "little"))

    def test_missing_subject_is_a_dash(self):
        self.assertEqual(derive_seed(1, "SI", None, "SVM", 100, 0), derive_seed(1, "SI", "-", "SVM", 100, 0))

    def test_coordinates_change_the_seed(self):
        base = derive_seed(0, "SS", "S01", "LDA", 10, 0)
        self.assertNotEqual(base, derive_seed(0, "SS", "S01", "LDA", 10, 1))
        self.assertNotEqual(base, derive_seed(0, "SS", "S01", "SVM", 10, 0))
        self.assertNotEqual(base, derive_seed(1, "SS", "S01", "LDA", 10, 0))
        self.assertLess(base, 2 ** 64)

    def test_split_seed_ignores_the_algorithm(self):
        self.assertEqual(split_seed(5, SS, "S01"), derive_seed(5, SS, "S01", "split", 0, 0))


class TestSplitHalf(unittest.TestCase):

    def test_sizes_are_stratified(self):
        for per_class, half in ((400, 400), (20, 20)):
            train, test = split_half(_balanced(per_class), 3)
            self.assertEqual((len(train), len(test)), (half, half))
            self.assertEqual((train.n0, train.n1), (half // 2, half // 2))

    def test_odd_class_counts_favour_training(self):
        data = LabeledSet(np.arange(11.0).reshape(-1, 1), [0] * 5 + [1] * 6)
        train, test = split_half(data, 0)
        self.assertEqual((train.n0, train.n1), (3, 3))
        self.assertEqual((test.n0, test.n1), (2, 3))

    def test_halves_are_disjoint_and_complete(self):
        data = _balanced(25)
        train, test = split_half(data, 11)
        self.assertFalse(set(train.trial_ids) & set(test.trial_ids))
        self.assertEqual(set(train.trial_ids) | set(test.trial_ids), set(data.trial_ids))

    def test_same_seed_same_split(self):
        data = _balanced(30)
        a, _ = split_half(data, 99)
        b, _ = split_half(data, 99)
        c, _ = split_half(data, 100)
        self.assertEqual(a.trial_ids, b.trial_ids)
        self.assertNotEqual(a.trial_ids, c.trial_ids)

    def test_too_small(self):
        with self.assertRaises(InvalidParameterError):
            split_half(LabeledSet([[0.0]], [0]), 0)


class TestSubsample(unittest.TestCase):

    def setUp(self):
        self.train = _balanced(10)

    def test_even_size_is_balanced(self):
        sample = subsample(self.train, 10, 4)
        self.assertEqual((sample.n0, sample.n1), (5, 5))
        self.assertTrue(set(sample.trial_ids) <= set(self.train.trial_ids))
        self.assertEqual(len(set(sample.trial_ids)), 10)

    def test_odd_size_adds_one_leftover(self):
        sample = subsample(self.train, 11, 4)
        self.assertEqual(len(sample), 11)
        self.assertEqual(min(sample.n0, sample.n1), 5)
        self.assertEqual(len(set(sample.trial_ids)), 11)

    def test_rows_keep_input_order(self):
        sample = subsample(self.train, 8, 5)
        positions = [self.train.trial_ids.index(t) for t in sample.trial_ids]
        self.assertEqual(positions, sorted(positions))

    def test_full_size_takes_everything(self):
        self.assertEqual(subsample(self.train, 20, 1).trial_ids, self.train.trial_ids)

    def test_too_large(self):
        with self.assertRaises(InvalidParameterError):
            subsample(self.train, 22, 0)
        with self.assertRaises(InvalidParameterError):
            subsample(self.train, 1, 0)


class TestRunCell(unittest.TestCase):

    def test_summary_statistics(self):
        data = _balanced(40, dimension=3, separation=4.0)
        cell = ExperimentCell(SI, "LDA", 20, repetitions=15, master_seed=3)
        summary = run_cell(data, cell, EvaluationSettings(mode=SelectionMode.OFF))
        self.assertEqual(len(summary.accuracies), 15)
        self.assertEqual(summary.n_failures, 0)
        self.assertTrue(all(0.0 <= a <= 100.0 for a in summary.accuracies))
        self.assertAlmostEqual(summary.mean, float(np.mean(summary.accuracies)))
        self.assertAlmostEqual(summary.std, float(np.std(summary.accuracies, ddof=1)))
        self.assertGreater(summary.mean, 90.0)
        self.assertEqual(summary.selected_counts, (3,) * 15)

    def test_reruns_are_identical(self):
        data = _balanced(20)
        cell = ExperimentCell(SI, "KNN", 10, repetitions=10, master_seed=8)
        settings = EvaluationSettings(mode=SelectionMode.OFF)
        self.assertEqual(run_cell(data, cell, settings).accuracies, run_cell(data, cell, settings).accuracies)

    def test_clean_selection_runs_on_the_training_half(self):
        data = _balanced(30, dimension=4)
        cell = ExperimentCell(SI, "LDA", 10, repetitions=5)
        summary = run_cell(data, cell, EvaluationSettings(mode=SelectionMode.CLEAN, p_threshold=0.05))
        self.assertEqual(summary.mode, "clean")
        self.assertTrue(all(1 <= k <= 4 for k in summary.selected_counts))

    def _record_sets(self, data, cell, settings):
        trained, tested = [], []

        def recording_train(algorithm, sample, classifier_settings):
            trained.append(sample.trial_ids)
            return train_model(algorithm, sample, classifier_settings)

        def recording_accuracy(model, test):
            tested.append(test.trial_ids)
            return accuracy_percent(model, test)

        with patch("mibench.evaluation.protocol.train_model", side_effect=recording_train), \
                patch("mibench.evaluation.protocol.accuracy_percent", side_effect=recording_accuracy):
            run_cell(data, cell, settings)
        return trained, tested

    def test_training_and_test_trials_never_overlap(self):
        data = _balanced(25, dimension=3)
        all_ids = set(data.trial_ids)
        for mode in (SelectionMode.OFF, SelectionMode.CLEAN):
            for fixed_split in (False, True):
                with self.subTest(mode=mode, fixed_split=fixed_split):
                    cell = ExperimentCell(SI, "KNN", 15, repetitions=12, master_seed=5)
                    settings = EvaluationSettings(mode=mode, p_threshold=0.5, fixed_split=fixed_split)
                    trained, tested = self._record_sets(data, cell, settings)
                    self.assertEqual(len(trained), 12)
                    self.assertEqual(len(tested), 12)
                    for train_ids, test_ids in zip(trained, tested):
                        self.assertEqual(len(train_ids), 15)
                        self.assertEqual(len(test_ids), 24)
                        self.assertFalse(set(train_ids) & set(test_ids))
                        self.assertLessEqual(set(train_ids) | set(test_ids), all_ids)

    def test_all_repetitions_failing_marks_the_cell(self):
        rng = np.random.default_rng(1)
        data = LabeledSet(rng.standard_normal((40, 3)), [0, 1] * 20)
        cell = ExperimentCell(SI, "LDA", 10, repetitions=4)
        # Nothing passes this threshold, so every repetition trains on zero features
        settings = EvaluationSettings(mode=SelectionMode.CLEAN, p_threshold=1e-300)
        with self.assertRaises(CellFailedError) as ctx:
            run_cell(data, cell, settings)
        self.assertTrue(ctx.exception.summary.failed)
        self.assertEqual(ctx.exception.summary.n_failures, 4)
        self.assertTrue(np.isnan(ctx.exception.summary.mean))

    def test_failures_below_the_limit_are_reported(self):
        rng = np.random.default_rng(2)
        data = LabeledSet(rng.standard_normal((40, 3)), [0, 1] * 20)
        cell = ExperimentCell(SI, "LDA", 10, repetitions=4)
        settings = EvaluationSettings(mode=SelectionMode.CLEAN, p_threshold=1e-300, max_failure_fraction=1.0)
        summary = run_cell(data, cell, settings)
        self.assertFalse(summary.failed)
        self.assertEqual([f.rep for f in summary.failures], [0, 1, 2, 3])

    def test_cell_validation(self):
        with self.assertRaises(InvalidParameterError):
            ExperimentCell(SS, "LDA", 10)
        with self.assertRaises(InvalidParameterError):
            ExperimentCell(SI, "LDA", 1)
        self.assertEqual(ExperimentCell(SI, "LDA", 10).subject, "-")


class TestRunDesign(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.table = small_feature_table(n_subjects=2, trials_per_class=10, channels=2)
        cls.settings = EvaluationSettings(classifiers=ClassifierSettings(), mode=SelectionMode.CLEAN)

    def test_cell_order_is_subject_algorithm_size(self):
        summaries = run_design(self.table, SS, ["LDA", "KNN"], [4, 10], self.settings, repetitions=3)
        keys = [(s.cell.subject, s.cell.algorithm, s.cell.n) for s in summaries]
        self.assertEqual(keys, [
            ("S01", "LDA", 4), ("S01", "LDA", 10), ("S01", "KNN", 4), ("S01", "KNN", 10),
            ("S02", "LDA", 4), ("S02", "LDA", 10), ("S02", "KNN", 4), ("S02", "KNN", 10),
        ])

    def test_threads_do_not_change_results(self):
        serial = run_design(self.table, SI, ["LDA", "CART"], [6, 20], self.settings, repetitions=5, threads=1)
        parallel = run_design(self.table, SI, ["LDA", "CART"], [6, 20], self.settings, repetitions=5, threads=4)
        self.assertEqual([s.accuracies for s in serial], [s.accuracies for s in parallel])
        self.assertEqual([s.failures for s in serial], [s.failures for s in parallel])

    def test_size_larger_than_the_training_half(self):
        with self.assertRaises(InvalidParameterError):
            run_design(self.table, SS, ["LDA"], [12], self.settings, repetitions=1)

    def test_faithful_selection_failure_marks_the_subject(self):
        features = np.random.default_rng(3).standard_normal((12, 2))
        labels = np.array([0, 1, 0, 1, 0, 1] + [0, 0, 0, 0, 0, 1])
        table = FeatureTable(
            features=features,
            labels=labels,
            subject_ids=("S01",) * 6 + ("S02",) * 6,
            trial_ids=tuple(f"t{i}" for i in range(12)),
            feature_names=("a", "b"),
        )
        settings = EvaluationSettings(classifiers=ClassifierSettings(knn_k=1), mode=SelectionMode.FAITHFUL,
                                      p_threshold=0.5, max_failure_fraction=1.0)
        summaries = run_design(table, SS, ["KNN"], [2], settings, repetitions=2)
        self.assertFalse(summaries[0].failed)
        self.assertTrue(summaries[1].failed)
        self.assertEqual(summaries[1].n_failures, 2)


class TestAggregates(unittest.TestCase):

    def test_tied_means_go_to_the_alphabetically_first_algorithm(self):
        rows = winners([
            _summary(SI, "SVM", 10, [80.0, 70.0]),
            _summary(SI, "LDA", 10, [75.0, 75.0]),
            _summary(SI, "KNN", 10, [60.0]),
        ])
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0].algorithm, "LDA")
        self.assertEqual(rows[0].mean, 75.0)

    def test_failed_cells_never_win(self):
        rows = winners([
            _summary(SI, "CART", 20, [99.0], failed=True),
            _summary(SI, "KNN", 20, [55.0]),
            _summary(SI, "LDA", 40, [99.0], failed=True),
        ])
        self.assertEqual([(r.n, r.algorithm) for r in rows], [(20, "KNN")])

    def test_subject_aggregate(self):
        rows = aggregate_subjects([
            _summary(SS, "LDA", 10, [80.0, 80.0], subject="S01"),
            _summary(SS, "LDA", 10, [50.0, 70.0], subject="S02"),
            _summary(SI, "LDA", 10, [10.0]),
        ])
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0].subjects, 2)
        self.assertAlmostEqual(rows[0].mean, 70.0)
        self.assertAlmostEqual(rows[0].std, np.sqrt(200.0))

    def test_distribution_stats(self):
        stats = distribution_stats(_summary(SI, "LDA", 10, [0.0, 50.0, 100.0, 100.0]))
        self.assertEqual(
            (stats.minimum, stats.q1, stats.median, stats.q3, stats.maximum),
            (0.0, 37.5, 75.0, 100.0, 100.0),
        )
        self.assertTrue(np.isnan(distribution_stats(_summary(SI, "LDA", 10, [])).median))

    def test_single_accuracy_has_zero_std(self):
        self.assertEqual(_summary(SI, "LDA", 10, [64.0]).std, 0.0)


if __name__ == "__main__":
    unittest.main()
