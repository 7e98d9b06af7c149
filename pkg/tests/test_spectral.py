import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to the path so we can import mibench modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../src")))

from mibench.core.exceptions import EmptyBandError, InvalidParameterError
from mibench.data.model import Label
from mibench.features.extraction import PipelineSettings, build_feature_table
from mibench.features.spectral import PoolingConfig, assemble_features, band_bins, periodogram, pool_max
from mibench.preprocess.segment import Epoch
from tests.helpers import small_trial_set


def _direct_periodogram(x: np.ndarray) -> np.ndarray:
    """|sum_n x[n] exp(-2 pi i k n / N)|^2 / N for k = 0..N//2, by the O(N^2) sum."""
    n = x.size
    k = np.arange(n // 2 + 1)[:, None]
    kernel = np.exp(-2j * np.pi * k * np.arange(n)[None, :] / n)
    return np.abs(kernel @ x) ** 2 / n


class TestPeriodogram(unittest.TestCase):

    def test_matches_direct_dft(self):
        rng = np.random.default_rng(1)
        for n in (16, 250, 2500):
            for _ in range(3 if n == 2500 else 20):
                x = rng.standard_normal(n)
                spec = periodogram(x, 1000.0)
                expected = _direct_periodogram(x)
                np.testing.assert_allclose(spec.values, expected, rtol=1e-9, atol=1e-9 * expected.max())

    def test_parseval(self):
        rng = np.random.default_rng(2)
        for n in (16, 251, 2500):
            x = rng.standard_normal(n)
            spec = periodogram(x, 250.0)
            full = spec.two_sided()
            self.assertEqual(full.size, n)
            self.assertAlmostEqual(full.sum() / n / (np.sum(x ** 2) / n), 1.0, delta=1e-9)

    def test_bin_spacing(self):
        spec = periodogram(np.ones(2500), 1000.0)
        self.assertAlmostEqual(spec.bin_hz, 0.4)
        self.assertEqual(spec.values.size, 1251)

    def test_constant_signal_has_only_dc(self):
        spec = periodogram(np.full(100, 2.0), 100.0)
        self.assertAlmostEqual(spec.values[0], 400.0)
        np.testing.assert_allclose(spec.values[1:], 0.0, atol=1e-20)

    def test_rejects_bad_input(self):
        with self.assertRaises(InvalidParameterError):
            periodogram([1.0], 100.0)
        with self.assertRaises(InvalidParameterError):
            periodogram([1.0, np.nan, 2.0], 100.0)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(-100, 100, allow_nan=False), min_size=4, max_size=64),
        st.floats(0.1, 10.0),
    )
    def test_scale_equivariance(self, values, alpha):
        x = np.array(values)
        base = periodogram(x, 100.0).values
        scaled = periodogram(alpha * x, 100.0).values
        np.testing.assert_allclose(scaled, alpha ** 2 * base, rtol=1e-9, atol=1e-9 * max(1.0, base.max()) * alpha ** 2)


class TestPooling(unittest.TestCase):

    def test_default_geometry_gives_8_windows(self):
        spec = periodogram(np.random.default_rng(0).standard_normal(2500), 1000.0)
        bins = band_bins(spec, 3.0, 35.0)
        self.assertEqual(bins[0], 8)
        self.assertEqual(bins[-1], 87)
        self.assertEqual(bins.size, 80)
        self.assertEqual(pool_max(spec, 3.0, 35.0, 10).size, 8)

    def test_pool_is_window_maximum(self):
        spec = periodogram(np.random.default_rng(3).standard_normal(2500), 1000.0)
        pooled = pool_max(spec, 3.0, 35.0, 10)
        bins = band_bins(spec, 3.0, 35.0)
        for i, value in enumerate(pooled):
            self.assertEqual(value, spec.values[bins[i * 10:(i + 1) * 10]].max())

    def test_window_of_one_is_identity(self):
        spec = periodogram(np.random.default_rng(4).standard_normal(500), 100.0)
        bins = band_bins(spec, 3.0, 35.0)
        np.testing.assert_array_equal(pool_max(spec, 3.0, 35.0, 1), spec.values[bins])

    def test_incomplete_window_is_dropped(self):
        spec = periodogram(np.random.default_rng(5).standard_normal(2500), 1000.0)
        self.assertEqual(pool_max(spec, 3.0, 35.0, 30).size, 2)

    def test_empty_band(self):
        spec = periodogram(np.random.default_rng(6).standard_normal(10), 100.0)
        with self.assertRaises(EmptyBandError):
            pool_max(spec, 11.0, 19.0, 1)

    def test_band_outside_nyquist(self):
        spec = periodogram(np.ones(100), 100.0)
        with self.assertRaises(InvalidParameterError):
            pool_max(spec, 3.0, 60.0, 1)


class TestAssembleFeatures(unittest.TestCase):

    def test_twenty_channels_give_160_features(self):
        rng = np.random.default_rng(7)
        epoch = Epoch(Label.LEFT, "S01", 1000.0, rng.standard_normal((20, 2500)))
        vector = assemble_features(epoch, PoolingConfig())
        self.assertEqual(vector.dimension, 160)
        self.assertEqual(vector.label, Label.LEFT)
        self.assertEqual(vector.feature_names[0], "CH01:8-17")
        self.assertEqual(vector.feature_names[8], "CH02:8-17")

    def test_channel_blocks_are_in_epoch_order(self):
        rng = np.random.default_rng(8)
        samples = rng.standard_normal((2, 500))
        pooling = PoolingConfig(window_bins=5)
        forward = assemble_features(Epoch(Label.RIGHT, "S01", 100.0, samples), pooling).values
        swapped = assemble_features(Epoch(Label.RIGHT, "S01", 100.0, samples[::-1]), pooling).values
        half = forward.size // 2
        np.testing.assert_array_equal(forward[:half], swapped[half:])


class TestFeatureTable(unittest.TestCase):

    def test_table_rows_follow_trial_order(self):
        trial_set = small_trial_set(n_subjects=2, trials_per_class=3, channels=3)
        table = build_feature_table(trial_set, PipelineSettings())
        self.assertEqual(table.features.shape, (12, 24))
        self.assertEqual(table.trial_ids, tuple(t.trial_id for t in trial_set))
        np.testing.assert_array_equal(table.labels, trial_set.labels)
        np.testing.assert_array_equal(table.rows_for_subject("S02"), np.arange(6, 12))

    def test_contrast_shows_in_10hz_window(self):
        trial_set = small_trial_set(n_subjects=1, trials_per_class=10, channels=2, contrast_channels=1)
        table = build_feature_table(trial_set, PipelineSettings())
        # 10 Hz is bin 25 at 0.4 Hz/bin, which falls in the window covering bins 18-27
        column = table.feature_names.index("CH01:18-27")
        left = table.features[table.labels == 1, column]
        right = table.features[table.labels == 0, column]
        self.assertGreater(left.min(), right.max())


if __name__ == "__main__":
    unittest.main()
