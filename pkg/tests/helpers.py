"""
Shared fixture builders for the test suite.
"""

import logging
import os
import sys

import numpy as np

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../src")))

from mibench.classifiers.base import LabeledSet
from mibench.data.synthetic import SyntheticSpec, generate_synthetic
from mibench.features.extraction import PipelineSettings, build_feature_table

MOCK_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "mock")

# 250 Hz keeps arrays small; 2.5 s epochs give 0.4 Hz bins, so 3-35 Hz holds 80 bins as at 1000 Hz
SMALL_FS = 250.0


def small_spec(**overrides) -> SyntheticSpec:
    defaults = dict(
        n_subjects=2,
        trials_per_class=10,
        channels=4,
        duration_s=7.0,
        sampling_rate_hz=SMALL_FS,
        contrast_amplitude=3.0,
        noise_std=1.0,
        contrast_channels=2,
        contrast_hz=10.0,
    )
    defaults.update(overrides)
    return SyntheticSpec(**defaults)


def small_trial_set(seed: int = 7, **overrides):
    return generate_synthetic(small_spec(**overrides), seed)


def small_feature_table(seed: int = 7, **overrides):
    return build_feature_table(small_trial_set(seed, **overrides), PipelineSettings())


def gaussian_set(rng: np.random.Generator, n_per_class: int, dimension: int, separation: float) -> LabeledSet:
    """Two isotropic Gaussian classes whose means differ by `separation` along the first axis."""
    x0 = rng.standard_normal((n_per_class, dimension))
    x1 = rng.standard_normal((n_per_class, dimension))
    x1[:, 0] += separation
    features = np.vstack([x0, x1])
    labels = np.array([0] * n_per_class + [1] * n_per_class)
    return LabeledSet(features, labels)


def write_config(directory: str, lines) -> str:
    path = os.path.join(directory, "mibench.conf")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return path


def close_log_handlers() -> None:
    """Release mibench.log file handles so temp dirs can be removed."""
    logger = logging.getLogger("mibench")
    for handler in list(logger.handlers):
        if isinstance(handler, logging.FileHandler):
            handler.close()
            logger.removeHandler(handler)
