"""
Trial set -> feature table: segment extraction, band-pass filtering and periodogram pooling
for every trial, computed once before any Monte-Carlo loop.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from mibench.data.model import TrialSet
from mibench.features.spectral import FeatureVector, PoolingConfig, assemble_features
from mibench.preprocess.butterworth import FilterSpec, apply_bandpass, design_butterworth
from mibench.preprocess.segment import extract_mi_segment

logger = logging.getLogger("mibench")


@dataclass(frozen=True)
class PipelineSettings:
    drop_head_s: float = 1.0
    drop_tail_s: float = 0.5
    filter_order: int = 4
    low_hz: float = 3.0
    high_hz: float = 35.0
    zero_phase: bool = True
    pooling: PoolingConfig = field(default_factory=PoolingConfig)


@dataclass(frozen=True)
class FeatureTable:
    """Row i holds the features of trial i of the source TrialSet, in the same order."""
    features: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    subject_ids: Tuple[str, ...]
    trial_ids: Tuple[str, ...]
    feature_names: Tuple[str, ...]

    @property
    def dimension(self) -> int:
        return self.features.shape[1]

    def rows_for_subject(self, subject_id: str) -> np.ndarray:
        return np.array([i for i, s in enumerate(self.subject_ids) if s == subject_id], dtype=np.int64)


def trial_feature_vectors(trial_set: TrialSet, settings: PipelineSettings,
                          filt: Optional[FilterSpec] = None):
    """Yield one FeatureVector per trial, in trial-set order."""
    if filt is None:
        filt = design_butterworth(settings.filter_order, settings.low_hz, settings.high_hz,
                                  trial_set.sampling_rate_hz)
    for trial in trial_set.trials:
        epoch = extract_mi_segment(trial, settings.drop_head_s, settings.drop_tail_s, trial_set.protocol)
        epoch = apply_bandpass(epoch, filt, zero_phase=settings.zero_phase)
        yield assemble_features(epoch, settings.pooling)


def build_feature_table(trial_set: TrialSet, settings: PipelineSettings) -> FeatureTable:
    vectors = list(trial_feature_vectors(trial_set, settings))
    if vectors:
        features = np.vstack([v.values for v in vectors])
        names = vectors[0].feature_names
    else:
        features = np.zeros((0, 0))
        names = ()
    features.setflags(write=False)
    table = FeatureTable(
        features=features,
        labels=trial_set.labels,
        subject_ids=tuple(t.subject_id for t in trial_set.trials),
        trial_ids=tuple(t.trial_id for t in trial_set.trials),
        feature_names=tuple(names),
    )
    logger.info(f"Extracted {table.dimension} features for {len(vectors)} trials")
    return table


def feature_vectors(table: FeatureTable):
    """The table's rows as FeatureVector objects."""
    return [FeatureVector(row, int(label), table.feature_names) for row, label in zip(table.features, table.labels)]
