"""
Periodogram features, t-test selection and the trial-set feature table.
"""

from mibench.features.extraction import FeatureTable, PipelineSettings, build_feature_table
from mibench.features.selection import FeatureMask, apply_mask, select_features, welch_t_test
from mibench.features.spectral import (
    FeatureVector,
    PoolingConfig,
    SpectrumEstimate,
    assemble_features,
    periodogram,
    pool_max,
)

__all__ = [
    "FeatureMask",
    "FeatureTable",
    "FeatureVector",
    "PipelineSettings",
    "PoolingConfig",
    "SpectrumEstimate",
    "apply_mask",
    "assemble_features",
    "build_feature_table",
    "periodogram",
    "pool_max",
    "select_features",
    "welch_t_test",
]
