"""
Welch two-sample t-test feature selection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from scipy import special

from mibench.core.exceptions import DimensionMismatchError, InsufficientSampleError, SingleClassError
from mibench.data.model import Label
from mibench.features.spectral import FeatureVector

logger = logging.getLogger("mibench")


@dataclass(frozen=True)
class FeatureMask:
    indices: Tuple[int, ...]
    source_dimension: int
    p_values: np.ndarray = field(repr=False)

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise DimensionMismatchError("Mask indices must be strictly increasing")
        if indices and (indices[0] < 0 or indices[-1] >= self.source_dimension):
            raise DimensionMismatchError(f"Mask indices out of range for dimension {self.source_dimension}")
        p_values = np.array(self.p_values, dtype=np.float64, copy=True).ravel()
        if p_values.size != self.source_dimension:
            raise DimensionMismatchError(
                f"{p_values.size} p-values recorded for a {self.source_dimension}-dimensional source"
            )
        p_values.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "p_values", p_values)

    @property
    def n_selected(self) -> int:
        return len(self.indices)

    @classmethod
    def identity(cls, dimension: int) -> FeatureMask:
        return cls(tuple(range(dimension)), dimension, np.zeros(dimension))


def welch_statistics(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Column-wise Welch test of samples a (n_a x d) against b (n_b x d).

    Returns (t, df, p) arrays of length d. Two-sided p comes from the regularized
    incomplete beta function: p = I_{df/(df + t^2)}(df/2, 1/2).
    Zero variance in both samples gives t = 0, p = 1 for equal means and t = +-inf, p = 0 otherwise.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n_a, n_b = a.shape[0], b.shape[0]
    if n_a < 2 or n_b < 2:
        raise InsufficientSampleError(f"Welch t-test needs at least 2 points per sample, got {n_a} and {n_b}")

    diff = a.mean(axis=0) - b.mean(axis=0)
    se_a = a.var(axis=0, ddof=1) / n_a
    se_b = b.var(axis=0, ddof=1) / n_b
    se2 = se_a + se_b
    degenerate = se2 == 0

    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(degenerate, 0.0, diff / np.sqrt(np.where(degenerate, 1.0, se2)))
        df = se2 ** 2 / (se_a ** 2 / (n_a - 1) + se_b ** 2 / (n_b - 1))
        p = special.betainc(df / 2.0, 0.5, df / (df + t ** 2))

    t = np.where(degenerate & (diff != 0), np.copysign(np.inf, diff), t)
    p = np.where(degenerate, np.where(diff == 0, 1.0, 0.0), p)
    return t, df, np.clip(p, 0.0, 1.0)


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> Tuple[float, float]:
    """
    Two-sided Welch t-test. Returns (t, p).

    Raises:
        InsufficientSampleError: either sample has fewer than 2 points
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1, 1)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 1)
    t, _, p = welch_statistics(a, b)
    return float(t[0]), float(p[0])


def select_from_matrix(features: np.ndarray, labels: np.ndarray, p_threshold: float) -> FeatureMask:
    """Select columns of an (n x d) matrix whose Welch p-value is strictly below p_threshold."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    left = features[labels == int(Label.LEFT)]
    right = features[labels == int(Label.RIGHT)]
    if left.shape[0] == 0 or right.shape[0] == 0:
        raise SingleClassError("Feature selection needs both classes in the training data")

    _, _, p_values = welch_statistics(left, right)
    selected = np.flatnonzero(p_values < p_threshold)
    return FeatureMask(tuple(selected.tolist()), features.shape[1], p_values)


def select_features(train: Sequence[FeatureVector], p_threshold: float) -> FeatureMask:
    """
    Per-feature Welch t-test between the two classes; feature i is kept iff p_i < p_threshold.

    Raises:
        SingleClassError: only one class present
        DimensionMismatchError: vectors of differing dimensionality
    """
    if not train:
        raise SingleClassError("Feature selection needs a non-empty training set")
    dimension = train[0].dimension
    if any(v.dimension != dimension for v in train):
        raise DimensionMismatchError("Feature vectors differ in dimensionality")
    matrix = np.vstack([v.values for v in train]) if dimension else np.zeros((len(train), 0))
    labels = np.array([int(v.label) for v in train])
    mask = select_from_matrix(matrix, labels, p_threshold)
    logger.info(f"t-test selected {mask.n_selected} of {dimension} features at p < {p_threshold}")
    return mask


def apply_mask(v: FeatureVector, m: FeatureMask) -> FeatureVector:
    """Restrict a feature vector to the mask's selected indices, in order."""
    if v.dimension != m.source_dimension:
        raise DimensionMismatchError(
            f"Mask built for {m.source_dimension} features applied to a {v.dimension}-dimensional vector"
        )
    idx = list(m.indices)
    return FeatureVector(
        values=v.values[idx],
        label=v.label,
        feature_names=tuple(v.feature_names[i] for i in idx),
    )
