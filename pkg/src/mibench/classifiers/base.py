"""
Shared training-set type and the uniform predict contract for the four classifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence, Tuple, runtime_checkable

import numpy as np

from mibench.core.exceptions import (
    DimensionMismatchError,
    EmptyFeatureSpaceError,
    MissingClassError,
    NonFiniteInputError,
)
from mibench.data.model import Label
from mibench.features.selection import FeatureMask
from mibench.features.spectral import FeatureVector


@dataclass(frozen=True)
class LabeledSet:
    """
    Training sample S_n: rows of `features` with 0/1 `labels`. `trial_ids` tracks where each
    row came from so train/test disjointness can be checked.
    """
    features: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    trial_ids: Tuple[str, ...] = ()
    feature_names: Tuple[str, ...] = ()

    def __post_init__(self):
        features = np.array(self.features, dtype=np.float64, copy=True)
        if features.ndim == 1:
            features = features.reshape(-1, 1) if features.size else features.reshape(0, 0)
        labels = np.array(self.labels, dtype=np.int64, copy=True).ravel()
        if features.shape[0] != labels.size:
            raise DimensionMismatchError(f"{features.shape[0]} feature rows but {labels.size} labels")
        if labels.size and not np.all((labels == 0) | (labels == 1)):
            raise DimensionMismatchError("Labels must be 0 (right) or 1 (left)")
        trial_ids = tuple(self.trial_ids) or tuple(str(i) for i in range(labels.size))
        if len(trial_ids) != labels.size:
            raise DimensionMismatchError(f"{len(trial_ids)} trial ids for {labels.size} rows")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "trial_ids", trial_ids)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @classmethod
    def from_vectors(cls, vectors: Sequence[FeatureVector], trial_ids: Sequence[str] = ()) -> LabeledSet:
        if not vectors:
            return cls(np.zeros((0, 0)), np.zeros(0, dtype=np.int64), tuple(trial_ids))
        dimension = vectors[0].dimension
        if any(v.dimension != dimension for v in vectors):
            raise DimensionMismatchError("Feature vectors differ in dimensionality")
        return cls(
            features=np.vstack([v.values for v in vectors]).reshape(len(vectors), dimension),
            labels=np.array([int(v.label) for v in vectors]),
            trial_ids=tuple(trial_ids),
            feature_names=vectors[0].feature_names,
        )

    @property
    def vectors(self) -> Tuple[FeatureVector, ...]:
        names = self.feature_names or tuple(f"f{i}" for i in range(self.dimension))
        return tuple(FeatureVector(row, int(y), names) for row, y in zip(self.features, self.labels))

    def __len__(self) -> int:
        return int(self.labels.size)

    @property
    def dimension(self) -> int:
        return int(self.features.shape[1]) if self.features.ndim == 2 else 0

    @property
    def n0(self) -> int:
        return int(np.sum(self.labels == int(Label.RIGHT)))

    @property
    def n1(self) -> int:
        return int(np.sum(self.labels == int(Label.LEFT)))

    def class_indices(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == int(label))

    def subset(self, rows: Sequence[int]) -> LabeledSet:
        rows = np.asarray(rows, dtype=np.int64)
        return LabeledSet(
            features=self.features[rows],
            labels=self.labels[rows],
            trial_ids=tuple(self.trial_ids[i] for i in rows),
            feature_names=self.feature_names,
        )

    def masked(self, mask: FeatureMask) -> LabeledSet:
        if mask.source_dimension != self.dimension:
            raise DimensionMismatchError(
                f"Mask built for {mask.source_dimension} features applied to {self.dimension}-dimensional data"
            )
        idx = list(mask.indices)
        return LabeledSet(
            features=self.features[:, idx].reshape(len(self), len(idx)),
            labels=self.labels,
            trial_ids=self.trial_ids,
            feature_names=tuple(self.feature_names[i] for i in idx) if self.feature_names else (),
        )


def check_trainable(train: LabeledSet, min_per_class: int = 1) -> None:
    """
    Raises:
        EmptyFeatureSpaceError: zero features
        MissingClassError: a class has fewer than min_per_class rows
        NonFiniteInputError: NaN/inf in the features
    """
    if train.dimension == 0:
        raise EmptyFeatureSpaceError("Training data has zero features")
    if train.n0 < min_per_class or train.n1 < min_per_class:
        raise MissingClassError(
            f"Training needs >= {min_per_class} point(s) per class, got n0={train.n0}, n1={train.n1}"
        )
    if not np.all(np.isfinite(train.features)):
        raise NonFiniteInputError("Training features contain non-finite values")


def as_matrix(x, dimension: int) -> np.ndarray:
    """Coerce a FeatureVector, 1-D vector or 2-D matrix to an (m x dimension) float matrix."""
    if isinstance(x, FeatureVector):
        x = x.values
    matrix = np.asarray(x, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.shape[1] != dimension:
        raise DimensionMismatchError(f"Model expects {dimension} features, got {matrix.shape[1]}")
    return matrix


@runtime_checkable
class TrainedModel(Protocol):
    """Every fitted classifier exposes its dimensionality and a batch prediction returning 0/1."""

    @property
    def dimension(self) -> int: ...

    def predict_batch(self, features: np.ndarray) -> np.ndarray: ...


def predict(model: TrainedModel, x) -> Label:
    """
    Predict one label. Decision values of exactly 0 map to class 0 (right).

    Raises:
        DimensionMismatchError: x does not match the model's dimensionality
    """
    return Label(int(model.predict_batch(as_matrix(x, model.dimension))[0]))


def predict_many(model: TrainedModel, features: np.ndarray) -> np.ndarray:
    return model.predict_batch(as_matrix(features, model.dimension))


def accuracy_percent(model: TrainedModel, test: LabeledSet) -> float:
    """100 * correct / |test|."""
    if len(test) == 0:
        raise DimensionMismatchError("Accuracy on an empty test set is undefined")
    predictions = predict_many(model, test.features)
    correct = int(np.sum(predictions == test.labels))
    return 100.0 * correct / len(test)
