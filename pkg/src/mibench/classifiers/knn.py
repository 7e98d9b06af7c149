"""
k-nearest-neighbour majority vote with Euclidean distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mibench.classifiers.base import LabeledSet, check_trainable
from mibench.core.exceptions import InvalidParameterError


@dataclass(frozen=True)
class KnnModel:
    features: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    k: int = 3

    @property
    def dimension(self) -> int:
        return int(self.features.shape[1])

    def neighbours(self, query: np.ndarray) -> np.ndarray:
        """Indices of the k nearest training rows; equal distances keep the lower index first."""
        distances = np.sum((self.features - query) ** 2, axis=1)
        return np.argsort(distances, kind="stable")[: self.k]

    def predict_batch(self, features: np.ndarray) -> np.ndarray:
        out = np.empty(features.shape[0], dtype=np.int64)
        for row, query in enumerate(features):
            votes = int(np.sum(self.labels[self.neighbours(query)]))
            out[row] = 1 if 2 * votes > self.k else 0
        return out


def train_knn(train: LabeledSet, k: int = 3) -> KnnModel:
    """
    Raises:
        InvalidParameterError: k even, non-positive or larger than the training set
    """
    if k < 1 or k % 2 == 0:
        raise InvalidParameterError(f"k must be an odd positive integer, got {k}")
    if k > len(train):
        raise InvalidParameterError(f"k = {k} exceeds the training size {len(train)}")
    check_trainable(train, min_per_class=0)
    return KnnModel(features=train.features, labels=train.labels, k=int(k))
