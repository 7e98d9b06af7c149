"""
Binary classification tree grown greedily on Gini impurity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from mibench.classifiers.base import LabeledSet
from mibench.core.exceptions import EmptyFeatureSpaceError, InvalidParameterError, MissingClassError

# Scores closer than this count as tied, so float noise cannot override the index tie-break
SCORE_EPS = 1e-12


@dataclass(frozen=True)
class CartNode:
    """Leaf when `feature` is None. Rows with x[feature] >= threshold go right."""
    label: int
    count: int
    impurity: float
    feature: Optional[int] = None
    threshold: float = 0.0
    left: Optional[CartNode] = None
    right: Optional[CartNode] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def leaves(self) -> Iterator[CartNode]:
        if self.is_leaf:
            yield self
            return
        yield from self.left.leaves()
        yield from self.right.leaves()

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


@dataclass(frozen=True)
class CartModel:
    root: CartNode
    n_features: int
    min_leaf: int

    @property
    def dimension(self) -> int:
        return self.n_features

    @property
    def n_leaves(self) -> int:
        return sum(1 for _ in self.root.leaves())

    def predict_batch(self, features: np.ndarray) -> np.ndarray:
        out = np.empty(features.shape[0], dtype=np.int64)
        self._route(self.root, features, np.arange(features.shape[0]), out)
        return out

    def _route(self, node: CartNode, features: np.ndarray, rows: np.ndarray, out: np.ndarray) -> None:
        if node.is_leaf:
            out[rows] = node.label
            return
        goes_right = features[rows, node.feature] >= node.threshold
        self._route(node.left, features, rows[~goes_right], out)
        self._route(node.right, features, rows[goes_right], out)


def gini(n0: int, n1: int) -> float:
    n = n0 + n1
    if n == 0:
        return 0.0
    p = n1 / n
    return 2.0 * p * (1.0 - p)


def majority_label(n0: int, n1: int) -> int:
    """Ties go to class 0."""
    return 1 if n1 > n0 else 0


def best_split(features: np.ndarray, labels: np.ndarray, min_leaf: int) -> Optional[Tuple[int, float, float]]:
    """
    Lowest weighted child Gini over every admissible (feature, midpoint threshold).

    Returns (feature, threshold, weighted impurity) or None when no split leaves both children
    with at least min_leaf rows. Ties go to the lowest feature index, then the lowest threshold.
    """
    n = labels.size
    best: Optional[Tuple[int, float, float]] = None
    for feature in range(features.shape[1]):
        order = np.argsort(features[:, feature], kind="stable")
        values = features[order, feature]
        ones = np.cumsum(labels[order])

        # Split after position i-1: left holds `sizes` rows
        sizes = np.arange(1, n)
        valid = (values[1:] > values[:-1]) & (sizes >= min_leaf) & (n - sizes >= min_leaf)
        if not valid.any():
            continue
        sizes = sizes[valid]
        left1 = ones[:-1][valid]
        left0 = sizes - left1
        right1 = ones[-1] - left1
        right0 = (n - sizes) - right1
        # n * weighted Gini = sum over children of (size - (c0^2 + c1^2) / size)
        score = (sizes - (left0 ** 2 + left1 ** 2) / sizes) + \
                ((n - sizes) - (right0 ** 2 + right1 ** 2) / (n - sizes))
        score = score / n

        pick = int(np.flatnonzero(score <= score.min() + SCORE_EPS)[0])
        candidate_score = float(score[pick])
        if best is None or candidate_score < best[2] - SCORE_EPS:
            positions = np.flatnonzero(valid)
            i = positions[pick]
            threshold = 0.5 * (float(values[i]) + float(values[i + 1]))
            best = (feature, threshold, candidate_score)
    return best


def _grow(features: np.ndarray, labels: np.ndarray, min_leaf: int) -> CartNode:
    n1 = int(labels.sum())
    n0 = labels.size - n1
    impurity = gini(n0, n1)
    leaf = CartNode(label=majority_label(n0, n1), count=labels.size, impurity=impurity)
    if n0 == 0 or n1 == 0:
        return leaf

    split = best_split(features, labels, min_leaf)
    # Weighted child Gini never exceeds the parent's; zero-gain splits are still taken
    if split is None or split[2] > impurity + SCORE_EPS:
        return leaf

    feature, threshold, _ = split
    goes_right = features[:, feature] >= threshold
    return CartNode(
        label=leaf.label,
        count=leaf.count,
        impurity=impurity,
        feature=feature,
        threshold=threshold,
        left=_grow(features[~goes_right], labels[~goes_right], min_leaf),
        right=_grow(features[goes_right], labels[goes_right], min_leaf),
    )


def train_cart(train: LabeledSet, min_leaf: int = 3) -> CartModel:
    """
    Grow a tree until nodes are pure or no admissible split remains.

    A split is taken even when it does not lower the Gini impurity, so an impure node only
    becomes a leaf when no split leaves min_leaf rows on both sides. With min_leaf=1 the tree
    therefore fits any training set without duplicate rows exactly, XOR-like layouts included.

    Raises:
        EmptyFeatureSpaceError: zero features
        MissingClassError: empty training set
    """
    if min_leaf < 1:
        raise InvalidParameterError(f"min_leaf must be positive, got {min_leaf}")
    if train.dimension == 0:
        raise EmptyFeatureSpaceError("Training data has zero features")
    if len(train) == 0:
        raise MissingClassError("CART needs a non-empty training set")
    root = _grow(train.features, train.labels, int(min_leaf))
    return CartModel(root=root, n_features=train.dimension, min_leaf=int(min_leaf))
