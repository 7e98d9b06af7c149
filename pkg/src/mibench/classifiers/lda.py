"""
Plug-in linear discriminant analysis with shrinkage of the pooled covariance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mibench.classifiers.base import LabeledSet, check_trainable
from mibench.core.exceptions import InvalidParameterError, SingularCovarianceError


@dataclass(frozen=True)
class LdaModel:
    """Predicts class 1 iff w.x + b > 0."""
    w: np.ndarray = field(repr=False)
    b: float
    mean0: np.ndarray = field(repr=False)
    mean1: np.ndarray = field(repr=False)
    covariance: np.ndarray = field(repr=False)
    shrinkage: float = 0.0

    @property
    def dimension(self) -> int:
        return int(self.w.size)

    @property
    def threshold(self) -> float:
        """Decision point -b/w for one-dimensional models."""
        return -self.b / float(self.w[0])

    def decision_function(self, features: np.ndarray) -> np.ndarray:
        return features @ self.w + self.b

    def predict_batch(self, features: np.ndarray) -> np.ndarray:
        return (self.decision_function(features) > 0).astype(np.int64)


def pooled_covariance(train: LabeledSet) -> np.ndarray:
    """[(n0 - 1) S0 + (n1 - 1) S1] / (n0 + n1 - 2) with unbiased per-class covariances."""
    d = train.dimension
    scatter = np.zeros((d, d))
    for label in (0, 1):
        rows = train.features[train.labels == label]
        centered = rows - rows.mean(axis=0)
        scatter += centered.T @ centered
    dof = len(train) - 2
    if dof <= 0:
        return np.zeros((d, d))
    return scatter / dof


def shrink(covariance: np.ndarray, gamma: float) -> np.ndarray:
    """(1 - gamma) * S + gamma * (trace(S) / d) * I."""
    d = covariance.shape[0]
    target = np.trace(covariance) / d
    return (1.0 - gamma) * covariance + gamma * target * np.eye(d)


def train_lda(train: LabeledSet, shrinkage: float = 0.0) -> LdaModel:
    """
    Fit LDA: w = S^-1 (mu1 - mu0), b = -1/2 (mu1 - mu0)^T S^-1 (mu0 + mu1).

    Raises:
        MissingClassError / EmptyFeatureSpaceError / NonFiniteInputError: via check_trainable
        SingularCovarianceError: the regularised covariance is not positive definite
    """
    if not 0.0 <= shrinkage <= 1.0:
        raise InvalidParameterError(f"Shrinkage must lie in [0, 1], got {shrinkage}")
    check_trainable(train)

    mean0 = train.features[train.labels == 0].mean(axis=0)
    mean1 = train.features[train.labels == 1].mean(axis=0)
    covariance = shrink(pooled_covariance(train), shrinkage)
    covariance = 0.5 * (covariance + covariance.T)

    eigenvalues = np.linalg.eigvalsh(covariance)
    if eigenvalues[0] <= 0 or eigenvalues[0] <= 1e-12 * max(eigenvalues[-1], 0.0):
        raise SingularCovarianceError(
            f"Pooled covariance is singular (min eigenvalue {eigenvalues[0]:.3g}, shrinkage {shrinkage})"
        )

    delta = mean1 - mean0
    w = np.linalg.solve(covariance, delta)
    b = -0.5 * float(w @ (mean0 + mean1))
    return LdaModel(w=w, b=b, mean0=mean0, mean1=mean1, covariance=covariance, shrinkage=shrinkage)
