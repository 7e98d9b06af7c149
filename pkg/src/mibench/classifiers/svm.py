"""
Soft-margin SVM trained by sequential minimal optimization on the full Gram matrix.

Dual (maximised):  W(l) = sum_j l_j - 1/2 sum_jk l_j l_k y_j y_k k(x_j, x_k),
subject to 0 <= l_j <= C and sum_j l_j y_j = 0, with y in {-1, +1}.

Each step moves the maximal KKT-violating pair along the equality constraint by the
exact clipped line-search step, so W never decreases. The solver stops once the
violation gap m(l) - M(l) is at most `tol`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from mibench.classifiers.base import LabeledSet, check_trainable
from mibench.core.exceptions import ConvergenceError, InvalidParameterError

logger = logging.getLogger("mibench")

# Curvature floor for non-positive-definite pairs
TAU = 1e-12


class KernelType(str, Enum):
    LINEAR = "linear"
    RBF = "rbf"


@dataclass(frozen=True)
class Kernel:
    kind: KernelType = KernelType.RBF
    sigma: Optional[float] = None

    def gram(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == KernelType.LINEAR:
            return a @ b.T
        sq = squared_distances(a, b)
        return np.exp(-sq / (2.0 * self.sigma ** 2))


def squared_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    sq = np.sum(a ** 2, axis=1)[:, None] + np.sum(b ** 2, axis=1)[None, :] - 2.0 * (a @ b.T)
    return np.maximum(sq, 0.0)


def median_sigma(features: np.ndarray) -> float:
    """Median of pairwise Euclidean distances between distinct training points (1.0 if all coincide)."""
    n = features.shape[0]
    if n < 2:
        return 1.0
    upper = np.triu_indices(n, k=1)
    distances = np.sqrt(squared_distances(features, features)[upper])
    sigma = float(np.median(distances))
    return sigma if sigma > 0 else 1.0


@dataclass(frozen=True)
class SvmModel:
    kernel: Kernel
    support_vectors: np.ndarray = field(repr=False)
    support_labels: np.ndarray = field(repr=False)
    multipliers: np.ndarray = field(repr=False)
    bias: float
    c: float
    support_indices: Tuple[int, ...] = ()
    iterations: int = 0
    objective_history: Tuple[float, ...] = field(default=(), repr=False)

    @property
    def dimension(self) -> int:
        return int(self.support_vectors.shape[1])

    def weight_vector(self) -> np.ndarray:
        """w* = sum_j l_j y_j x_j (meaningful for the linear kernel)."""
        return (self.multipliers * self.support_labels) @ self.support_vectors

    def decision_function(self, features: np.ndarray) -> np.ndarray:
        if self.support_vectors.shape[0] == 0:
            return np.full(features.shape[0], self.bias)
        gram = self.kernel.gram(features, self.support_vectors)
        return gram @ (self.multipliers * self.support_labels) + self.bias

    def predict_batch(self, features: np.ndarray) -> np.ndarray:
        return (self.decision_function(features) > 0).astype(np.int64)


@dataclass
class DualSolution:
    multipliers: np.ndarray
    bias: float
    iterations: int
    objective_history: Tuple[float, ...]


def _dual_objective(alpha: np.ndarray, grad: np.ndarray) -> float:
    # grad = Q alpha - 1  =>  W = sum(alpha) - 1/2 alpha^T Q alpha = 1/2 (sum(alpha) - alpha . grad)
    return 0.5 * (float(np.sum(alpha)) - float(alpha @ grad))


def _violators(alpha: np.ndarray, y: np.ndarray, c: float) -> Tuple[np.ndarray, np.ndarray]:
    up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
    low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < c))
    return up, low


def solve_dual(gram: np.ndarray, y: np.ndarray, c: float, tol: float, max_iterations: int) -> DualSolution:
    """
    SMO with maximal-violating-pair selection.

    Raises:
        ConvergenceError: the gap is still above tol after max_iterations pair updates
    """
    n = y.size
    alpha = np.zeros(n)
    grad = -np.ones(n)
    history = [0.0]
    iterations = 0

    while True:
        score = -y * grad
        up, low = _violators(alpha, y, c)
        if not up.any() or not low.any():
            break
        i = int(np.flatnonzero(up)[np.argmax(score[up])])
        j = int(np.flatnonzero(low)[np.argmin(score[low])])
        gap = score[i] - score[j]
        if gap <= tol:
            break
        if iterations >= max_iterations:
            raise ConvergenceError(f"SMO gap {gap:.3g} still above tol {tol}", iterations)

        # Move alpha_i += y_i t, alpha_j -= y_j t
        curvature = max(gram[i, i] + gram[j, j] - 2.0 * gram[i, j], TAU)
        step = gap / curvature
        step = min(step, c - alpha[i] if y[i] > 0 else alpha[i])
        step = min(step, alpha[j] if y[j] > 0 else c - alpha[j])

        alpha[i] = float(np.clip(alpha[i] + y[i] * step, 0.0, c))
        alpha[j] = float(np.clip(alpha[j] - y[j] * step, 0.0, c))
        grad += step * y * (gram[:, i] - gram[:, j])

        iterations += 1
        history.append(_dual_objective(alpha, grad))

    bias = _bias(alpha, y, grad, c)
    return DualSolution(alpha, bias, iterations, tuple(history))


def _bias(alpha: np.ndarray, y: np.ndarray, grad: np.ndarray, c: float) -> float:
    """
    Mean of y_j - sum_k l_k y_k k(x_k, x_j) over free support vectors; otherwise the midpoint
    of the interval of biases consistent with the bounded multipliers.
    """
    # y_j - g(x_j) where g is the decision function without bias; g = y * (grad + 1)
    residual = y - y * (grad + 1.0)
    free = (alpha > 0) & (alpha < c)
    if free.any():
        return float(np.mean(residual[free]))
    up, low = _violators(alpha, y, c)
    lower = float(np.max(residual[up])) if up.any() else -np.inf
    upper = float(np.min(residual[low])) if low.any() else np.inf
    if np.isinf(lower) and np.isinf(upper):
        return 0.0
    if np.isinf(lower):
        return upper
    if np.isinf(upper):
        return lower
    return 0.5 * (lower + upper)


def train_svm(
    train: LabeledSet,
    kernel: Union[str, KernelType] = KernelType.RBF,
    c: float = 1.0,
    tol: float = 1e-3,
    sigma: Union[str, float, None] = "median",
    max_passes: int = 10_000,
) -> SvmModel:
    """
    Train a soft-margin SVM. Labels 0/1 are mapped to -1/+1 internally.

    `sigma` applies to the RBF kernel: "median" (or None) uses the median pairwise distance
    of the training points, a number fixes the bandwidth.

    Raises:
        MissingClassError / EmptyFeatureSpaceError: via check_trainable
        ConvergenceError: iteration budget (max_passes * n) exhausted
    """
    if c <= 0 or tol <= 0:
        raise InvalidParameterError(f"SVM needs C > 0 and tol > 0, got C={c}, tol={tol}")
    check_trainable(train)

    kind = KernelType(kernel)
    if kind == KernelType.RBF:
        if sigma is None or sigma == "median":
            bandwidth = median_sigma(train.features)
        else:
            bandwidth = float(sigma)
            if bandwidth <= 0:
                raise InvalidParameterError(f"RBF sigma must be positive, got {sigma}")
        fitted_kernel = Kernel(kind, bandwidth)
    else:
        fitted_kernel = Kernel(kind)

    y = np.where(train.labels == 1, 1.0, -1.0)
    gram = fitted_kernel.gram(train.features, train.features)
    solution = solve_dual(gram, y, float(c), float(tol), int(max_passes) * max(len(train), 1))

    support = np.flatnonzero(solution.multipliers > 0)
    logger.debug(f"SMO converged in {solution.iterations} iterations with {support.size} support vectors")
    return SvmModel(
        kernel=fitted_kernel,
        support_vectors=train.features[support],
        support_labels=y[support],
        multipliers=solution.multipliers[support],
        bias=solution.bias,
        c=float(c),
        support_indices=tuple(int(i) for i in support),
        iterations=solution.iterations,
        objective_history=solution.objective_history,
    )
