"""
The four classifiers behind one train/predict contract, looked up by algorithm name.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Union

from mibench.classifiers.base import LabeledSet, TrainedModel, accuracy_percent, predict, predict_many
from mibench.classifiers.cart import CartModel, train_cart
from mibench.classifiers.knn import KnnModel, train_knn
from mibench.classifiers.lda import LdaModel, train_lda
from mibench.classifiers.svm import SvmModel, train_svm
from mibench.core.exceptions import InvalidParameterError


@dataclass(frozen=True)
class ClassifierSettings:
    """Hyper-parameters for every algorithm, already resolved for one design (SS or SI)."""
    lda_shrinkage: float = 0.1
    svm_c: float = 1.0
    svm_kernel: str = "rbf"
    svm_sigma: Union[str, float] = "median"
    svm_tol: float = 1e-3
    svm_max_passes: int = 10_000
    cart_min_leaf: int = 3
    knn_k: int = 3


TRAINERS: Dict[str, Callable[[LabeledSet, ClassifierSettings], TrainedModel]] = {
    "CART": lambda train, s: train_cart(train, min_leaf=s.cart_min_leaf),
    "KNN": lambda train, s: train_knn(train, k=s.knn_k),
    "LDA": lambda train, s: train_lda(train, shrinkage=s.lda_shrinkage),
    "SVM": lambda train, s: train_svm(
        train, kernel=s.svm_kernel, c=s.svm_c, tol=s.svm_tol, sigma=s.svm_sigma, max_passes=s.svm_max_passes
    ),
}


def train_model(algorithm: str, train: LabeledSet, settings: ClassifierSettings) -> TrainedModel:
    trainer = TRAINERS.get(str(algorithm).upper())
    if trainer is None:
        raise InvalidParameterError(f"Unknown algorithm {algorithm!r}; expected one of {', '.join(TRAINERS)}")
    return trainer(train, settings)


__all__ = [
    "CartModel",
    "ClassifierSettings",
    "KnnModel",
    "LabeledSet",
    "LdaModel",
    "SvmModel",
    "TRAINERS",
    "TrainedModel",
    "accuracy_percent",
    "predict",
    "predict_many",
    "train_cart",
    "train_knn",
    "train_lda",
    "train_model",
    "train_svm",
]
