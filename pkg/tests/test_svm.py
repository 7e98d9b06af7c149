import os
import sys
import unittest

import numpy as np

# Add src to the path so we can import mibench modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../src")))

from mibench.classifiers.base import LabeledSet, accuracy_percent, predict
from mibench.classifiers.svm import Kernel, KernelType, median_sigma, solve_dual, train_svm
from mibench.core.exceptions import ConvergenceError, InvalidParameterError, MissingClassError
from mibench.data.model import Label

TOL = 1e-3


def _full_multipliers(model, n):
    lam = np.zeros(n)
    lam[list(model.support_indices)] = model.multipliers
    return lam


class TestHandSolvedMargin(unittest.TestCase):

    def setUp(self):
        train = LabeledSet([[0.0, 0.0], [2.0, 2.0]], [0, 1])
        self.model = train_svm(train, kernel="linear", c=1e6, tol=TOL)

    def test_recovers_max_margin_hyperplane(self):
        np.testing.assert_allclose(self.model.weight_vector(), [0.5, 0.5], atol=1e-4)
        self.assertAlmostEqual(self.model.bias, -1.0, delta=1e-4)
        margin = 1.0 / np.linalg.norm(self.model.weight_vector())
        self.assertAlmostEqual(margin, np.sqrt(2.0), delta=1e-3)

    def test_point_on_the_boundary_is_class_0(self):
        self.assertEqual(predict(self.model, [1.0, 1.0]), Label.RIGHT)
        self.assertEqual(predict(self.model, [1.1, 1.0]), Label.LEFT)

    def test_both_points_are_support_vectors(self):
        self.assertEqual(self.model.support_indices, (0, 1))


class TestXor(unittest.TestCase):

    def setUp(self):
        self.train = LabeledSet([[0, 0], [1, 1], [0, 1], [1, 0]], [0, 0, 1, 1])

    def test_rbf_separates_xor(self):
        model = train_svm(self.train, kernel="rbf", c=10.0, sigma=0.5, tol=TOL)
        self.assertEqual(accuracy_percent(model, self.train), 100.0)

    def test_linear_kernel_cannot(self):
        model = train_svm(self.train, kernel="linear", c=10.0, tol=TOL)
        self.assertLess(accuracy_percent(model, self.train), 100.0)


class TestKktCertificate(unittest.TestCase):

    def _assert_kkt(self, model, train):
        y = np.where(train.labels == 1, 1.0, -1.0)
        lam = _full_multipliers(model, len(train))
        margins = y * model.decision_function(train.features)
        c = model.c
        slack = TOL + 1e-9

        at_zero = lam == 0
        at_c = lam == c
        free = ~at_zero & ~at_c
        self.assertTrue(np.all(lam >= 0) and np.all(lam <= c))
        self.assertTrue(np.all(margins[at_zero] >= 1 - slack))
        self.assertTrue(np.all(np.abs(margins[free] - 1) <= slack))
        self.assertTrue(np.all(margins[at_c] <= 1 + slack))
        self.assertLessEqual(abs(float(lam @ y)), slack)

    def test_certificate_holds_on_random_sets(self):
        rng = np.random.default_rng(0)
        for trial in range(50):
            n_per_class = int(rng.integers(3, 31))
            dimension = int(rng.integers(1, 6))
            x0 = rng.standard_normal((n_per_class, dimension))
            x1 = rng.standard_normal((n_per_class, dimension)) + rng.uniform(0.0, 2.0)
            train = LabeledSet(np.vstack([x0, x1]), [0] * n_per_class + [1] * n_per_class)
            kernel = "linear" if trial % 2 else "rbf"
            c = float(rng.choice([0.1, 1.0, 10.0]))
            model = train_svm(train, kernel=kernel, c=c, tol=TOL)
            with self.subTest(trial=trial, kernel=kernel, c=c):
                self._assert_kkt(model, train)

    def test_dual_objective_never_decreases(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((40, 3))
        train = LabeledSet(x, (x[:, 0] + 0.5 * rng.standard_normal(40) > 0).astype(int))
        model = train_svm(train, kernel="rbf", c=1.0, tol=TOL)
        history = np.array(model.objective_history)
        self.assertGreater(history.size, 1)
        self.assertTrue(np.all(np.diff(history) >= -1e-12 * max(1.0, abs(history[-1]))))


class TestSolverBudget(unittest.TestCase):

    def test_budget_exhaustion_raises(self):
        gram = np.array([[1.0, 0.2], [0.2, 1.0]])
        with self.assertRaises(ConvergenceError) as ctx:
            solve_dual(gram, np.array([-1.0, 1.0]), 1.0, TOL, max_iterations=0)
        self.assertEqual(ctx.exception.iterations, 0)


class TestKernel(unittest.TestCase):

    def test_median_sigma(self):
        self.assertAlmostEqual(median_sigma(np.array([[0.0, 0.0], [3.0, 4.0]])), 5.0)
        self.assertEqual(median_sigma(np.ones((3, 2))), 1.0)

    def test_rbf_gram_diagonal_is_one(self):
        x = np.random.default_rng(2).standard_normal((5, 3))
        gram = Kernel(KernelType.RBF, 1.3).gram(x, x)
        np.testing.assert_allclose(np.diag(gram), 1.0)
        np.testing.assert_allclose(gram, gram.T, atol=1e-14)

    def test_invalid_parameters(self):
        train = LabeledSet([[0.0], [1.0]], [0, 1])
        with self.assertRaises(InvalidParameterError):
            train_svm(train, c=0.0)
        with self.assertRaises(InvalidParameterError):
            train_svm(train, kernel="rbf", sigma=-1.0)
        with self.assertRaises(MissingClassError):
            train_svm(LabeledSet([[0.0], [1.0]], [1, 1]))


if __name__ == "__main__":
    unittest.main()
