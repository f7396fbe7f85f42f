import math
import unittest

import numpy as np

from ssmlab.autocorr import (
    build_autocov,
    lambda_max,
    power_iteration,
    sample_autocorrelation,
    sample_gp,
    spectrum_sweep,
    whiten,
)
from ssmlab.errors import ConvergenceError, ShapeMismatchError, ValidationError
from ssmlab.models.autocov_spec import SYNTHETIC_KINDS, AutocovSpec


class TestBuildAutocov(unittest.TestCase):
    """Synthetic and empirical autocovariances."""

    def test_iid(self):
        """Uncorrelated inputs have the identity."""
        np.testing.assert_array_equal(build_autocov(AutocovSpec("iid", 3)), np.eye(3))

    def test_ou(self):
        """Exponential decay in the lag."""
        K = build_autocov(AutocovSpec("ou", 2))

        np.testing.assert_allclose(K, [[1.0, math.exp(-0.5)], [math.exp(-0.5), 1.0]])

    def test_rbf(self):
        """Squared-exponential decay, with or without a length scale."""
        K = build_autocov(AutocovSpec("rbf", 2))

        self.assertAlmostEqual(K[0, 1], math.exp(-math.pi), places=15)

        K = build_autocov(AutocovSpec("rbf", 3, length_scale=2.0))

        self.assertAlmostEqual(K[0, 2], math.exp(-2.0), places=15)

    def test_constant(self):
        """A constant sequence has an all-ones autocovariance."""
        np.testing.assert_array_equal(build_autocov(AutocovSpec("constant", 4)), np.ones((4, 4)))

    def test_rand(self):
        """The random kind is symmetric with unit diagonal and reproducible."""
        K = build_autocov(AutocovSpec("rand", 50, seed=3))

        np.testing.assert_allclose(K, K.T, atol=1e-14)
        np.testing.assert_allclose(np.diag(K), np.ones(50), rtol=1e-14)
        np.testing.assert_array_equal(K, build_autocov(AutocovSpec("rand", 50, seed=3)))

    def test_trace_is_length(self):
        """Every synthetic kind has trace L."""
        for kind in SYNTHETIC_KINDS:
            for L in (1, 7, 64):
                K = build_autocov(AutocovSpec(kind, L))

                self.assertAlmostEqual(float(np.trace(K)), L, places=10, msg=kind)

    def test_empirical(self):
        """A valid matrix passes through unchanged."""
        matrix = np.array([[2.0, 0.5], [0.5, 1.0]])

        np.testing.assert_array_equal(build_autocov(AutocovSpec.empirical(matrix)), matrix)

    def test_empirical_rejects_invalid(self):
        """Asymmetric or indefinite matrices are rejected."""
        with self.assertRaises(ValidationError):
            build_autocov(AutocovSpec.empirical(np.array([[1.0, 0.5], [0.0, 1.0]])))

        with self.assertRaises(ValidationError):
            build_autocov(AutocovSpec.empirical(np.array([[1.0, 2.0], [2.0, 1.0]])))

    def test_invalid_spec(self):
        """Unknown kinds and missing matrices are rejected."""
        with self.assertRaises(ValidationError):
            AutocovSpec("brownian", 4)  # type: ignore[arg-type]

        with self.assertRaises(ValidationError):
            AutocovSpec("empirical", 4)

        with self.assertRaises(ValidationError):
            AutocovSpec("iid", 0)


class TestSampleGp(unittest.TestCase):
    """Gaussian process draws."""

    def test_identity_covariance(self):
        """The sample covariance of white noise approaches the identity."""
        n = 20_000
        X = sample_gp(np.eye(4), n, seed=1)

        self.assertEqual(X.shape, (n, 4))
        self.assertLess(np.max(np.abs(X.T @ X / n - np.eye(4))), 6 / math.sqrt(n))

    def test_ou_covariance(self):
        """The sample covariance approaches the OU matrix."""
        n = 100_000
        K = build_autocov(AutocovSpec("ou", 8))
        X = sample_gp(K, n, seed=2)

        self.assertLess(np.max(np.abs(X.T @ X / n - K)), 6 / math.sqrt(n))

    def test_rank_deficient(self):
        """A singular covariance still factorizes through the jitter."""
        X = sample_gp(np.ones((5, 5)), 10, seed=0)

        np.testing.assert_allclose(X, np.repeat(X[:, :1], 5, axis=1), atol=1e-3)

    def test_zero_covariance(self):
        """A zero matrix gives zero draws."""
        np.testing.assert_array_equal(sample_gp(np.zeros((3, 3)), 4), np.zeros((4, 3)))

    def test_reproducible(self):
        """The same seed gives the same draws."""
        K = build_autocov(AutocovSpec("rbf", 16))

        np.testing.assert_array_equal(sample_gp(K, 5, seed=7), sample_gp(K, 5, seed=7))

    def test_sample_autocorrelation(self):
        """The sample matrix has the shape of the process."""
        R = sample_autocorrelation(AutocovSpec("iid", 8), n=50, seed=0)

        self.assertEqual(R.shape, (8, 8))
        np.testing.assert_allclose(R, R.T)

    def test_invalid(self):
        """Non-square matrices and empty draws are rejected."""
        with self.assertRaises(ShapeMismatchError):
            sample_gp(np.ones((2, 3)), 4)

        with self.assertRaises(ValidationError):
            sample_gp(np.eye(2), 0)


class TestLambdaMax(unittest.TestCase):
    """Top eigenvalue of autocorrelation matrices."""

    def test_extremes(self):
        """1 for the identity and L for the all-ones matrix."""
        self.assertAlmostEqual(lambda_max(np.eye(10)).lambda_max, 1.0, places=12)

        report = lambda_max(np.ones((50, 50)))

        self.assertAlmostEqual(report.lambda_max, 50.0, places=10)
        self.assertEqual(report.method, "exact")
        self.assertAlmostEqual(report.normalized, 50.0, places=10)

    def test_power_matches_exact(self):
        """Power iteration agrees with the dense solver on an OU matrix."""
        K = build_autocov(AutocovSpec("ou", 256))
        exact = lambda_max(K, method="exact").lambda_max
        report = lambda_max(K, method="power", tol=1e-12)

        self.assertEqual(report.method, "power-iteration")
        self.assertIsNotNone(report.iterations)
        self.assertLess(abs(report.lambda_max - exact), 1e-6 * exact)

    def test_power_ones(self):
        """The all-ones start vector is already the top eigenvector of all-ones."""
        value, vector, iterations = power_iteration(np.ones((8, 8)))

        self.assertAlmostEqual(value, 8.0, places=12)
        np.testing.assert_allclose(np.abs(vector), np.full(8, 1 / math.sqrt(8)))
        self.assertEqual(iterations, 1)

    def test_power_not_converged(self):
        """Running out of iterations raises."""
        with self.assertRaises(ConvergenceError):
            power_iteration(np.diag([1.0, 2.0]), max_iter=1)

    def test_zero_matrix(self):
        """The zero matrix has top eigenvalue 0."""
        self.assertEqual(lambda_max(np.zeros((4, 4))).lambda_max, 0.0)

    def test_from_data(self):
        """Data matrices use the sample autocorrelation."""
        X = np.array([[1.0, 1.0], [1.0, 1.0]])

        self.assertAlmostEqual(lambda_max(X, is_data=True).lambda_max, 2.0, places=12)

        with self.assertRaises(ShapeMismatchError):
            lambda_max(np.ones(3), is_data=True)


class TestWhiten(unittest.TestCase):
    """Whitening of data matrices."""

    def test_ou_data_becomes_white(self):
        """Whitened OU draws have identity sample covariance."""
        X = sample_gp(build_autocov(AutocovSpec("ou", 32)), 10_000, seed=4)
        X_white, transform = whiten(X)

        covariance = X_white.T @ X_white / X.shape[0]

        self.assertLess(np.max(np.abs(covariance - np.eye(32))), 1e-6)
        self.assertLess(abs(lambda_max(X_white, is_data=True).lambda_max - 1.0), 1e-3)
        self.assertFalse(transform.ridge_used)
        np.testing.assert_allclose(transform.apply(X), X_white, atol=1e-12)

    def test_duplicate_column(self):
        """A rank-deficient matrix is whitened through the ridge."""
        rng = np.random.default_rng(5)
        X = rng.standard_normal((200, 4))
        X[:, 1] = X[:, 0]

        X_white, transform = whiten(X)

        self.assertTrue(transform.ridge_used)
        self.assertTrue(np.all(np.isfinite(X_white)))

        with self.assertRaises(ValidationError):
            whiten(X, ridge=0.0)

    def test_shape(self):
        """Whitening needs at least two rows."""
        with self.assertRaises(ShapeMismatchError):
            whiten(np.ones((1, 3)))

        with self.assertRaises(ShapeMismatchError):
            whiten(np.ones((4, 3)))[1].apply(np.ones((2, 2)))


class TestSpectrumSweep(unittest.TestCase):
    def test_rows(self):
        """One row per kind and length, independent of the thread count."""
        rows = spectrum_sweep(["iid", "ou"], [8, 16], n_samples=50, seed=1)
        threaded = spectrum_sweep(["iid", "ou"], [8, 16], n_samples=50, seed=1, jobs=2)

        self.assertEqual([(row.kind, row.L) for row in rows], [("iid", 8), ("iid", 16), ("ou", 8), ("ou", 16)])
        self.assertEqual(rows, threaded)
        self.assertAlmostEqual(rows[0].lambda_max, 1.0, places=12)


if __name__ == "__main__":
    unittest.main()
