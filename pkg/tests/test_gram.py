import math
import unittest

import mpmath
import numpy as np
import scipy.integrate

from ssmlab.errors import SingularGramError, ValidationError
from ssmlab.gram import (
    approximation_error,
    approximation_matrix,
    basel_sum,
    condition_sweep,
    cosine_integral,
    gershgorin_bounds,
    gram_complex,
    gram_numeric,
    gram_real,
    positive_definite_check,
    separation_distance,
    target_energy,
    tradeoff_sweep,
    worst_case_matrix,
)
from ssmlab.models.state_vector import StateVector
from ssmlab.models.tradeoff_target import TradeoffTarget


class TestCosineIntegral(unittest.TestCase):
    """Closed form of the damped cosine products."""

    def test_values(self):
        """Worked examples."""
        self.assertEqual(cosine_integral(0, 0), 1.0)
        self.assertAlmostEqual(cosine_integral(1, 2), 0.3, places=15)

        for v in (0.5, 3.0):
            self.assertAlmostEqual(cosine_integral(v, v), 0.5 * (1 + 1 / (1 + 4 * v * v)), places=15)

    def test_matches_quadrature(self):
        """Random arguments agree with adaptive quadrature."""
        rng = np.random.default_rng(0)

        for v_j, v_k in rng.uniform(-5, 5, (100, 2)):
            numeric, _ = scipy.integrate.quad(
                lambda s: math.exp(-s) * math.cos(v_j * s) * math.cos(v_k * s),
                0,
                35,
                limit=500,
                epsabs=1e-13,
            )

            self.assertAlmostEqual(cosine_integral(v_j, v_k), numeric, delta=1e-9)

    def test_broadcast(self):
        """Array inputs broadcast like numpy."""
        values = cosine_integral(np.array([[0.0], [1.0]]), np.array([[0.0, 2.0]]))

        self.assertEqual(values.shape, (2, 2))
        self.assertAlmostEqual(values[1, 1], 0.3, places=15)


class TestGramMatrices(unittest.TestCase):
    """Gram matrices of the three node families."""

    def test_s4d_lin_spectrum(self):
        """Evenly spaced frequencies stay well conditioned at every size."""
        kappas = []

        for m in (4, 16, 64, 256):
            gram = gram_complex(np.pi * np.arange(1, m + 1))

            self.assertGreater(gram.lambda_min, 0.2)
            self.assertLess(gram.lambda_max, 1.41422)
            kappas.append(gram.condition)

        self.assertLess(max(kappas), gershgorin_bounds(math.pi).condition_bound)
        self.assertLess(max(kappas) / min(kappas), 1.2)

    def test_wide_separation_is_half_identity(self):
        """Far apart frequencies decouple."""
        gram = gram_complex(1e6 * np.arange(1, 9))

        self.assertLess(np.max(np.abs(gram.entries - 0.5 * np.eye(8))), 1e-6)

    def test_real_nodes(self):
        """-1 / (a_j + a_k)."""
        np.testing.assert_allclose(gram_real([-1.0, -2.0]).entries, [[1 / 2, 1 / 3], [1 / 3, 1 / 4]])
        np.testing.assert_allclose(gram_real([-1.0]).entries, [[0.5]])

        with self.assertRaises(ValidationError):
            gram_real([1.0, -2.0])

    def test_real_nodes_blow_up(self):
        """The condition number of the S4D-Real Gram matrix grows without bound."""
        kappas = [gram_real(-np.arange(1.0, m + 1)).condition for m in range(2, 11)]

        for smaller, larger in zip(kappas, kappas[1:]):
            self.assertGreater(larger, smaller)

        self.assertGreater(kappas[8] / kappas[3], 1e3)

    def test_real_nodes_extended_precision(self):
        """The growth continues past double precision, and matches it where both apply."""

        def exact_condition(m: int):
            with mpmath.workdps(60):
                matrix = mpmath.matrix(m, m)

                for j in range(m):
                    for k in range(m):
                        matrix[j, k] = mpmath.mpf(1) / (j + k + 2)

                eigenvalues = mpmath.eigsy(matrix, eigvals_only=True)
                values = [eigenvalues[i] for i in range(m)]

                return max(values) / min(values)

        exact = [exact_condition(m) for m in range(2, 13)]

        for smaller, larger in zip(exact, exact[1:]):
            self.assertGreater(larger, smaller)

        computed = gram_real(-np.arange(1.0, 9)).condition

        self.assertLess(abs(computed - float(exact[6])), 1e-3 * float(exact[6]))

    def test_numeric_matches_closed_forms(self):
        """Quadrature reproduces both closed forms."""
        v = np.array([0.3, 1.7, 4.0])
        numeric = gram_numeric(StateVector.new(np.full(3, -0.5), v))

        np.testing.assert_allclose(numeric.entries, gram_complex(v).entries, atol=1e-9)

        a = np.array([-1.0, -2.0, -3.5])
        numeric = gram_numeric(StateVector.new(a, np.zeros(3)))

        np.testing.assert_allclose(numeric.entries, gram_real(a).entries, atol=1e-9)

    def test_numeric_needs_decay(self):
        """Quadrature on [0, inf) needs negative real parts."""
        with self.assertRaises(ValidationError):
            gram_numeric(StateVector.from_complex([-1.0, 1j]))

    def test_positive_definite_check(self):
        """Distinct nodes give positive definite matrices, repeated ones do not."""
        rng = np.random.default_rng(1)

        for _ in range(100):
            ok, _ = positive_definite_check(rng.uniform(0, 10, 6))
            self.assertTrue(ok)

        ok, _ = positive_definite_check(-np.cumsum(0.5 + rng.uniform(0, 1, 6)), real=True)
        self.assertTrue(ok)

        ok, smallest = positive_definite_check([1.0, 2.0, 2.0])
        self.assertFalse(ok)
        self.assertLess(smallest, 1e-12)

    def test_separation_distance(self):
        """Smallest pairwise gap."""
        self.assertAlmostEqual(separation_distance([3.0, 1.0, 1.5]), 0.5)
        self.assertEqual(separation_distance([1.0]), float("inf"))


class TestGershgorin(unittest.TestCase):
    """Eigenvalue enclosure from the node separation."""

    def test_values(self):
        """The bounds at the S4D-Lin separation and at the threshold."""
        bounds = gershgorin_bounds(math.pi)

        self.assertAlmostEqual(bounds.lower, 1.19 - 0.75 / math.tanh(1.0), places=12)
        self.assertAlmostEqual(bounds.lower, 0.2052, places=3)
        self.assertAlmostEqual(bounds.upper, 1.4015, places=3)
        self.assertTrue(bounds.informative)

        threshold = gershgorin_bounds(2.3)

        self.assertLess(abs(threshold.lower), 0.05)

    def test_wide_limit(self):
        """The bounds tend to (0.44, 7/6)."""
        for delta in (1e12, float("inf")):
            bounds = gershgorin_bounds(delta)

            self.assertAlmostEqual(bounds.lower, 0.44, places=6)
            self.assertAlmostEqual(bounds.upper, 7 / 6, places=6)

    def test_invalid(self):
        """The separation must be positive."""
        with self.assertRaises(ValidationError):
            gershgorin_bounds(0.0)

    def test_enclosure(self):
        """Random well-separated positive frequencies stay inside their bounds."""
        rng = np.random.default_rng(2)

        for _ in range(100):
            m = int(rng.integers(2, 65))
            delta = rng.uniform(2.5, 4.0)
            v = rng.uniform(1e-3, 5) + np.concatenate([[0.0], np.cumsum(delta + rng.uniform(0, 2, m - 1))])
            gram = gram_complex(v)
            bounds = gershgorin_bounds(separation_distance(v))

            self.assertTrue(bounds.contains(gram.lambda_min))
            self.assertTrue(bounds.contains(gram.lambda_max))


class TestBaselSum(unittest.TestCase):
    def test_values(self):
        """The limit at zero and a value at one."""
        self.assertEqual(basel_sum(0.0), math.pi**2 / 6)
        self.assertAlmostEqual(basel_sum(1.0), 1.076674, places=6)

    def test_matches_series(self):
        """Closed form and short series agree with a summed series."""
        rng = np.random.default_rng(3)
        ts = list(rng.uniform(0.1, 20, 100)) + [1e-4, 5e-3, 9.9e-3, 1e-2]

        for t in ts:
            with mpmath.workdps(30):
                expected = float(mpmath.nsum(lambda n: 1 / (n**2 + mpmath.mpf(t) ** 2), [1, mpmath.inf]))

            self.assertAlmostEqual(basel_sum(t), expected, delta=1e-10)

    def test_invalid(self):
        """Non-finite arguments are rejected."""
        with self.assertRaises(ValidationError):
            basel_sum(float("nan"))


class TestApproximation(unittest.TestCase):
    """Approximation of a damped cosine target by model frequencies."""

    def _discretized_sigma(self, v: np.ndarray, xi: np.ndarray):
        s = np.linspace(0, 70, 200_001)
        weights = np.full(s.shape, s[1] - s[0])
        weights[[0, -1]] /= 2

        model = np.exp(-s / 2)[:, None] * np.cos(np.outer(s, v))
        target = np.exp(-s / 2)[:, None] * np.cos(np.outer(s, xi))

        G = model.T @ (weights[:, None] * model)
        C = model.T @ (weights[:, None] * target)
        W = target.T @ (weights[:, None] * target)
        M = W - C.T @ np.linalg.solve(G, C)

        return float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (M + M.T)))))

    def test_exact_frequencies(self):
        """Matching frequencies leave nothing to approximate."""
        xi = 0.1 * np.pi * np.arange(1, 9)
        M, sigma = approximation_matrix(xi, TradeoffTarget.unit(xi))

        self.assertLess(np.max(np.abs(M)), 1e-8)
        self.assertLess(sigma, 1e-8)

    def test_distant_frequencies(self):
        """Far away frequencies leave the worst case."""
        xi = 0.1 * np.pi * np.arange(1, 5)
        target = TradeoffTarget.unit(xi)
        M, _ = approximation_matrix(1e6 * np.arange(1, 5), target)

        np.testing.assert_allclose(M, worst_case_matrix(xi), atol=1e-10)
        self.assertAlmostEqual(approximation_error(1e6 * np.arange(1, 5), target), target_energy(target), places=9)

    def test_matches_discretized_projection(self):
        """The closed form agrees with a projection on a fine time grid."""
        xi = 0.1 * np.pi * np.arange(1, 5)
        v = 2 * xi
        _, sigma = approximation_matrix(v, TradeoffTarget.unit(xi))

        self.assertLess(abs(sigma - self._discretized_sigma(v, xi)), 1e-3 * sigma + 1e-9)

    def test_schur_complement_is_psd(self):
        """M is positive semi-definite and the error never exceeds the energy."""
        rng = np.random.default_rng(4)

        for _ in range(20):
            xi = np.sort(rng.uniform(0, 10, 5))
            target = TradeoffTarget(c_hat=rng.standard_normal(5), xi=xi)
            v = np.sort(rng.uniform(0, 10, 4))
            M, sigma = approximation_matrix(v, target)

            self.assertGreater(np.min(np.linalg.eigvalsh(M)), -1e-8 * max(sigma, 1.0))
            self.assertLessEqual(approximation_error(v, target), target_energy(target) + 1e-10)

    def test_target_energy_matches_quadrature(self):
        """The energy of the target memory is its squared L2 norm."""
        target = TradeoffTarget(c_hat=np.array([1.0, -0.5, 2.0]), xi=np.array([0.5, 1.0, 3.0]))
        numeric, _ = scipy.integrate.quad(
            lambda s: float(target.evaluate(np.array([s]))[0]) ** 2,
            0,
            70,
            limit=500,
            epsabs=1e-13,
        )

        self.assertAlmostEqual(target_energy(target), numeric, delta=1e-8)

    def test_repeated_frequencies(self):
        """A singular model Gram matrix raises with its separation."""
        xi = np.array([1.0, 2.0])

        with self.assertRaises(SingularGramError) as context:
            approximation_matrix([1.0, 1.0], TradeoffTarget.unit(xi))

        self.assertEqual(context.exception.separation, 0.0)


class TestSweeps(unittest.TestCase):
    """Tradeoff and condition grids."""

    def test_tradeoff(self):
        """Spreading the model frequencies trades approximation for conditioning."""
        xi = 0.1 * np.pi * np.arange(1, 9)
        ratios = [2.0**k for k in range(9)]
        rows = tradeoff_sweep(xi, ratios)

        self.assertEqual([row.ratio for row in rows], ratios)
        self.assertLess(rows[0].sigma_max, 1e-6)

        for previous, current in zip(rows, rows[1:]):
            self.assertLessEqual(current.kappa, previous.kappa * 1.01)
            self.assertGreaterEqual(current.sigma_max, previous.sigma_max * 0.99 - 1e-9)

        worst = float(np.max(np.linalg.eigvalsh(worst_case_matrix(xi))))

        self.assertLess(abs(rows[-1].sigma_max - worst), 0.05 * worst)
        self.assertEqual(rows, tradeoff_sweep(xi, ratios, jobs=3))

    def test_tradeoff_invalid(self):
        """Targets must be distinct and ratios positive."""
        with self.assertRaises(ValidationError):
            tradeoff_sweep([1.0, 1.0], [1.0])

        with self.assertRaises(ValidationError):
            tradeoff_sweep([1.0, 2.0], [0.0])

    def test_condition(self):
        """One row per size and scale, for both schemes."""
        rows = condition_sweep("s4d-lin", [4, 8], scales=[1.0, 2.0])

        self.assertEqual([(row.m, row.scale) for row in rows], [(4, 1.0), (4, 2.0), (8, 1.0), (8, 2.0)])

        for row in rows:
            self.assertAlmostEqual(row.kappa, row.lambda_max / row.lambda_min)

        real = condition_sweep("s4d-real", [2, 4])

        self.assertLess(real[0].kappa, real[1].kappa)

        with self.assertRaises(ValidationError):
            condition_sweep("hippo", [4])  # type: ignore[arg-type]


if __name__ == "__main__":
    unittest.main()
