import unittest

import numpy as np

from ssmlab.autocorr import build_autocov
from ssmlab.errors import HypothesisError, ValidationError
from ssmlab.initialization import make_state_vector
from ssmlab.models.autocov_spec import AutocovSpec
from ssmlab.models.init_spec import InitSpec
from ssmlab.models.state_vector import StateVector
from ssmlab.stability import (
    delta_for_alpha,
    empirical_magnitude,
    expected_magnitude,
    magnitude_sweep,
    magnitude_bound,
)


class TestBound(unittest.TestCase):
    """Arithmetic of the magnitude bound."""

    def test_inverse_sqrt_timescale(self):
        """delta = 1/sqrt(L) with uncorrelated inputs gives m^2."""
        for L in (16, 64, 1000):
            self.assertAlmostEqual(magnitude_bound(L**-0.5, 1, L, 1.0), 1.0, places=12)

    def test_constant_input(self):
        """delta = 1/L with constant inputs gives m^2."""
        self.assertAlmostEqual(magnitude_bound(1 / 64, 3, 64, 64.0), 9.0, places=12)

    def test_value(self):
        """A worked example."""
        self.assertAlmostEqual(magnitude_bound(0.1, 32, 128, 1.0), 1310.72, places=9)

    def test_invalid(self):
        """Non-positive timescales and negative spectra are rejected."""
        with self.assertRaises(ValidationError):
            magnitude_bound(0.0, 1, 1, 1.0)

        with self.assertRaises(ValidationError):
            magnitude_bound(0.1, 1, 1, -1.0)

    def test_delta_for_alpha(self):
        """L^-alpha."""
        self.assertAlmostEqual(delta_for_alpha(64, 0.5), 0.125)
        self.assertAlmostEqual(delta_for_alpha(64, 1.0), 1 / 64)


class TestMagnitude(unittest.TestCase):
    """Expected and sampled output magnitudes."""

    def _nodes(self, m: int = 4, real_part: float = -0.5):
        return make_state_vector(InitSpec(m=m, real_part=real_part))

    def test_single_flat_node(self):
        """At w = 0 with white inputs the expectation is delta^2 L."""
        w = StateVector.from_complex([0.0])

        for delta, L in [(0.1, 16), (0.5, 7)]:
            self.assertAlmostEqual(
                expected_magnitude(w, delta, np.eye(L)),
                delta**2 * L,
                places=12,
            )

    def test_quadratic_in_timescale(self):
        """Doubling delta at w = 0 quadruples the expectation."""
        w = StateVector.from_complex([0.0])
        K = build_autocov(AutocovSpec("ou", 32))

        self.assertAlmostEqual(
            expected_magnitude(w, 0.2, K) / expected_magnitude(w, 0.1, K),
            4.0,
            places=10,
        )

    def test_positive_real_part_rejected(self):
        """The bound only applies to non-positive real parts."""
        with self.assertRaises(HypothesisError):
            empirical_magnitude(StateVector.from_complex([0.1 + 1j]), 0.1, np.eye(4))

    def test_zero_input(self):
        """Zero inputs have zero output and a zero bound."""
        report = empirical_magnitude(self._nodes(), 0.1, np.zeros((8, 8)), n_c=4, n_x=4)

        self.assertEqual(report.empirical, 0.0)
        self.assertEqual(report.bound, 0.0)
        self.assertTrue(report.dominated)

    def test_estimate_matches_expectation(self):
        """The Monte Carlo mean lies within four standard errors of the exact value."""
        K = build_autocov(AutocovSpec("ou", 32))

        for real_part in (0.0, -0.5):
            w = self._nodes(real_part=real_part)
            report = empirical_magnitude(w, 0.1, K, seed=3)
            exact = expected_magnitude(w, 0.1, K)

            self.assertLess(abs(report.empirical - exact), 4 * report.stderr)
            self.assertEqual(report.n_samples, 256 * 256)
            self.assertEqual(report.real_part, real_part)

    def test_pooled_estimate_matches_expectation(self):
        """Same agreement when every step is pooled."""
        K = build_autocov(AutocovSpec("rbf", 16))
        w = self._nodes()
        report = empirical_magnitude(w, 0.2, K, seed=5, pooled=True)
        exact = expected_magnitude(w, 0.2, K, pooled=True)

        self.assertTrue(report.pooled)
        self.assertLess(abs(report.empirical - exact), 4 * report.stderr)

    def test_deterministic(self):
        """The same seed gives the same estimate."""
        K = np.eye(16)
        w = self._nodes()

        self.assertEqual(
            empirical_magnitude(w, 0.1, K, n_c=16, n_x=16, seed=2),
            empirical_magnitude(w, 0.1, K, n_c=16, n_x=16, seed=2),
        )

    def test_timescale_exponent_ordering(self):
        """With undamped nodes a slowly shrinking timescale grows the output with L
        while a quickly shrinking one does not."""
        w = self._nodes(real_part=0.0)

        def growth(alpha: float):
            small, large = 64, 2048

            return expected_magnitude(w, delta_for_alpha(large, alpha), np.eye(large)) / (
                expected_magnitude(w, delta_for_alpha(small, alpha), np.eye(small))
            )

        self.assertGreater(growth(0.25), 4.0)
        self.assertLess(growth(0.75), 2.0)


class TestMagnitudeSweep(unittest.TestCase):
    """Grids of magnitude estimates."""

    def test_bound_dominates(self):
        """Every grid point sits below its bound."""
        rows = magnitude_sweep(
            kinds=["iid", "ou", "rbf", "rand"],
            Ls=[64, 256, 1024],
            alphas=[1.0, 0.75, 0.5, 0.25],
            reals=[0.0, -0.5],
            seed=0,
        )

        self.assertEqual(len(rows), 96)

        for row in rows:
            self.assertLessEqual(row.empirical, row.bound + 3 * row.stderr, msg=str(row))

    def test_thread_count_does_not_change_rows(self):
        """Seeds are fixed per grid point."""
        arguments = dict(
            kinds=["iid", "ou"],
            Ls=[8, 16],
            alphas=[0.5],
            reals=[0.0, -0.5],
            n_c=8,
            n_x=8,
            seed=4,
        )

        self.assertEqual(
            magnitude_sweep(**arguments, jobs=1),
            magnitude_sweep(**arguments, jobs=3),
        )


if __name__ == "__main__":
    unittest.main()
