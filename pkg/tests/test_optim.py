import unittest

import numpy as np

from ssmlab.errors import ValidationError
from ssmlab.optim import Adam


class TestAdam(unittest.TestCase):
    """Adam over named parameter groups."""

    def test_first_step_moves_by_learning_rate(self):
        """After bias correction the first step has length lr per coordinate."""
        params = {"a": np.array([1.0, -2.0]), "b": np.array([3.0])}
        optimizer = Adam([(0.1, ["a"]), (0.01, ["b"])])

        optimizer.step(params, {"a": np.array([4.0, -0.5]), "b": np.array([2.0])})

        np.testing.assert_allclose(params["a"], [0.9, -1.9], rtol=1e-7)
        np.testing.assert_allclose(params["b"], [2.99], rtol=1e-7)
        self.assertEqual(optimizer.t, 1)

    def test_equal_learning_rates(self):
        """Two groups may share a learning rate."""
        optimizer = Adam([(0.1, ["a"]), (0.1, ["b"])])

        self.assertEqual(optimizer.lr, {"a": 0.1, "b": 0.1})

    def test_untracked_names_are_left_alone(self):
        """Parameters outside every group do not move."""
        params = {"a": np.array([1.0]), "frozen": np.array([5.0])}
        optimizer = Adam([(0.1, ["a"])])

        optimizer.step(params, {"a": np.array([1.0]), "frozen": np.array([1.0])})

        np.testing.assert_array_equal(params["frozen"], [5.0])

    def test_minimizes_quadratic(self):
        """Repeated steps reach the minimum of a quadratic."""
        params = {"x": np.array([5.0, -3.0])}
        optimizer = Adam([(0.05, ["x"])])

        for _ in range(2000):
            optimizer.step(params, {"x": 2 * (params["x"] - np.array([1.0, 2.0]))})

        np.testing.assert_allclose(params["x"], [1.0, 2.0], atol=5e-2)

    def test_invalid(self):
        """Invalid hyperparameters are rejected."""
        with self.assertRaises(ValidationError):
            Adam([(0.0, ["a"])])

        with self.assertRaises(ValidationError):
            Adam([(0.1, ["a"])], betas=(1.0, 0.999))

        with self.assertRaises(ValidationError):
            Adam([(0.1, ["a"])], eps=0.0)


if __name__ == "__main__":
    unittest.main()
