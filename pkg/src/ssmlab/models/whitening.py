from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ShapeMismatchError


@dataclass(frozen=True, eq=False)
class Whitening:
    """
    Centering followed by a symmetric whitening matrix, fitted on training
    sequences and reusable on held-out ones.
    """

    mean: NDArray[np.float64]
    matrix: NDArray[np.float64]
    """
    `L x L`, applied on the right: `(X - mean) @ matrix`.
    """

    ridge_used: bool = False

    @property
    def L(self):
        return self.mean.shape[0]

    def apply(self, X: ArrayLike) -> NDArray[np.float64]:
        X = np.asarray(X, dtype=float)

        if X.ndim != 2 or X.shape[1] != self.L:
            raise ShapeMismatchError(f"Expected shape (N, {self.L}), got {X.shape}")

        return (X - self.mean) @ self.matrix
