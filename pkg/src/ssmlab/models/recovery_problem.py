from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..errors import ShapeMismatchError, ValidationError


@dataclass(frozen=True, eq=False)
class RecoveryProblem:
    """
    Sequences `X` (N x L) and labels `Y` (N x C) related by `X * rho = Y`.
    """

    X: NDArray[np.float64]
    Y: NDArray[np.float64]
    ridge: float = 0.0

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        Y = np.array(self.Y, dtype=float)

        if Y.ndim == 1:
            Y = Y[:, None]

        if X.ndim != 2 or X.shape[0] < 1:
            raise ShapeMismatchError(f"X must have shape (N, L), got {X.shape}")

        if Y.ndim != 2 or Y.shape[0] != X.shape[0] or Y.shape[1] < 1:
            raise ShapeMismatchError(
                f"Y must have shape ({X.shape[0]}, C), got {Y.shape}"
            )

        if self.ridge < 0:
            raise ValidationError(f"ridge must be non-negative, got {self.ridge}")

        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def N(self):
        return self.X.shape[0]

    @property
    def L(self):
        return self.X.shape[1]

    @property
    def C(self):
        return self.Y.shape[1]
