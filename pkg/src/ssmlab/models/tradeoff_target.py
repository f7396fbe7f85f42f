from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..errors import ShapeMismatchError, ValidationError


@dataclass(frozen=True, eq=False)
class TradeoffTarget:
    """
    The memory function `rho*(s) = e^{-s/2} c_hat^T cos(xi s)`.
    """

    c_hat: NDArray[np.float64]
    xi: NDArray[np.float64]

    def __post_init__(self):
        c_hat = np.array(self.c_hat, dtype=float).reshape(-1)
        xi = np.array(self.xi, dtype=float).reshape(-1)

        if c_hat.shape != xi.shape:
            raise ShapeMismatchError(
                f"c_hat and xi must have equal length, got {c_hat.shape[0]} and {xi.shape[0]}"
            )

        if not (np.all(np.isfinite(c_hat)) and np.all(np.isfinite(xi))):
            raise ValidationError("Target coefficients and frequencies must be finite")

        c_hat.setflags(write=False)
        xi.setflags(write=False)
        object.__setattr__(self, "c_hat", c_hat)
        object.__setattr__(self, "xi", xi)

    @property
    def m(self):
        return self.xi.shape[0]

    @classmethod
    def unit(cls, xi: NDArray[np.float64]):
        """
        All-ones coefficients scaled to unit norm.
        """
        xi = np.asarray(xi, dtype=float).reshape(-1)

        return cls(c_hat=np.ones_like(xi) / np.sqrt(xi.shape[0]), xi=xi)

    def evaluate(self, s: NDArray[np.float64]) -> NDArray[np.float64]:
        s = np.asarray(s, dtype=float)

        return np.exp(-s / 2) * (np.cos(np.multiply.outer(s, self.xi)) @ self.c_hat)
