from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..errors import ValidationError


@dataclass(frozen=True, eq=False)
class DiscreteKernel:
    """
    The memory vector induced by the zero-order hold:
    `values[l]` multiplies `x_{L-1-l}` in the final output `y_L`.
    """

    values: NDArray[np.float64]
    delta: float

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)

        if values.shape[0] < 1:
            raise ValidationError("A kernel needs at least one coefficient")

        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def length(self):
        return self.values.shape[0]

    def __len__(self):
        return self.length
