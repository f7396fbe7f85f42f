from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from ..errors import ShapeMismatchError

GramSource = Literal["complex-half", "real-nodes", "numeric"]


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """
    `G_{j,k} = int_0^inf Re(e^{w_j s}) Re(e^{w_k s}) ds`.
    """

    entries: NDArray[np.float64]

    source: GramSource
    """
    - complex-half: `w_j = -1/2 + i v_j`, closed form.
    - real-nodes: `w_j = a_j < 0`, closed form.
    - numeric: any other nodes, by quadrature.
    """

    nodes: NDArray[np.float64]
    """
    `v` for complex-half, `a` for real-nodes, `w` flattened to `(a, v)` otherwise.
    """

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)

        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ShapeMismatchError(f"Gram matrix must be square, got {entries.shape}")

        entries = 0.5 * (entries + entries.T)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def m(self):
        return self.entries.shape[0]

    @cached_property
    def eigenvalues(self) -> NDArray[np.float64]:
        """
        Ascending.
        """
        return scipy.linalg.eigh(self.entries, eigvals_only=True)

    @property
    def lambda_min(self):
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self):
        return float(self.eigenvalues[-1])

    @property
    def condition(self):
        """
        `lambda_max / lambda_min`; infinite when the matrix is not positive definite.
        """
        if self.lambda_min <= 0:
            return float("inf")

        return self.lambda_max / self.lambda_min
