from dataclasses import dataclass
from typing import Dict

import numpy as np
from numpy.typing import NDArray

from .ssm_bank import PARAMETER_NAMES


@dataclass(frozen=True, eq=False)
class Gradients:
    """
    Loss gradient with respect to every parameter group of an `SsmBank`.
    """

    delta: NDArray[np.float64]
    real: NDArray[np.float64]
    imag: NDArray[np.float64]
    c_real: NDArray[np.float64]
    c_imag: NDArray[np.float64]

    loss: float

    @property
    def is_finite(self):
        return np.isfinite(self.loss) and all(
            np.all(np.isfinite(getattr(self, name))) for name in PARAMETER_NAMES
        )

    def as_dict(self) -> Dict[str, NDArray[np.float64]]:
        return {name: getattr(self, name) for name in PARAMETER_NAMES}
