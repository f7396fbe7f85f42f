from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from numpy.typing import NDArray

from .ssm_bank import SsmBank


@dataclass(frozen=True, eq=False)
class TrainReport:
    loss_train: List[float]
    loss_test: List[float]

    eval_steps: List[int]
    """
    Step at which each entry of the loss curves was measured.
    """

    kernel: NDArray[np.float64]
    """
    Final memory vector, shape `(d, L)`.
    """

    re_nonneg_ratio: float

    bank: SsmBank = field(repr=False)

    diverged: bool = False
    divergence_step: Optional[int] = None

    @property
    def final_test_loss(self):
        return self.loss_test[-1]

    def to_dict(self) -> Dict[str, Any]:
        kernel = self.kernel[0] if self.kernel.shape[0] == 1 else self.kernel

        return {
            "loss_train": list(self.loss_train),
            "loss_test": list(self.loss_test),
            "eval_steps": list(self.eval_steps),
            "kernel": kernel.tolist(),
            "re_nonneg_ratio": self.re_nonneg_ratio,
            "diverged": self.diverged,
            "divergence_step": self.divergence_step,
        }
