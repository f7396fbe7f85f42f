from dataclasses import dataclass
from typing import Tuple

from ..constants import LR_READOUT, LR_STATE, TRAIN_BATCH, TRAIN_STEPS
from ..errors import ValidationError


@dataclass(frozen=True)
class TrainConfig:
    steps: int = TRAIN_STEPS

    lr_state: float = LR_STATE
    """
    Learning rate of the timescale and both parts of `w`.
    """

    lr_readout: float = LR_READOUT
    """
    Learning rate of the read-out `c`.
    """

    betas: Tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8

    batch_size: int = TRAIN_BATCH

    eval_every: int = 100

    seed: int = 0

    def __post_init__(self):
        if self.steps < 0:
            raise ValidationError(f"steps must be non-negative, got {self.steps}")

        if self.lr_state <= 0 or self.lr_readout <= 0:
            raise ValidationError(
                f"Learning rates must be positive, got ({self.lr_state}, {self.lr_readout})"
            )

        if not (0 <= self.betas[0] < 1 and 0 <= self.betas[1] < 1):
            raise ValidationError(f"Invalid betas: {self.betas}")

        if self.eps <= 0:
            raise ValidationError(f"eps must be positive, got {self.eps}")

        if self.batch_size < 1:
            raise ValidationError(f"batch_size must be positive, got {self.batch_size}")

        if self.eval_every < 1:
            raise ValidationError(f"eval_every must be positive, got {self.eval_every}")
