from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
from numpy.typing import NDArray

from ..errors import ValidationError

TaskKind = Literal["copying", "shift", "first-last", "custom"]


@dataclass(frozen=True, eq=False)
class Task:
    kind: TaskKind
    """
    - copying: reproduce every channel of a `d`-dimensional input `lag` steps later.
    - shift: `y* = x_0`, target memory `(0, ..., 0, 1)`.
    - first-last: `y* = x_0 + x_{L-1}`, target memory `(1, 0, ..., 0, 1)`.
    - custom: `y* = sum_l rho*_l x_{L-1-l}` for the given `target`.
    """

    L: int
    n_train: int = 1000
    n_test: int = 1000
    seed: int = 0

    d: int = 1
    """
    Input dimension. Only the copying task uses more than one channel.
    """

    lag: Optional[int] = None
    """
    Copying delay, `L // 2` when unset.
    """

    target: Optional[NDArray[np.float64]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("copying", "shift", "first-last", "custom"):
            raise ValidationError(f"Unknown task: {self.kind}")

        if self.L < 2:
            raise ValidationError(f"L must be at least 2, got {self.L}")

        if self.n_train < 1 or self.n_test < 1:
            raise ValidationError("Sample counts must be positive")

        if self.d < 1:
            raise ValidationError(f"d must be at least 1, got {self.d}")

        if self.kind != "copying" and self.d != 1:
            raise ValidationError(f"The {self.kind} task is single-channel")

        if self.kind == "copying" and not 0 <= self.copy_lag < self.L:
            raise ValidationError(f"lag must lie in [0, L), got {self.lag}")

        if self.kind == "custom":
            if self.target is None:
                raise ValidationError("The custom task needs a target memory")

            target = np.array(self.target, dtype=float).reshape(-1)

            if target.shape[0] != self.L:
                raise ValidationError(
                    f"Target memory has length {target.shape[0]}, expected {self.L}"
                )

            target.setflags(write=False)
            object.__setattr__(self, "target", target)

    @property
    def is_sequence(self):
        """
        Whether the loss is taken over per-step outputs instead of the final one.
        """
        return self.kind == "copying"

    @property
    def copy_lag(self):
        return self.L // 2 if self.lag is None else self.lag

    @property
    def target_memory(self) -> NDArray[np.float64]:
        """
        `rho*` such that `y*_L = sum_l rho*_l x_{L-1-l}`.
        """
        rho = np.zeros(self.L)

        if self.kind == "shift":
            rho[-1] = 1.0

        elif self.kind == "first-last":
            rho[0] = 1.0
            rho[-1] = 1.0

        elif self.kind == "custom":
            assert self.target is not None
            rho[:] = self.target

        else:
            rho[self.copy_lag] = 1.0

        return rho
