from dataclasses import dataclass
from typing import Literal

from ..errors import ValidationError

TimescaleMode = Literal["fixed", "power-law", "data-dependent"]


@dataclass(frozen=True)
class TimescaleRule:
    mode: TimescaleMode = "fixed"
    """
    - fixed: the constant `delta_min`.
    - power-law: `L ** -alpha`.
    - data-dependent: `c0 / sqrt(L * lambda_max)`.
    """

    delta_min: float = 1e-3
    delta_max: float = 1e-1

    alpha: float = 0.5

    c0: float = 1.0

    def __post_init__(self):
        if self.mode not in ("fixed", "power-law", "data-dependent"):
            raise ValidationError(f"Unknown timescale mode: {self.mode}")

        if not 0 < self.delta_min <= self.delta_max:
            raise ValidationError(
                f"Need 0 < delta_min <= delta_max, got ({self.delta_min}, {self.delta_max})"
            )

        if self.c0 <= 0:
            raise ValidationError(f"c0 must be positive, got {self.c0}")
