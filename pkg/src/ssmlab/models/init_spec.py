from dataclasses import dataclass
from typing import Literal, Optional, Tuple

from ..errors import ValidationError

Scheme = Literal["s4d-lin", "s4d-real", "custom"]


@dataclass(frozen=True)
class InitSpec:
    scheme: Scheme = "s4d-lin"
    """
    - s4d-lin: `w_j = real_part + i * imag_scale * pi * j`.
    - s4d-real: `w_j = -j`.
    - custom: `w` taken from `nodes`.
    """

    m: int = 32

    real_part: float = -0.5

    zero_real_fraction: float = 0.0
    """
    Fraction `p` of the states whose real part is set to zero,
    chosen uniformly without replacement.
    """

    imag_scale: float = 1.0

    seed: int = 0

    nodes: Optional[Tuple[complex, ...]] = None
    """
    Externally supplied nodes for the custom scheme.
    """

    def __post_init__(self):
        if self.scheme not in ("s4d-lin", "s4d-real", "custom"):
            raise ValidationError(f"Unknown scheme: {self.scheme}")

        if self.m < 1:
            raise ValidationError(f"m must be at least 1, got {self.m}")

        if not 0.0 <= self.zero_real_fraction <= 1.0:
            raise ValidationError(
                f"zero_real_fraction must lie in [0, 1], got {self.zero_real_fraction}"
            )

        if self.imag_scale <= 0:
            raise ValidationError(f"imag_scale must be positive, got {self.imag_scale}")

        if self.scheme == "custom":
            if self.nodes is None or len(self.nodes) != self.m:
                raise ValidationError(f"The custom scheme needs exactly {self.m} nodes")
