from dataclasses import dataclass

from ..errors import ValidationError


@dataclass(frozen=True)
class SpectrumBounds:
    """
    Open interval that contains every eigenvalue of a Gram matrix
    whose imaginary parts are separated by at least `delta`.
    """

    lower: float
    upper: float
    delta: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValidationError(f"Need lower < upper, got ({self.lower}, {self.upper})")

    @property
    def informative(self):
        """
        Whether the lower bound certifies positive definiteness.
        """
        return self.lower > 0

    @property
    def condition_bound(self):
        if not self.informative:
            return float("inf")

        return self.upper / self.lower

    def contains(self, value: float):
        return self.lower < value < self.upper
