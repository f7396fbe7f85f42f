from dataclasses import dataclass
from typing import Literal, Optional


@dataclass(frozen=True)
class SpectrumReport:
    lambda_max: float
    trace: float
    L: int
    method: Literal["exact", "power-iteration"]

    iterations: Optional[int] = None
    """
    Power iteration only.
    """

    tol: Optional[float] = None

    @property
    def normalized(self):
        """
        `lambda_max` rescaled as if the trace were `L`, which puts it in `[1, L]`.
        """
        if self.trace <= 0:
            return 0.0

        return self.lambda_max * self.L / self.trace
