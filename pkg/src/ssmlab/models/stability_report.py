from dataclasses import dataclass


@dataclass(frozen=True)
class StabilityReport:
    bound: float
    """
    `delta^2 m^2 L lambda_max`.
    """

    empirical: float
    """
    Monte Carlo estimate of `E_{c,x}[y_L^2]`.
    """

    stderr: float

    n_samples: int
    delta: float
    L: int
    m: int
    real_part: float
    lambda_max: float

    pooled: bool = False

    @property
    def dominated(self):
        """
        Whether the estimate sits below the bound up to three standard errors.
        """
        return self.empirical <= self.bound + 3 * self.stderr
