from typing import Optional


class SsmLabError(Exception):
    """
    Base class for every error raised by this package.
    """


class ValidationError(SsmLabError, ValueError):
    pass


class ShapeMismatchError(ValidationError):
    pass


class HypothesisError(ValidationError):
    """
    An input violates the hypothesis a bound is stated under,
    e.g. a positive real part where the stability bound needs `Re(w) <= 0`.
    """


class KernelOverflowError(SsmLabError, OverflowError):
    pass


class ConvergenceError(SsmLabError, ArithmeticError):
    pass


class DivergenceError(SsmLabError, ArithmeticError):
    pass


class SingularGramError(SsmLabError, ArithmeticError):
    def __init__(
        self,
        message: str,
        separation: Optional[float] = None,
        condition: Optional[float] = None,
    ):
        super().__init__(message)

        self.separation = separation
        """
        Minimum pairwise gap of the nodes that produced the matrix.
        """

        self.condition = condition
