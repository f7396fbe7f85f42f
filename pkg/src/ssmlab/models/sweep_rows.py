from dataclasses import astuple, dataclass, fields


class _Row:
    def values(self):
        return astuple(self)  # type: ignore

    @classmethod
    def columns(cls):
        return tuple(item.name for item in fields(cls))  # type: ignore


@dataclass(frozen=True)
class SpectrumRow(_Row):
    kind: str
    L: int
    lambda_max: float
    """
    Top eigenvalue of the exact autocovariance.
    """
    lambda_max_sample: float
    """
    Top eigenvalue of the sample autocorrelation of a finite data set.
    """


@dataclass(frozen=True)
class MagnitudeRow(_Row):
    kind: str
    L: int
    alpha: float
    re: float
    empirical: float
    stderr: float
    bound: float


@dataclass(frozen=True)
class ConditionRow(_Row):
    scheme: str
    m: int
    scale: float
    lambda_min: float
    lambda_max: float
    kappa: float


@dataclass(frozen=True)
class TradeoffRow(_Row):
    ratio: float
    kappa: float
    sigma_max: float
