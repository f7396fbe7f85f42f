from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..errors import ValidationError
from .tradeoff_target import TradeoffTarget


@dataclass(frozen=True, eq=False)
class TargetMemory:
    """
    A target memory function, either raw samples `rho*` of shape `(L, C)`
    or the parametric form of a `TradeoffTarget`.
    """

    raw: Optional[NDArray[np.float64]] = None
    parametric: Optional[TradeoffTarget] = None

    residual: Optional[float] = None
    """
    Least-squares residual when the samples were recovered from data.
    """

    def __post_init__(self):
        if (self.raw is None) == (self.parametric is None):
            raise ValidationError("Give exactly one of raw samples or a parametric target")

        if self.raw is not None:
            raw = np.array(self.raw, dtype=float)

            if raw.ndim == 1:
                raw = raw[:, None]

            if raw.ndim != 2 or raw.shape[0] < 1:
                raise ValidationError(f"Raw memory must have shape (L, C), got {raw.shape}")

            if not np.all(np.isfinite(raw)):
                raise ValidationError("Raw memory must be finite")

            raw.setflags(write=False)
            object.__setattr__(self, "raw", raw)

    @property
    def channels(self):
        return self.raw.shape[1] if self.raw is not None else 1

    @property
    def length(self) -> Optional[int]:
        return self.raw.shape[0] if self.raw is not None else None

    @property
    def vector(self) -> NDArray[np.float64]:
        """
        The single channel of a raw target.
        """
        if self.raw is None:
            raise ValidationError("A parametric target has no samples, call sample() first")

        if self.channels != 1:
            raise ValidationError(f"Target has {self.channels} channels, pick one")

        return self.raw[:, 0]

    @classmethod
    def from_vector(cls, values: NDArray[np.float64]):
        return cls(raw=np.asarray(values, dtype=float))

    def channel(self, index: int):
        if self.raw is None:
            raise ValidationError("A parametric target has no channels")

        return TargetMemory(raw=self.raw[:, index])

    def sample(self, delta: float, L: int):
        """
        Raw samples `rho*(l delta)` for `l = 0..L-1`.
        """
        if self.parametric is None:
            return self

        return TargetMemory(raw=self.parametric.evaluate(np.arange(L) * delta))
