import json
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ShapeMismatchError, ValidationError
from .state_vector import StateVector


@dataclass(frozen=True, eq=False)
class SsmModel:
    """
    Single-input single-output diagonal SSM

    ```
    h'(t) = W h(t) + b x(t),    y(t) = Re(c^T h(t))
    ```

    with `W = diag(w)`, the read-in `b` fixed to ones, and no skip connection.
    """

    w: StateVector
    c: NDArray[np.complex128]
    """
    Complex read-out, one entry per state.
    """
    delta: float
    """
    Timescale used by the zero-order-hold discretization.
    """

    b: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self):
        c = np.array(self.c, dtype=complex).reshape(-1)

        if c.shape[0] != self.w.m:
            raise ShapeMismatchError(
                f"c must have {self.w.m} entries to match w, got {c.shape[0]}"
            )

        if not np.all(np.isfinite(c)):
            raise ValidationError("c must be finite")

        delta = float(self.delta)

        if not np.isfinite(delta) or delta <= 0:
            raise ValidationError(f"delta must be positive, got {self.delta}")

        b = np.ones(self.w.m)

        c.setflags(write=False)
        b.setflags(write=False)

        object.__setattr__(self, "c", c)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "b", b)

    @property
    def m(self):
        return self.w.m

    @property
    def c_stacked(self) -> NDArray[np.float64]:
        """
        The read-out as the real `2m` vector `(Re c, Im c)`.
        """
        return np.concatenate([self.c.real, self.c.imag])

    @classmethod
    def new(
        cls,
        w: ArrayLike,
        c: ArrayLike,
        delta: float,
    ):
        return cls(
            w=StateVector.from_complex(w),
            c=np.asarray(c, dtype=complex),
            delta=delta,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "real": self.w.real.tolist(),
            "imag": self.w.imag.tolist(),
            "c_real": self.c.real.tolist(),
            "c_imag": self.c.imag.tolist(),
            "delta": self.delta,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]):
        missing = {"real", "imag", "c_real", "c_imag", "delta"} - set(data)

        if missing:
            raise ValidationError(f"Missing model keys: {', '.join(sorted(missing))}")

        return cls(
            w=StateVector.new(data["real"], data["imag"]),
            c=np.asarray(data["c_real"], dtype=float)
            + 1j * np.asarray(data["c_imag"], dtype=float),
            delta=float(data["delta"]),
        )

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str):
        return cls.from_dict(json.loads(text))

    def __eq__(self, other: object):
        if not isinstance(other, SsmModel):
            return NotImplemented

        return (
            self.w == other.w
            and np.array_equal(self.c, other.c)
            and self.delta == other.delta
        )
