from dataclasses import dataclass
from typing import Dict

import numpy as np
from numpy.typing import NDArray

from ..errors import ShapeMismatchError, ValidationError
from .ssm_model import SsmModel
from .state_vector import StateVector

PARAMETER_NAMES = ("delta", "real", "imag", "c_real", "c_imag")
STATE_PARAMETERS = ("delta", "real", "imag")
READOUT_PARAMETERS = ("c_real", "c_imag")


@dataclass(frozen=True, eq=False)
class SsmBank:
    """
    `d` independent single-channel SSMs stacked along a leading channel axis.

    Every channel owns its nodes, read-out and timescale. The parameters are
    plain real arrays so that the trainer can update them directly.
    """

    real: NDArray[np.float64]
    """
    Shape `(d, m)`.
    """
    imag: NDArray[np.float64]
    c_real: NDArray[np.float64]
    c_imag: NDArray[np.float64]
    delta: NDArray[np.float64]
    """
    Shape `(d,)`.
    """

    def __post_init__(self):
        arrays = {
            name: np.array(getattr(self, name), dtype=float)
            for name in PARAMETER_NAMES
        }

        for name in ("real", "imag", "c_real", "c_imag"):
            if arrays[name].ndim == 1:
                arrays[name] = arrays[name][None, :]

        arrays["delta"] = arrays["delta"].reshape(-1)

        shape = arrays["real"].shape

        if len(shape) != 2 or shape[1] < 1:
            raise ShapeMismatchError(f"Parameters must have shape (d, m), got {shape}")

        for name in ("imag", "c_real", "c_imag"):
            if arrays[name].shape != shape:
                raise ShapeMismatchError(
                    f"{name} has shape {arrays[name].shape}, expected {shape}"
                )

        if arrays["delta"].shape != (shape[0],):
            raise ShapeMismatchError(
                f"delta has shape {arrays['delta'].shape}, expected ({shape[0]},)"
            )

        for name, array in arrays.items():
            if not np.all(np.isfinite(array)):
                raise ValidationError(f"{name} must be finite")

            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def d(self):
        return self.real.shape[0]

    @property
    def m(self):
        return self.real.shape[1]

    @property
    def w(self) -> NDArray[np.complex128]:
        return self.real + 1j * self.imag

    @property
    def c(self) -> NDArray[np.complex128]:
        return self.c_real + 1j * self.c_imag

    @property
    def is_valid(self):
        return bool(np.all(self.delta > 0))

    @property
    def re_nonneg_ratio(self):
        """
        Fraction of real parts that are `>= 0`.
        """
        return float(np.mean(self.real >= 0))

    @classmethod
    def from_model(cls, model: SsmModel):
        return cls(
            real=model.w.real[None, :],
            imag=model.w.imag[None, :],
            c_real=model.c.real[None, :],
            c_imag=model.c.imag[None, :],
            delta=np.array([model.delta]),
        )

    @classmethod
    def from_parameters(cls, parameters: Dict[str, NDArray[np.float64]]):
        return cls(**{name: parameters[name] for name in PARAMETER_NAMES})

    def parameters(self) -> Dict[str, NDArray[np.float64]]:
        """
        Writable copies of the parameter arrays, keyed by name.
        """
        return {name: getattr(self, name).copy() for name in PARAMETER_NAMES}

    def channel(self, index: int):
        return SsmModel(
            w=StateVector(real=self.real[index], imag=self.imag[index]),
            c=self.c[index],
            delta=float(self.delta[index]),
        )
