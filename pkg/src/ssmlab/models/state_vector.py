from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ShapeMismatchError, ValidationError


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Diagonal state parameters `w_j = a_j + i v_j`, `j = 1..m`.
    """

    real: NDArray[np.float64]
    """
    Real parts `a_j` (decay rates, dimensionless).
    """

    imag: NDArray[np.float64]
    """
    Imaginary parts `v_j` (frequencies, rad per unit time).
    """

    def __post_init__(self):
        real = np.array(self.real, dtype=float).reshape(-1)
        imag = np.array(self.imag, dtype=float).reshape(-1)

        if real.shape != imag.shape:
            raise ShapeMismatchError(
                f"real and imag must have equal length, got {real.shape[0]} and {imag.shape[0]}"
            )

        if real.shape[0] < 1:
            raise ValidationError("A state vector needs at least one entry")

        if not (np.all(np.isfinite(real)) and np.all(np.isfinite(imag))):
            raise ValidationError("State vector entries must be finite")

        real.setflags(write=False)
        imag.setflags(write=False)

        object.__setattr__(self, "real", real)
        object.__setattr__(self, "imag", imag)

    @property
    def m(self):
        return self.real.shape[0]

    @property
    def w(self) -> NDArray[np.complex128]:
        return self.real + 1j * self.imag

    @property
    def separation(self):
        """
        Minimum pairwise gap of the imaginary parts.
        """
        if self.m < 2:
            return float("inf")

        return float(np.min(np.diff(np.sort(self.imag))))

    @classmethod
    def new(cls, real: ArrayLike, imag: ArrayLike):
        return cls(real=np.asarray(real, dtype=float), imag=np.asarray(imag, dtype=float))

    @classmethod
    def from_complex(cls, w: ArrayLike):
        values = np.asarray(w, dtype=complex).reshape(-1)

        return cls(real=values.real, imag=values.imag)

    def with_zero_real(self, indices: Iterable[int]):
        """
        Returns a copy whose real parts at `indices` are set to zero.
        """
        real = self.real.copy()
        real[list(indices)] = 0.0

        return StateVector(real=real, imag=self.imag)

    def __eq__(self, other: object):
        if not isinstance(other, StateVector):
            return NotImplemented

        return np.array_equal(self.real, other.real) and np.array_equal(
            self.imag, other.imag
        )

    def __repr__(self):
        return f"StateVector(m={self.m}, w={np.array2string(self.w, precision=4)})"
