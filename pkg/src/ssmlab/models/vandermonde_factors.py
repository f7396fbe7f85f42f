from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray


class VandermondeFactors(NamedTuple):
    """
    `V = 1/2 Phi^H D V_L`, so that `y_L = delta * c_stacked^T V J x`.
    """

    V: NDArray[np.float64]
    """
    Real `2m x L`: rows `Re(phi_j e^{delta w_j l})` then `-Im(...)`.
    """

    Phi: NDArray[np.complex128]
    """
    `[[I, iI], [I, -iI]]`, with `Phi Phi^H = 2 I`.
    """

    D: NDArray[np.complex128]
    """
    Diagonal `phi(delta conj(w))` then `phi(delta w)`, `phi(z) = (e^z - 1) / z`.
    """

    V_L: NDArray[np.complex128]
    """
    Vandermonde matrix on the nodes `e^{delta conj(w)}` then `e^{delta w}`.
    """

    J: NDArray[np.float64]
    """
    Row-reversed identity.
    """
