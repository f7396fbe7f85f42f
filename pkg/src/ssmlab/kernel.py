import logging
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .constants import EZ_PRIME_TAYLOR_THRESHOLD, EZ_TAYLOR_THRESHOLD, REANCHOR_EVERY
from .errors import KernelOverflowError, ShapeMismatchError, ValidationError
from .models.discrete_kernel import DiscreteKernel
from .models.ssm_bank import SsmBank
from .models.ssm_model import SsmModel
from .models.state_vector import StateVector
from .models.vandermonde_factors import VandermondeFactors
from .utils import as_vector

logger = logging.getLogger(__name__)


def _expm1(z: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """
    `e^z - 1` without cancellation near zero.
    """
    a, b = z.real, z.imag

    real = np.expm1(a) * np.cos(b) - 2.0 * np.sin(b / 2) ** 2
    imag = np.exp(a) * np.sin(b)

    return real + 1j * imag


def ez_ratio(z: ArrayLike) -> NDArray[np.complex128]:
    """
    Elementwise `(e^z - 1) / z`, equal to 1 at `z = 0`.
    """
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < EZ_TAYLOR_THRESHOLD
    safe = np.where(small, 1.0, z)

    with np.errstate(over="ignore", invalid="ignore"):
        exact = _expm1(safe) / safe

    taylor = 1.0 + z / 2 + z * z / 6

    return np.where(small, taylor, exact)


def ez_ratio_prime(z: ArrayLike) -> NDArray[np.complex128]:
    """
    Derivative of `ez_ratio`, `(z e^z - e^z + 1) / z^2`.
    """
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < EZ_PRIME_TAYLOR_THRESHOLD
    safe = np.where(small, 1.0, z)

    with np.errstate(over="ignore", invalid="ignore"):
        exact = (safe * np.exp(safe) - _expm1(safe)) / (safe * safe)

    taylor = 0.5 + z / 3 + z * z / 8 + z**3 / 30

    return np.where(small, taylor, exact)


def safe_ez_ratio(z: complex) -> complex:
    """
    `(e^z - 1) / z` for a single finite `z`.

    When `Re(z) <= 0` the modulus of the result is at most one.
    """
    z = complex(z)

    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValidationError(f"z must be finite, got {z}")

    if abs(z) < EZ_TAYLOR_THRESHOLD:
        logger.debug("Taylor branch for (e^z - 1) / z at |z| = %g", abs(z))

    return complex(ez_ratio(z))


def powers(z: ArrayLike, L: int) -> NDArray[np.complex128]:
    """
    `e^{z l}` for `l = 0..L-1`, appended as a trailing axis.

    Successive powers come from repeated multiplication by `e^z`, restarted
    from a full exponential every `REANCHOR_EVERY` steps.
    """
    z = np.asarray(z, dtype=complex)
    block = max(1, min(L, REANCHOR_EVERY))
    blocks = -(-L // block)

    with np.errstate(over="ignore", invalid="ignore"):
        step = np.exp(z)
        within = np.empty(z.shape + (block,), dtype=complex)
        within[..., 0] = 1.0

        if block > 1:
            within[..., 1:] = np.cumprod(
                np.broadcast_to(step[..., None], z.shape + (block - 1,)),
                axis=-1,
            )

        anchors = np.exp(z[..., None] * (np.arange(blocks) * block))
        values = (anchors[..., :, None] * within[..., None, :]).reshape(
            z.shape + (blocks * block,)
        )[..., :L]

    if not np.all(np.isfinite(values)):
        raise KernelOverflowError(
            f"Kernel powers overflow for L = {L}; "
            f"largest Re(delta w) * L is {float(np.max(z.real)) * L:g}"
        )

    return values


def _check_length(L: int):
    if int(L) != L or L < 1:
        raise ValidationError(f"L must be a positive integer, got {L}")


def kernel_basis(
    w: ArrayLike,
    delta: ArrayLike,
    L: int,
) -> NDArray[np.complex128]:
    """
    `((e^{delta w_j} - 1) / w_j) e^{delta w_j l}` with shape `w.shape + (L,)`.

    `delta` broadcasts against every axis of `w` but the last.
    """
    _check_length(L)

    w = np.asarray(w, dtype=complex)
    delta = np.asarray(delta, dtype=float)[..., None]
    z = delta * w

    with np.errstate(over="ignore", invalid="ignore"):
        basis = (delta * ez_ratio(z))[..., None] * powers(z, L)

    if not np.all(np.isfinite(basis)):
        raise KernelOverflowError(f"Kernel coefficients overflow for L = {L}")

    return basis


def zoh_kernel(model: SsmModel, L: int):
    """
    Coefficients of the zero-order-hold output,

    ```
    rho_l = Re(sum_j ((e^{delta w_j} - 1) / w_j) c_j e^{delta w_j l}),    l = 0..L-1,
    ```

    where `rho_l` multiplies `x_{L-1-l}` in `y_L`.
    """
    basis = kernel_basis(model.w.w, model.delta, L)

    return DiscreteKernel(values=(model.c @ basis).real, delta=model.delta)


def bank_kernels(bank: SsmBank, L: int) -> NDArray[np.float64]:
    """
    One kernel per channel, shape `(d, L)`.
    """
    basis = kernel_basis(bank.w, bank.delta, L)

    return np.einsum("dm,dml->dl", bank.c, basis).real


def forward(model: SsmModel, x: ArrayLike) -> float:
    """
    Final output `y_L = sum_l rho_l x_{L-1-l}`.
    """
    x = as_vector(x, "x")
    kernel = zoh_kernel(model, x.shape[0]).values

    return float(kernel @ x[::-1])


def forward_batch(model: SsmModel, X: ArrayLike) -> NDArray[np.float64]:
    """
    Final outputs of every row of an `N x L` matrix.
    """
    X = np.asarray(X, dtype=float)

    if X.ndim != 2:
        raise ShapeMismatchError(f"X must have shape (N, L), got {X.shape}")

    kernel = zoh_kernel(model, X.shape[1]).values

    return X[:, ::-1] @ kernel


def forward_sequence(model: SsmModel, x: ArrayLike) -> NDArray[np.float64]:
    """
    `(y_1, ..., y_L)` where `y_l` sees `x_0..x_{l-1}`.
    """
    x = as_vector(x, "x")
    kernel = zoh_kernel(model, x.shape[0]).values

    return np.convolve(x, kernel)[: x.shape[0]]


def forward_pooled(model: SsmModel, x: ArrayLike) -> float:
    """
    Pooling output mode, `(1/L) sum_l y_l^2`.
    """
    return float(np.mean(forward_sequence(model, x) ** 2))


def continuous_kernel(
    w: StateVector,
    c: ArrayLike,
    s_grid: ArrayLike,
) -> NDArray[np.float64]:
    """
    Memory function `Re(c^T e^{w s})` on a grid of `s >= 0`.
    For real `c` this is `sum_j c_j e^{a_j s} cos(v_j s)`.
    """
    c = as_vector(c, "c", dtype=complex, length=w.m)
    s = np.asarray(s_grid, dtype=float)

    if not np.all(np.isfinite(s)):
        raise ValidationError("s_grid must be finite")

    if np.any(s < 0):
        raise ValidationError("s_grid entries must be non-negative")

    return (np.exp(np.multiply.outer(s, w.w)) @ c).real


def vandermonde_factor(model: SsmModel, L: int):
    """
    Factorizes the output map through a complex Vandermonde matrix:
    `V = 1/2 Phi^H D V_L` and `y_L = delta * c_stacked^T V J x`.
    """
    _check_length(L)

    m = model.m
    z = model.delta * model.w.w
    ratio = ez_ratio(z)

    rows = ratio[:, None] * powers(z, L)
    V = np.vstack([rows.real, -rows.imag])

    identity = np.eye(m)
    Phi = np.block([[identity, 1j * identity], [identity, -1j * identity]])
    D = np.diag(np.concatenate([ez_ratio(np.conj(z)), ratio]))
    V_L = np.vstack([powers(np.conj(z), L), powers(z, L)])
    J = np.eye(L)[::-1]

    return VandermondeFactors(V=V, Phi=Phi, D=D, V_L=V_L, J=J)


def kernel_jacobians(
    bank: SsmBank,
    L: int,
) -> Tuple[NDArray[np.complex128], NDArray[np.complex128], NDArray[np.complex128]]:
    """
    The complex basis `B = delta phi(delta w) e^{delta w l}` together with its
    derivatives in `w` and in `delta`, each of shape `(d, m, L)`:

    ```
    dB/dw     = delta^2 e^{delta w l} (phi'(delta w) + l phi(delta w))
    dB/ddelta = e^{delta w l} (e^{delta w} + delta w l phi(delta w))
    ```

    `B` is holomorphic in `w`, so `d Re(c B)/da = Re(c dB/dw)` and
    `d Re(c B)/dv = -Im(c dB/dw)`.
    """
    _check_length(L)

    delta = bank.delta[:, None]
    z = delta * bank.w
    E = powers(z, L)
    l = np.arange(L)

    phi = ez_ratio(z)[..., None]
    phi_prime = ez_ratio_prime(z)[..., None]

    basis = (delta * ez_ratio(z))[..., None] * E
    d_w = (delta**2)[..., None] * E * (phi_prime + l * phi)
    d_delta = E * (np.exp(z)[..., None] + z[..., None] * l * phi)

    return basis, d_w, d_delta
