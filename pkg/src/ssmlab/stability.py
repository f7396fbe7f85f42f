import logging
from typing import Iterable, List, Optional

import numpy as np
import scipy.signal
from numpy.typing import ArrayLike, NDArray

from .autocorr import build_autocov, lambda_max, sample_gp
from .constants import MAGNITUDE_DRAWS
from .errors import HypothesisError, ValidationError
from .initialization import make_state_vector
from .kernel import kernel_basis
from .models.autocov_spec import AutocovSpec
from .models.init_spec import InitSpec
from .models.stability_report import StabilityReport
from .models.state_vector import StateVector
from .models.sweep_rows import MagnitudeRow
from .utils import Seed, as_square, make_rng, parallel_map, spawn_seeds

logger = logging.getLogger(__name__)


def magnitude_bound(
    delta: float,
    m: int,
    L: int,
    lambda_max: float,
) -> float:
    """
    Upper bound `delta^2 m^2 L lambda_max` on `E_{c,x}[y_L^2]` for a model whose
    nodes all have non-positive real part and whose read-out is standard normal.
    """
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")

    if m < 1 or L < 1:
        raise ValidationError(f"m and L must be positive, got m={m}, L={L}")

    if lambda_max < 0:
        raise ValidationError(f"lambda_max must be non-negative, got {lambda_max}")

    return delta**2 * m**2 * L * lambda_max


def delta_for_alpha(L: int, alpha: float) -> float:
    """
    The power-law timescale `L ** -alpha`.
    """
    if L < 1:
        raise ValidationError(f"L must be at least 1, got {L}")

    return float(L ** (-alpha))


def _check_hypothesis(w: StateVector):
    if np.any(w.real > 0):
        raise HypothesisError(
            f"The stability bound needs Re(w) <= 0, got max Re(w) = {w.real.max():g}"
        )


def _pooled_squares(
    kernel: NDArray[np.float64],
    X: NDArray[np.float64],
) -> NDArray[np.float64]:
    """
    `(1/L) sum_t y_t^2` for every row of `X`.
    """
    L = X.shape[1]
    outputs = scipy.signal.fftconvolve(X, kernel[None, :], axes=1)[:, :L]

    return np.mean(outputs**2, axis=1)


def empirical_magnitude(
    w: StateVector,
    delta: float,
    K: ArrayLike,
    n_c: int = MAGNITUDE_DRAWS,
    n_x: int = MAGNITUDE_DRAWS,
    seed: Seed = None,
    pooled: bool = False,
    spectrum: Optional[float] = None,
):
    """
    Monte Carlo estimate of the expected squared output over `n_c` standard
    normal read-outs crossed with `n_x` draws of `x ~ N(0, K)`.

    Every read-out is paired with every input, so the standard error is taken
    from the two marginal means of the `n_c x n_x` table of squared outputs.

    Args:
        pooled: Average `y_l^2` over all steps instead of taking the final output.
        spectrum: The top eigenvalue of `K`, when already known.
    """
    _check_hypothesis(w)

    K = as_square(K, "K")
    L = K.shape[0]

    if n_c < 2 or n_x < 2:
        raise ValidationError(f"Need at least two draws of each, got {n_c} x {n_x}")

    c_seed, x_seed = spawn_seeds(seed, 2)
    c_parts = make_rng(c_seed).standard_normal((2, n_c, w.m))
    c = c_parts[0] + 1j * c_parts[1]

    basis = kernel_basis(w.w, delta, L)
    kernels = (c @ basis).real
    X = sample_gp(K, n_x, x_seed)

    if pooled:
        squares = np.stack([_pooled_squares(kernel, X) for kernel in kernels])

    else:
        squares = (kernels @ X[:, ::-1].T) ** 2

    stderr = np.sqrt(
        np.var(squares.mean(axis=1), ddof=1) / n_c
        + np.var(squares.mean(axis=0), ddof=1) / n_x
    )

    if spectrum is None:
        spectrum = lambda_max(K).lambda_max if np.any(K) else 0.0

    return StabilityReport(
        bound=magnitude_bound(delta, w.m, L, max(spectrum, 0.0)),
        empirical=float(squares.mean()),
        stderr=float(stderr),
        n_samples=n_c * n_x,
        delta=delta,
        L=L,
        m=w.m,
        real_part=float(w.real.max()),
        lambda_max=spectrum,
        pooled=pooled,
    )


def expected_magnitude(
    w: StateVector,
    delta: float,
    K: ArrayLike,
    pooled: bool = False,
) -> float:
    """
    The exact value of what `empirical_magnitude` estimates.

    With `S_{lk} = E_c[rho_l rho_k] = Re(sum_j B_jl conj(B_jk))` over the kernel
    basis `B`, the final output gives `sum_{l,k} S_{lk} K_{L-1-l, L-1-k}`.
    """
    K = as_square(K, "K")
    L = K.shape[0]

    basis = kernel_basis(w.w, delta, L)
    S = (basis.T @ basis.conj()).real

    if not pooled:
        return float(np.sum(S * K[::-1, ::-1]))

    total = 0.0

    for t in range(L):
        total += float(np.sum(S[: t + 1, : t + 1] * K[t::-1, t::-1]))

    return total / L


def magnitude_sweep(
    kinds: Iterable[str],
    Ls: Iterable[int],
    alphas: Iterable[float],
    reals: Iterable[float],
    m: int = 4,
    n_c: int = MAGNITUDE_DRAWS,
    n_x: int = MAGNITUDE_DRAWS,
    seed: Seed = None,
    jobs: int = 1,
    pooled: bool = False,
    length_scale: Optional[float] = None,
) -> List[MagnitudeRow]:
    """
    Expected output magnitude against its bound over a grid of input kinds,
    lengths, power-law timescales `delta = L^-alpha` and real parts of
    S4D-Lin nodes.

    The autocovariance and its spectrum are built once per `(kind, L)`;
    `length_scale` only changes the rbf kind.
    """
    alphas = list(alphas)
    reals = list(reals)
    grid = [(kind, int(L)) for kind in kinds for L in Ls]
    seeds = spawn_seeds(seed, len(grid))

    def run(index: int):
        kind, L = grid[index]
        cell_seeds = seeds[index].spawn(1 + len(alphas) * len(reals))

        K = build_autocov(
            AutocovSpec(
                kind=kind,  # type: ignore[arg-type]
                L=L,
                length_scale=length_scale,
                seed=int(cell_seeds[0].generate_state(1)[0]),
            )
        )
        spectrum = lambda_max(K).lambda_max

        rows = []

        for i, alpha in enumerate(alphas):
            for j, re in enumerate(reals):
                w = make_state_vector(InitSpec(m=m, real_part=re))
                delta = delta_for_alpha(L, alpha)

                report = empirical_magnitude(
                    w,
                    delta,
                    K,
                    n_c=n_c,
                    n_x=n_x,
                    seed=cell_seeds[1 + i * len(reals) + j],
                    pooled=pooled,
                    spectrum=spectrum,
                )

                logger.info(
                    "magnitude kind=%s L=%d alpha=%g re=%g empirical=%.6g bound=%.6g",
                    kind,
                    L,
                    alpha,
                    re,
                    report.empirical,
                    report.bound,
                )

                rows.append(
                    MagnitudeRow(
                        kind=kind,
                        L=L,
                        alpha=float(alpha),
                        re=float(re),
                        empirical=report.empirical,
                        stderr=report.stderr,
                        bound=report.bound,
                    )
                )

        return rows

    return [row for rows in parallel_map(run, range(len(grid)), jobs) for row in rows]
