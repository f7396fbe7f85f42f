import logging
from typing import Iterable, List, Literal, Optional, Tuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from .constants import (
    AUTOCORR_SAMPLES,
    CHOLESKY_JITTER,
    DENSE_EIGEN_MAX_L,
    POWER_ITERATION_MAX_ITER,
    POWER_ITERATION_TOL,
    SYMMETRY_TOL,
    WHITEN_RIDGE,
)
from .errors import ConvergenceError, ShapeMismatchError, ValidationError
from .models.autocov_spec import AutocovSpec
from .models.spectrum_report import SpectrumReport
from .models.sweep_rows import SpectrumRow
from .models.whitening import Whitening
from .utils import Seed, as_square, make_rng, parallel_map, spawn_seeds

logger = logging.getLogger(__name__)

EigenMethod = Literal["auto", "exact", "power"]


def _check_psd(K: NDArray[np.float64], name: str):
    scale = max(1.0, float(np.max(np.abs(K))) if K.size else 1.0)

    if np.max(np.abs(K - K.T)) > SYMMETRY_TOL * scale:
        raise ValidationError(f"{name} is not symmetric")

    smallest = scipy.linalg.eigh(
        0.5 * (K + K.T),
        eigvals_only=True,
        subset_by_index=[0, 0],
    )[0]

    if smallest < -SYMMETRY_TOL * scale:
        raise ValidationError(
            f"{name} is not positive semi-definite (smallest eigenvalue {smallest:g})"
        )


def build_autocov(spec: AutocovSpec) -> NDArray[np.float64]:
    """
    The `L x L` autocovariance of a synthetic Gaussian process:

    - iid: identity.
    - ou: `exp(-|i-j| / 2)`.
    - rbf: `exp(-pi |i-j|^2)`, or `exp(-|i-j|^2 / length_scale)`.
    - rand: `Sigma Sigma^T / L` with `Sigma_ij ~ U[0, sqrt 3]`, rescaled to unit diagonal.
    - constant: all ones (a constant sequence).
    - empirical: the given matrix after a symmetry and PSD check.
    """
    L = spec.L
    gap = np.abs(np.subtract.outer(np.arange(L), np.arange(L))).astype(float)

    if spec.kind == "iid":
        return np.eye(L)

    if spec.kind == "ou":
        return np.exp(-gap / 2)

    if spec.kind == "rbf":
        if spec.length_scale is None:
            return np.exp(-np.pi * gap**2)

        return np.exp(-(gap**2) / spec.length_scale)

    if spec.kind == "constant":
        return np.ones((L, L))

    if spec.kind == "rand":
        rng = make_rng(spec.seed)
        sigma = rng.uniform(0.0, np.sqrt(3.0), size=(L, L))
        K = sigma @ sigma.T / L
        # E[K_ii] = 1; divide out the sampling error so Tr(K) = L exactly.
        scale = 1.0 / np.sqrt(np.diag(K))

        return scale[:, None] * K * scale[None, :]

    assert spec.matrix is not None
    K = np.array(spec.matrix)
    _check_psd(K, "Empirical autocovariance")

    return 0.5 * (K + K.T)


def sample_gp(
    K: ArrayLike,
    n: int,
    seed: Seed = None,
) -> NDArray[np.float64]:
    """
    `n` rows drawn iid from `N(0, K)` through a Cholesky factor of `K`.

    A diagonal jitter of `1e-10` (relative to the mean variance) is added when
    the plain factorization fails, and grown tenfold twice more before giving up.
    """
    K = as_square(K, "K")
    L = K.shape[0]

    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")

    rng = make_rng(seed)
    scale = float(np.mean(np.diag(K)))

    if scale <= 0:
        # A PSD matrix with zero diagonal is zero: the process is identically 0.
        if np.any(K):
            raise ValidationError("K has a non-positive diagonal but is not zero")

        return np.zeros((n, L))

    factor: Optional[NDArray[np.float64]] = None

    try:
        factor = scipy.linalg.cholesky(K, lower=True)

    except scipy.linalg.LinAlgError:
        for jitter in CHOLESKY_JITTER * np.array([1.0, 10.0, 100.0]):
            logger.debug("Cholesky failed, retrying with jitter %g", jitter * scale)

            try:
                factor = scipy.linalg.cholesky(
                    K + jitter * scale * np.eye(L),
                    lower=True,
                )
                break

            except scipy.linalg.LinAlgError:
                continue

    if factor is None:
        raise ValidationError("Cholesky factorization failed even with jitter")

    return rng.standard_normal((n, L)) @ factor.T


def power_iteration(
    A: ArrayLike,
    tol: float = POWER_ITERATION_TOL,
    max_iter: int = POWER_ITERATION_MAX_ITER,
) -> Tuple[float, NDArray[np.float64], int]:
    """
    Dominant eigenpair of a symmetric PSD matrix.

    Starts from the normalized all-ones vector and stops once the Rayleigh
    quotient changes by less than `tol` relative.

    Returns:
        The eigenvalue, the eigenvector and the number of iterations.
    """
    A = as_square(A, "A")
    n = A.shape[0]

    x = np.ones(n) / np.sqrt(n)
    lam = float(x @ A @ x)

    for iteration in range(1, max_iter + 1):
        y = A @ x
        norm = np.linalg.norm(y)

        if norm == 0:
            # x lies in the null space; restart on a random direction.
            x = make_rng(iteration).standard_normal(n)
            x /= np.linalg.norm(x)
            continue

        x = y / norm
        lam_new = float(x @ A @ x)

        if abs(lam_new - lam) <= tol * max(abs(lam_new), np.finfo(float).tiny):
            return lam_new, x, iteration

        lam = lam_new

    raise ConvergenceError(
        f"Power iteration did not reach tolerance {tol:g} in {max_iter} iterations"
    )


def lambda_max(
    matrix: ArrayLike,
    is_data: bool = False,
    method: EigenMethod = "auto",
    tol: float = POWER_ITERATION_TOL,
    max_iter: int = POWER_ITERATION_MAX_ITER,
):
    """
    Largest eigenvalue of an autocorrelation matrix.

    Args:
        matrix: The `L x L` matrix, or an `n x L` data matrix if `is_data`,
            in which case the sample autocorrelation `X^T X / n` is used.
        method: `exact` uses a dense symmetric eigensolver, `power` uses power
            iteration, and `auto` picks the dense solver up to `L = 2048`.
    """
    array = np.asarray(matrix, dtype=float)

    if is_data:
        if array.ndim != 2:
            raise ShapeMismatchError(f"Data must have shape (n, L), got {array.shape}")

        array = array.T @ array / array.shape[0]

    K = as_square(array, "Autocorrelation matrix")
    L = K.shape[0]
    trace = float(np.trace(K))

    if method == "auto":
        method = "exact" if L <= DENSE_EIGEN_MAX_L else "power"

    if method == "exact":
        value = scipy.linalg.eigh(
            0.5 * (K + K.T),
            eigvals_only=True,
            subset_by_index=[L - 1, L - 1],
        )[0]

        return SpectrumReport(
            lambda_max=float(value),
            trace=trace,
            L=L,
            method="exact",
        )

    value, _, iterations = power_iteration(K, tol=tol, max_iter=max_iter)

    logger.debug("Power iteration converged in %d iterations (L = %d)", iterations, L)

    return SpectrumReport(
        lambda_max=value,
        trace=trace,
        L=L,
        method="power-iteration",
        iterations=iterations,
        tol=tol,
    )


def whiten(
    X: ArrayLike,
    ridge: float = WHITEN_RIDGE,
) -> Tuple[NDArray[np.float64], Whitening]:
    """
    Centers the columns of `X` and applies the symmetric whitening matrix
    `V diag(1 / sqrt(s^2 / n + ridge)) V^T` from the SVD of the centered data,
    so that the sample autocorrelation of the output is the identity.

    Directions with zero variance are mapped to zero. Without a ridge they
    make the problem degenerate and raise.
    """
    X = np.asarray(X, dtype=float)

    if X.ndim != 2 or X.shape[0] < 2:
        raise ShapeMismatchError(f"X must have shape (n >= 2, L), got {X.shape}")

    if ridge < 0:
        raise ValidationError(f"ridge must be non-negative, got {ridge}")

    n, L = X.shape
    mean = X.mean(axis=0)
    centered = X - mean

    _, s, vt = scipy.linalg.svd(centered, full_matrices=n < L)

    variances = np.zeros(L)
    variances[: s.shape[0]] = s**2 / n

    tiny = variances <= np.finfo(float).eps * max(1.0, float(variances.max())) * L

    if np.any(tiny) and ridge == 0:
        raise ValidationError(
            f"Data has rank {int(np.sum(~tiny))} < {L}; whitening needs a ridge"
        )

    if np.any(tiny):
        logger.debug("Whitening %d degenerate directions through the ridge", int(tiny.sum()))

    gains = np.where(tiny, 0.0, 1.0 / np.sqrt(variances + ridge))
    matrix = (vt.T * gains) @ vt

    transform = Whitening(mean=mean, matrix=matrix, ridge_used=bool(np.any(tiny)))

    return centered @ matrix, transform


def sample_autocorrelation(
    spec: AutocovSpec,
    n: int = AUTOCORR_SAMPLES,
    seed: Seed = None,
) -> NDArray[np.float64]:
    """
    `X^T X / n` for `n` draws of the process; with the default 1000 draws this is
    the finite-sample matrix whose spectrum deviates from the exact one at large `L`.
    """
    X = sample_gp(build_autocov(spec), n, seed)

    return X.T @ X / n


def spectrum_sweep(
    kinds: Iterable[str],
    Ls: Iterable[int],
    n_samples: int = AUTOCORR_SAMPLES,
    seed: Seed = None,
    jobs: int = 1,
    length_scale: Optional[float] = None,
) -> List[SpectrumRow]:
    """
    Top eigenvalue of the exact and of the sampled autocorrelation for every
    `(kind, L)` pair. `length_scale` only changes the rbf kind.
    """
    grid = [(kind, int(L)) for kind in kinds for L in Ls]
    seeds = spawn_seeds(seed, len(grid))

    def run(index: int):
        kind, L = grid[index]
        spec = AutocovSpec(
            kind=kind,  # type: ignore[arg-type]
            L=L,
            length_scale=length_scale,
            seed=int(seeds[index].generate_state(1)[0]),
        )
        K = build_autocov(spec)
        X = sample_gp(K, n_samples, seeds[index])

        row = SpectrumRow(
            kind=kind,
            L=L,
            lambda_max=lambda_max(K).lambda_max,
            lambda_max_sample=lambda_max(X, is_data=True).lambda_max,
        )

        logger.info("spectrum kind=%s L=%d lambda_max=%.6g", kind, L, row.lambda_max)

        return row

    return parallel_map(run, range(len(grid)), jobs)
