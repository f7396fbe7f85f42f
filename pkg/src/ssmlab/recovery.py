import logging
from typing import Tuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from .errors import ShapeMismatchError, ValidationError
from .models.discrete_kernel import DiscreteKernel
from .models.recovery_problem import RecoveryProblem
from .models.target_memory import TargetMemory
from .utils import as_vector, min_separation

logger = logging.getLogger(__name__)


def convolution_design(X: ArrayLike) -> NDArray[np.float64]:
    """
    `X J`, so that `(X * rho)_n = (X J rho)_n = sum_l rho_l X_{n, L-1-l}`.
    """
    X = np.asarray(X, dtype=float)

    if X.ndim != 2:
        raise ShapeMismatchError(f"X must have shape (N, L), got {X.shape}")

    return X[:, ::-1]


def suggested_ridge(X: ArrayLike) -> float:
    return 1e-6 * float(np.linalg.norm(np.asarray(X, dtype=float), 2)) ** 2


def recover_memory(problem: RecoveryProblem):
    """
    Least-squares deconvolution `min_rho ||X * rho - Y||_F^2`, one column of
    `rho` per label channel.

    Without a ridge the minimum-norm solution of `scipy.linalg.lstsq` is taken,
    which needs at least as many sequences as steps. With a ridge the
    regularized normal equations are solved by Cholesky.
    """
    design = convolution_design(problem.X)

    if problem.ridge == 0:
        if problem.N < problem.L:
            raise ValidationError(
                f"Only {problem.N} sequences for {problem.L} unknowns; "
                f"pass a ridge, e.g. {suggested_ridge(problem.X):.3g}"
            )

        rho, _, rank, _ = scipy.linalg.lstsq(design, problem.Y)

        if rank < problem.L:
            logger.warning(
                "Design matrix has rank %d < %d, returning the minimum-norm solution",
                rank,
                problem.L,
            )

    else:
        logger.debug("Ridge-regularized recovery with ridge %g", problem.ridge)

        normal = design.T @ design + problem.ridge * np.eye(problem.L)
        rho = scipy.linalg.solve(normal, design.T @ problem.Y, assume_a="pos")

    residual = float(np.sum((design @ rho - problem.Y) ** 2))

    return TargetMemory(raw=rho, residual=residual)


def dominant_frequencies(
    rho: TargetMemory,
    k: int,
    delta: float = 1.0,
) -> NDArray[np.float64]:
    """
    The `k` positive DFT frequencies of largest magnitude, strongest first,
    with ties going to the lower frequency. Channels are combined by summing
    their magnitudes.

    Args:
        delta: Sampling step. The default returns radians per sample;
            any other value converts to radians per unit time.
    """
    if rho.raw is None:
        raise ValidationError("dominant_frequencies needs a sampled memory function")

    L = rho.raw.shape[0]

    if not 1 <= k <= L // 2:
        raise ValidationError(f"k must lie in [1, {L // 2}] for L = {L}, got {k}")

    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")

    magnitude = np.abs(np.fft.rfft(rho.raw, axis=0)).sum(axis=1)
    bins = np.arange(1, magnitude.shape[0])
    # Stable sort keeps the lower bin first among equal magnitudes.
    order = np.argsort(-magnitude[1:], kind="stable")[:k]

    return 2 * np.pi * bins[order] / L / delta


def _fits(candidates: NDArray[np.float64], m: int, gap: float) -> bool:
    count = 1
    last = candidates[0]

    for value in candidates[1:]:
        if value - last >= gap:
            count += 1
            last = value

            if count == m:
                return True

    return count >= m


def greedy_select_nodes(
    dominant: ArrayLike,
    m: int,
) -> Tuple[NDArray[np.float64], float]:
    """
    Picks `m` of the dominant frequencies so that their minimum pairwise gap
    is as large as possible.

    On a line the left-to-right greedy that takes every candidate at least `g`
    past the last one finds `m` nodes exactly when some subset has gap `g`,
    so a binary search over the candidate pairwise gaps gives the optimum.
    The last pick is then moved to the rightmost candidate, which keeps both
    ends of the support.

    Returns:
        The chosen frequencies in ascending order and their separation.
    """
    dominant = as_vector(dominant, "dominant")

    if dominant.shape[0] < 1:
        raise ValidationError("Need at least one dominant frequency")

    if m < 1:
        raise ValidationError(f"m must be positive, got {m}")

    if m == 1:
        return dominant[:1].copy(), float("inf")

    candidates = np.unique(dominant)

    if m > candidates.shape[0]:
        raise ValidationError(
            f"Cannot pick {m} nodes from {candidates.shape[0]} distinct candidates"
        )

    gaps = np.unique(np.abs(np.subtract.outer(candidates, candidates)))
    gaps = gaps[gaps > 0]

    low, high = 0, gaps.shape[0] - 1

    while low < high:
        middle = (low + high + 1) // 2

        if _fits(candidates, m, gaps[middle]):
            low = middle

        else:
            high = middle - 1

    best = gaps[low]
    chosen = [candidates[0]]

    for value in candidates[1:]:
        if len(chosen) == m:
            break

        if value - chosen[-1] >= best:
            chosen.append(value)

    chosen[-1] = candidates[-1]
    nodes = np.array(chosen)

    logger.debug("Selected %d of %d candidates with separation %g", m, candidates.shape[0], best)

    return nodes, min_separation(nodes)


def expected_mse(model_kernel: DiscreteKernel, target: TargetMemory) -> float:
    """
    `||rho - rho*||^2`, which equals `E[(y_L - y*_L)^2]` when the inputs are
    uncorrelated with unit variance.
    """
    rho_star = target.vector

    if rho_star.shape[0] != model_kernel.length:
        raise ShapeMismatchError(
            f"Kernel length {model_kernel.length} does not match target length {rho_star.shape[0]}"
        )

    return float(np.sum((model_kernel.values - rho_star) ** 2))


def scale_for_plot(rho: TargetMemory):
    """
    `sqrt(L) rho`, the scaling that makes recovered memory patterns comparable
    across lengths. Presentation only.
    """
    if rho.raw is None:
        raise ValidationError("Only sampled memory functions can be scaled")

    return TargetMemory(raw=np.sqrt(rho.raw.shape[0]) * rho.raw, residual=rho.residual)
