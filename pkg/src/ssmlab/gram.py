import logging
import math
from typing import Iterable, List, Literal, Optional, Tuple

import numpy as np
import scipy.integrate
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from .constants import GRAM_SINGULAR_CONDITION, POSITIVE_DEFINITE_RTOL
from .errors import SingularGramError, ValidationError
from .models.gram_matrix import GramMatrix
from .models.spectrum_bounds import SpectrumBounds
from .models.state_vector import StateVector
from .models.sweep_rows import ConditionRow, TradeoffRow
from .models.tradeoff_target import TradeoffTarget
from .utils import as_vector, min_separation, parallel_map

logger = logging.getLogger(__name__)

# Quadrature stops where the integrand envelope falls below this.
QUADRATURE_CUTOFF = 1e-14

_ZETA_4 = math.pi**4 / 90
_ZETA_6 = math.pi**6 / 945
_ZETA_8 = math.pi**8 / 9450


def cosine_integral(v_j: ArrayLike, v_k: ArrayLike):
    """
    `int_0^inf e^{-s} cos(v_j s) cos(v_k s) ds`
    `= 1/2 (1 / (1 + (v_j - v_k)^2) + 1 / (1 + (v_j + v_k)^2))`,
    broadcast over the inputs.
    """
    v_j = np.asarray(v_j, dtype=float)
    v_k = np.asarray(v_k, dtype=float)

    value = 0.5 * (1.0 / (1.0 + (v_j - v_k) ** 2) + 1.0 / (1.0 + (v_j + v_k) ** 2))

    if value.ndim == 0:
        return float(value)

    return value


def separation_distance(v: ArrayLike) -> float:
    """
    `min_{j != k} |v_j - v_k|`.
    """
    return min_separation(as_vector(v, "v"))


def gram_complex(v: ArrayLike):
    """
    Gram matrix of the basis `e^{-s/2} cos(v_j s)`, i.e. of nodes `w_j = -1/2 + i v_j`.
    """
    v = as_vector(v, "v")

    return GramMatrix(
        entries=cosine_integral(v[:, None], v[None, :]),
        source="complex-half",
        nodes=v,
    )


def gram_real(a: ArrayLike):
    """
    Gram matrix `-1 / (a_j + a_k)` of the basis `e^{a_j s}`.
    For `a_j = -j` this is the Hilbert-type matrix `1 / (j + k)`.
    """
    a = as_vector(a, "a")
    sums = a[:, None] + a[None, :]

    if np.any(sums >= 0):
        raise ValidationError("gram_real needs a_j + a_k < 0 for every pair")

    return GramMatrix(entries=-1.0 / sums, source="real-nodes", nodes=a)


def _quad_entry(w_j: complex, w_k: complex) -> float:
    decay = -(w_j.real + w_k.real)
    stop = -math.log(QUADRATURE_CUTOFF) / decay
    oscillations = stop * (abs(w_j.imag) + abs(w_k.imag)) / math.pi

    value, _ = scipy.integrate.quad(
        lambda s: math.exp(-decay * s)
        * math.cos(w_j.imag * s)
        * math.cos(w_k.imag * s),
        0.0,
        stop,
        limit=max(100, int(4 * oscillations) + 50),
        epsabs=1e-13,
        epsrel=1e-11,
    )

    return value


def gram_numeric(w: StateVector):
    """
    Gram matrix `int_0^inf Re(e^{w_j s}) Re(e^{w_k s}) ds` for arbitrary
    nodes with negative real part, by adaptive quadrature.
    """
    if np.any(w.real >= 0):
        raise ValidationError("gram_numeric needs Re(w_j) < 0 for every node")

    nodes = w.w
    entries = np.empty((w.m, w.m))

    for j in range(w.m):
        for k in range(j, w.m):
            entries[j, k] = entries[k, j] = _quad_entry(nodes[j], nodes[k])

    logger.debug("Computed %d Gram entries by quadrature", w.m * (w.m + 1) // 2)

    return GramMatrix(
        entries=entries,
        source="numeric",
        nodes=np.concatenate([w.real, w.imag]),
    )


def gershgorin_bounds(delta: float):
    """
    Eigenvalue enclosure for `gram_complex(v)` when the `v_j` are separated
    by at least `delta`:

    ```
    1.19 - (3 pi / 4 delta) coth(pi / delta) < lambda < 5/12 + (3 pi / 4 delta) coth(pi / delta)
    ```

    The lower end only becomes positive a little above `delta = 2.3`.
    """
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")

    if math.isinf(delta):
        term = 0.75

    else:
        x = math.pi / delta
        term = 0.75 * x / math.tanh(x)

    return SpectrumBounds(lower=1.19 - term, upper=5 / 12 + term, delta=delta)


def basel_sum(t: float) -> float:
    """
    `sum_{n >= 1} 1 / (n^2 + t^2) = -1 / (2 t^2) + (pi / 2t) coth(pi t)`.

    At `t = 0` this is the limit `pi^2 / 6`. Near zero a short series in `t^2`
    replaces the closed form, whose two terms cancel.
    """
    if not math.isfinite(t):
        raise ValidationError(f"t must be finite, got {t}")

    t = abs(t)

    if t < 1e-2:
        t2 = t * t

        return math.pi**2 / 6 - t2 * _ZETA_4 + t2 * t2 * _ZETA_6 - t2**3 * _ZETA_8

    return -1 / (2 * t * t) + math.pi / (2 * t) / math.tanh(math.pi * t)


def worst_case_matrix(xi: ArrayLike) -> NDArray[np.float64]:
    """
    `int_0^inf e^{-s} cos(xi s) cos(xi s)^T ds`, the approximation matrix of a
    model that shares no frequency with the target.
    """
    xi = as_vector(xi, "xi")

    return cosine_integral(xi[:, None], xi[None, :])


def approximation_matrix(
    v: ArrayLike,
    target: TradeoffTarget,
) -> Tuple[NDArray[np.float64], float]:
    """
    The Schur complement `M = W - C^T G^{-1} C` of the joint Gram matrix of the
    target frequencies `xi` and the model frequencies `v`, with
    `C_{jk} = int e^{-s} cos(v_j s) cos(xi_k s) ds`.

    `G` is factorized by Cholesky and never inverted.

    Returns:
        `M` and its largest singular value.

    Raises:
        SingularGramError: `G` is singular to working precision.
    """
    v = as_vector(v, "v")
    gram = gram_complex(v)
    condition = gram.condition

    if not condition < GRAM_SINGULAR_CONDITION:
        raise SingularGramError(
            f"Gram matrix is numerically singular (condition {condition:.3g}, "
            f"separation {separation_distance(v):.3g})",
            separation=separation_distance(v),
            condition=condition,
        )

    logger.debug("Gram condition number %.6g", condition)

    C = cosine_integral(v[:, None], target.xi[None, :])
    factor = scipy.linalg.cho_factor(gram.entries, lower=True)
    projected = C.T @ scipy.linalg.cho_solve(factor, C)

    M = worst_case_matrix(target.xi) - projected
    M = 0.5 * (M + M.T)

    sigma_max = float(np.max(np.abs(scipy.linalg.eigh(M, eigvals_only=True))))

    return M, sigma_max


def approximation_error(v: ArrayLike, target: TradeoffTarget) -> float:
    """
    `c_hat^T M c_hat`, the squared `L^2` distance from the target memory to its
    best approximation by the model frequencies.
    """
    M, _ = approximation_matrix(v, target)

    return float(target.c_hat @ M @ target.c_hat)


def target_energy(target: TradeoffTarget) -> float:
    """
    `int_0^inf rho*(s)^2 ds`.
    """
    return float(target.c_hat @ worst_case_matrix(target.xi) @ target.c_hat)


def positive_definite_check(
    nodes: ArrayLike,
    real: bool = False,
) -> Tuple[bool, float]:
    """
    Whether the Gram matrix of `nodes` is numerically positive definite,
    meaning `lambda_min > 1e-12 lambda_max`.

    Args:
        nodes: The imaginary parts `v` or, with `real`, the negative real parts `a`.

    Returns:
        The verdict and the smallest eigenvalue.
    """
    gram = gram_real(nodes) if real else gram_complex(nodes)

    return gram.lambda_min > POSITIVE_DEFINITE_RTOL * gram.lambda_max, gram.lambda_min


def tradeoff_sweep(
    xi: ArrayLike,
    ratios: Iterable[float],
    c_hat: Optional[ArrayLike] = None,
    jobs: int = 1,
) -> List[TradeoffRow]:
    """
    Conditioning against approximation as the model frequencies `v = r xi`
    move away from the target frequencies.
    """
    xi = as_vector(xi, "xi")

    if separation_distance(xi) <= 0:
        raise ValidationError("Target frequencies must be distinct")

    target = (
        TradeoffTarget.unit(xi)
        if c_hat is None
        else TradeoffTarget(c_hat=np.asarray(c_hat, dtype=float), xi=xi)
    )

    def run(ratio: float):
        if not ratio > 0:
            raise ValidationError(f"Ratios must be positive, got {ratio}")

        v = ratio * xi
        _, sigma_max = approximation_matrix(v, target)
        row = TradeoffRow(
            ratio=float(ratio),
            kappa=gram_complex(v).condition,
            sigma_max=sigma_max,
        )

        logger.info("tradeoff ratio=%g kappa=%.6g sigma_max=%.6g", ratio, row.kappa, sigma_max)

        return row

    return parallel_map(run, list(ratios), jobs)


def condition_sweep(
    scheme: Literal["s4d-lin", "s4d-real"],
    ms: Iterable[int],
    scales: Iterable[float] = (1.0,),
    jobs: int = 1,
) -> List[ConditionRow]:
    """
    Spectrum of the Gram matrix of the S4D-Lin nodes `v_j = scale pi j`
    or the S4D-Real nodes `a_j = -scale j`, per hidden size.
    """
    if scheme not in ("s4d-lin", "s4d-real"):
        raise ValidationError(f"Unknown scheme: {scheme}")

    grid = [(int(m), float(scale)) for m in ms for scale in scales]

    def run(cell: Tuple[int, float]):
        m, scale = cell
        j = np.arange(1, m + 1, dtype=float)

        gram = (
            gram_complex(scale * np.pi * j)
            if scheme == "s4d-lin"
            else gram_real(-scale * j)
        )

        row = ConditionRow(
            scheme=scheme,
            m=m,
            scale=scale,
            lambda_min=gram.lambda_min,
            lambda_max=gram.lambda_max,
            kappa=gram.condition,
        )

        logger.info("condition scheme=%s m=%d scale=%g kappa=%.6g", scheme, m, scale, row.kappa)

        return row

    return parallel_map(run, grid, jobs)
