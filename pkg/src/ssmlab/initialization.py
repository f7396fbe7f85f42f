import logging
import math
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .errors import ValidationError
from .models.init_spec import InitSpec
from .models.ssm_bank import SsmBank
from .models.ssm_model import SsmModel
from .models.state_vector import StateVector
from .models.timescale_rule import TimescaleRule
from .utils import Seed, make_rng

logger = logging.getLogger(__name__)


def _zero_real_count(fraction: float, count: int):
    """
    `ceil(fraction * count)`, where a product within rounding error of a
    positive integer (`0.3 * 10`) counts as that integer.
    """
    product = fraction * count
    nearest = round(product)

    if nearest > 0 and math.isclose(product, nearest, rel_tol=1e-9):
        return min(count, nearest)

    return min(count, math.ceil(product))


def make_state_vector(spec: InitSpec):
    """
    Builds the nodes of an initialization scheme, then zeroes the real part of
    `ceil(p m)` states chosen uniformly at random without replacement.

    - s4d-lin: `w_j = real_part + i * imag_scale * pi * j`
    - s4d-real: `w_j = -j`
    - custom: the given nodes
    """
    j = np.arange(1, spec.m + 1, dtype=float)

    if spec.scheme == "s4d-lin":
        w = StateVector(
            real=np.full(spec.m, spec.real_part),
            imag=spec.imag_scale * np.pi * j,
        )

    elif spec.scheme == "s4d-real":
        w = StateVector(real=-j, imag=np.zeros(spec.m))

    else:
        assert spec.nodes is not None
        w = StateVector.from_complex(spec.nodes)

    count = _zero_real_count(spec.zero_real_fraction, spec.m)

    if count == 0:
        return w

    rng = make_rng(spec.seed)
    indices = np.sort(rng.choice(spec.m, size=count, replace=False))

    logger.debug("Zeroing the real part of %d of %d states", count, spec.m)

    return w.with_zero_real(indices)


def init_readout(m: int, seed: Seed = None) -> NDArray[np.complex128]:
    """
    Complex read-out with real and imaginary parts iid standard normal.
    """
    if m < 1:
        raise ValidationError(f"m must be at least 1, got {m}")

    rng = make_rng(seed)
    parts = rng.standard_normal((2, m))

    return parts[0] + 1j * parts[1]


def make_model(spec: InitSpec, delta: float):
    """
    A model with the nodes of `spec` and a standard normal read-out.
    The read-out uses a seed stream separate from the zero-real selection.
    """
    child = np.random.SeedSequence(spec.seed).spawn(1)[0]

    return SsmModel(
        w=make_state_vector(spec),
        c=init_readout(spec.m, child),
        delta=delta,
    )


def timescale_from_data(
    L: int,
    lambda_max: float,
    c0: float = 1.0,
) -> float:
    """
    The data-dependent timescale `c0 / sqrt(L * lambda_max)`.

    `lambda_max = 1` (uncorrelated inputs) gives `c0 / sqrt(L)`;
    `lambda_max = L` (constant inputs) gives `c0 / L`.
    """
    if L < 1:
        raise ValidationError(f"L must be at least 1, got {L}")

    if not lambda_max > 0:
        raise ValidationError(f"lambda_max must be positive, got {lambda_max}")

    if not c0 > 0:
        raise ValidationError(f"c0 must be positive, got {c0}")

    return c0 / math.sqrt(L * lambda_max)


def sample_timescales(
    rule: TimescaleRule,
    d: int,
    seed: Seed = None,
) -> NDArray[np.float64]:
    """
    `d` timescales drawn from `U[delta_min, delta_max]`.
    """
    if d < 1:
        raise ValidationError(f"d must be at least 1, got {d}")

    rng = make_rng(seed)

    return rng.uniform(rule.delta_min, rule.delta_max, size=d)


def resolve_timescale(
    rule: TimescaleRule,
    L: int,
    lambda_max: Optional[float] = None,
) -> float:
    if rule.mode == "fixed":
        return rule.delta_min

    if rule.mode == "power-law":
        return float(L ** (-rule.alpha))

    if lambda_max is None:
        raise ValidationError("The data-dependent timescale needs lambda_max")

    return timescale_from_data(L, lambda_max, rule.c0)


def make_bank(
    spec: InitSpec,
    rule: TimescaleRule,
    d: int,
    L: int,
    zero_real_channels: float = 0.0,
    delta0: Optional[float] = None,
    seed: Optional[int] = None,
):
    """
    A `d`-channel layer. Every channel gets the nodes of `spec`, its own
    standard normal read-out and its own timescale from `U[delta_min, delta_max]`.

    A fraction `zero_real_channels` of the channels, chosen at random, has
    all real parts set to zero and the constant timescale `delta0`, which
    defaults to `timescale_from_data(L, L)`, the choice that is stable
    without knowing the input spectrum.
    """
    if not 0.0 <= zero_real_channels <= 1.0:
        raise ValidationError(
            f"zero_real_channels must lie in [0, 1], got {zero_real_channels}"
        )

    w = make_state_vector(spec)
    readout_seed, delta_seed, pick_seed = np.random.SeedSequence(
        spec.seed if seed is None else seed
    ).spawn(3)

    real = np.tile(w.real, (d, 1))
    imag = np.tile(w.imag, (d, 1))

    rng = make_rng(readout_seed)
    c = rng.standard_normal((2, d, spec.m))

    delta = sample_timescales(rule, d, delta_seed)

    count = _zero_real_count(zero_real_channels, d)

    if count:
        channels = make_rng(pick_seed).choice(d, size=count, replace=False)
        real[channels] = 0.0
        delta[channels] = timescale_from_data(L, L) if delta0 is None else delta0

        logger.debug("Zero real part and constant timescale on %d channels", count)

    return SsmBank(real=real, imag=imag, c_real=c[0], c_imag=c[1], delta=delta)
