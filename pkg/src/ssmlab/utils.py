import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .constants import SEED_ENV
from .errors import ShapeMismatchError, ValidationError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

Seed = Union[int, np.random.SeedSequence, None]


def resolve_seed(seed: Optional[int] = None) -> int:
    """
    Returns `seed` if given, else the `SSMLAB_SEED` environment variable, else 0.
    """
    if seed is not None:
        return int(seed)

    value = os.environ.get(SEED_ENV)

    if value is None or not value.strip():
        return 0

    try:
        return int(value)

    except ValueError as e:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {value!r}") from e


def make_rng(seed: Seed = None):
    return np.random.default_rng(
        seed if isinstance(seed, np.random.SeedSequence) else resolve_seed(seed)
    )


def spawn_seeds(seed: Seed, count: int) -> List[np.random.SeedSequence]:
    """
    Independent child seeds, one per grid point, so that a grid gives the same
    numbers whichever order (or thread) its points are evaluated in.
    """
    root = (
        seed
        if isinstance(seed, np.random.SeedSequence)
        else np.random.SeedSequence(resolve_seed(seed))
    )

    return root.spawn(count)


def parallel_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    jobs: int = 1,
) -> List[R]:
    """
    Maps `fn` over `items`, keeping input order.
    With `jobs <= 1` this is a plain sequential loop.
    """
    items = list(items)

    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    logger.debug("Running %d tasks on %d threads", len(items), jobs)

    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items))


def as_vector(
    value: ArrayLike,
    name: str,
    dtype: type = float,
    length: Optional[int] = None,
) -> NDArray:
    array = np.asarray(value, dtype=dtype)

    if array.ndim == 0:
        array = array.reshape(1)

    if array.ndim != 1:
        raise ShapeMismatchError(f"{name} must be a vector, got shape {array.shape}")

    if length is not None and array.shape[0] != length:
        raise ShapeMismatchError(
            f"{name} must have length {length}, got {array.shape[0]}"
        )

    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{name} must be finite")

    return array


def as_square(value: ArrayLike, name: str) -> NDArray[np.float64]:
    array = np.asarray(value, dtype=float)

    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ShapeMismatchError(f"{name} must be square, got shape {array.shape}")

    return array


def min_separation(values: Sequence[float]) -> float:
    """
    Smallest pairwise gap `min_{j != k} |v_j - v_k|`; infinite for fewer than two values.
    """
    array = np.sort(np.asarray(values, dtype=float))

    if array.shape[0] < 2:
        return float("inf")

    return float(np.min(np.diff(array)))


def doubling_range(start: float, stop: float) -> List[float]:
    """
    `start, 2 start, 4 start, ...` up to and including `stop`.
    """
    if start <= 0 or stop < start:
        raise ValidationError(f"Invalid range {start}..{stop}")

    values = []
    value = start

    while value <= stop * (1 + 1e-12):
        values.append(value)
        value *= 2

    return values
