import logging
import subprocess
from importlib import metadata
from pathlib import Path

from fun_things import lazy

logger = logging.getLogger(__name__)

PACKAGE_NAME = "ssm-lab"

# Below this modulus (e^z - 1) / z switches to its Taylor polynomial.
EZ_TAYLOR_THRESHOLD = 1e-6
# Same for the derivative (z e^z - e^z + 1) / z^2, whose cancellation is worse.
EZ_PRIME_TAYLOR_THRESHOLD = 1e-3
# Kernel powers are recomputed from a full exponential every this many steps.
REANCHOR_EVERY = 1024

DENSE_EIGEN_MAX_L = 2048
POWER_ITERATION_TOL = 1e-8
POWER_ITERATION_MAX_ITER = 10_000

CHOLESKY_JITTER = 1e-10
SYMMETRY_TOL = 1e-8
WHITEN_RIDGE = 1e-8

GRAM_SINGULAR_CONDITION = 1e12
POSITIVE_DEFINITE_RTOL = 1e-12

AUTOCORR_SAMPLES = 1000
MAGNITUDE_DRAWS = 256

LR_STATE = 1e-3
LR_READOUT = 1e-1
TRAIN_STEPS = 2000
TRAIN_BATCH = 64

SEED_ENV = "SSMLAB_SEED"


@lazy.fn
def version() -> str:
    """
    The `git describe` of the source tree when run from a checkout,
    otherwise the installed distribution version.
    """
    root = Path(__file__).resolve().parent

    try:
        described = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=root,
            capture_output=True,
            text=True,
            timeout=5,
            check=True,
        ).stdout.strip()

        if described:
            return described

    except (OSError, subprocess.SubprocessError):
        logger.debug("git describe unavailable, falling back to metadata")

    try:
        return metadata.version(PACKAGE_NAME)

    except metadata.PackageNotFoundError:
        return "0+unknown"
