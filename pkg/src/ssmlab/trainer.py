import logging
from typing import Dict, Optional, Tuple, Union

import numpy as np
import scipy.fft
from numpy.typing import NDArray

from .errors import DivergenceError, KernelOverflowError, ShapeMismatchError
from .kernel import bank_kernels, kernel_jacobians
from .models.gradients import Gradients
from .models.ssm_bank import PARAMETER_NAMES, READOUT_PARAMETERS, STATE_PARAMETERS, SsmBank
from .models.ssm_model import SsmModel
from .models.task import Task
from .models.train_config import TrainConfig
from .models.train_report import TrainReport
from .optim import Adam
from .utils import make_rng

logger = logging.getLogger(__name__)

TaskData = Tuple[
    NDArray[np.float64],
    NDArray[np.float64],
    NDArray[np.float64],
    NDArray[np.float64],
]


def _as_bank(model: Union[SsmModel, SsmBank]):
    return SsmBank.from_model(model) if isinstance(model, SsmModel) else model


def _copy_targets(X: NDArray[np.float64], lag: int):
    Y = np.zeros_like(X)
    Y[:, lag:] = X[:, : X.shape[1] - lag]

    return Y


def make_task_data(task: Task) -> TaskData:
    """
    Standard normal training and test inputs with their labels.

    Target tasks give `X` of shape `(N, L)` and final-output labels
    `y* = sum_l rho*_l x_{L-1-l}` of shape `(N,)`. The copying task gives
    `X` of shape `(N, L, d)` and labels of the same shape holding the input
    delayed by `lag` steps; positions before `lag` are zero and not scored.
    """
    train_seed, test_seed = np.random.SeedSequence(task.seed).spawn(2)

    def draw(seed: np.random.SeedSequence, n: int):
        rng = make_rng(seed)

        if task.is_sequence:
            X = rng.standard_normal((n, task.L, task.d))

            return X, _copy_targets(X, task.copy_lag)

        X = rng.standard_normal((n, task.L))

        return X, X[:, ::-1] @ task.target_memory

    X_train, Y_train = draw(train_seed, task.n_train)
    X_test, Y_test = draw(test_seed, task.n_test)

    return X_train, Y_train, X_test, Y_test


def _input_spectrum(X: NDArray[np.float64]) -> NDArray[np.complex128]:
    return scipy.fft.rfft(X, 2 * X.shape[1], axis=1, workers=-1)


def _sequence_outputs(
    kernels: NDArray[np.float64],
    X: NDArray[np.float64],
    X_hat: Optional[NDArray[np.complex128]] = None,
) -> NDArray[np.float64]:
    """
    Causal convolution of every channel of `X` (N, L, d) with its kernel (d, L).
    `X_hat` is the zero-padded spectrum of `X` when the caller already has it.
    """
    L = X.shape[1]
    size = 2 * L

    if X_hat is None:
        X_hat = _input_spectrum(X)

    spectrum = X_hat * scipy.fft.rfft(kernels.T, size, axis=0)[None]

    return scipy.fft.irfft(spectrum, size, axis=1, workers=-1)[:, :L]


def _check_batch(bank: SsmBank, X: NDArray[np.float64], lag: Optional[int]):
    if lag is None:
        if X.ndim != 2 or bank.d != 1:
            raise ShapeMismatchError(
                f"Final-output loss needs X of shape (N, L) and one channel, "
                f"got X {X.shape} and {bank.d} channels"
            )

    elif X.ndim != 3 or X.shape[2] != bank.d:
        raise ShapeMismatchError(
            f"Sequence loss needs X of shape (N, L, {bank.d}), got {X.shape}"
        )


def loss(
    model: Union[SsmModel, SsmBank],
    X: NDArray[np.float64],
    Y: NDArray[np.float64],
    lag: Optional[int] = None,
) -> float:
    """
    Mean squared error of the final outputs, or with `lag` of the per-step
    outputs at positions `t >= lag`.
    """
    bank = _as_bank(model)
    _check_batch(bank, X, lag)

    kernels = bank_kernels(bank, X.shape[1])

    if lag is None:
        return float(np.mean((X[:, ::-1] @ kernels[0] - Y) ** 2))

    outputs = _sequence_outputs(kernels, X)

    return float(np.mean((outputs[:, lag:] - Y[:, lag:]) ** 2))


def gradients(
    model: Union[SsmModel, SsmBank],
    X: NDArray[np.float64],
    Y: NDArray[np.float64],
    lag: Optional[int] = None,
):
    """
    Exact gradients of `loss` with respect to every parameter.

    The loss depends on the parameters only through the kernels `rho`, so the
    kernel gradient `G = dloss/drho` is formed first and then pulled back
    through the derivatives of the closed-form kernel.

    Raises:
        DivergenceError: The loss or a gradient is not finite.
    """
    bank = _as_bank(model)
    _check_batch(bank, X, lag)

    L = X.shape[1]
    basis, d_w, d_delta = kernel_jacobians(bank, L)
    kernels = np.einsum("dm,dml->dl", bank.c, basis).real

    if lag is None:
        residual = X[:, ::-1] @ kernels[0] - Y
        value = float(np.mean(residual**2))
        G = (2.0 / X.shape[0]) * (residual @ X[:, ::-1])[None, :]

    else:
        X_hat = _input_spectrum(X)
        outputs = _sequence_outputs(kernels, X, X_hat)
        residual = outputs - Y
        residual[:, :lag] = 0.0
        count = X.shape[0] * (L - lag) * bank.d
        value = float(np.sum(residual**2) / count)

        # G_{h,k} = (2 / count) sum_{n,t} r_{n,t,h} x_{n,t-k,h}, summed over n
        # on the spectra so only one (L, d) inverse transform remains.
        cross = np.sum(_input_spectrum(residual) * np.conj(X_hat), axis=0)
        correlation = scipy.fft.irfft(cross, 2 * L, axis=0)[:L]
        G = (2.0 / count) * correlation.T

    c = bank.c[..., None]
    c_d_w = c * d_w

    result = Gradients(
        delta=np.einsum("dl,dml->d", G, (c * d_delta).real),
        real=np.einsum("dl,dml->dm", G, c_d_w.real),
        imag=-np.einsum("dl,dml->dm", G, c_d_w.imag),
        c_real=np.einsum("dl,dml->dm", G, basis.real),
        c_imag=-np.einsum("dl,dml->dm", G, basis.imag),
        loss=value,
    )

    if not result.is_finite:
        raise DivergenceError(f"Non-finite loss or gradient (loss = {value})")

    return result


def _is_usable(params: Dict[str, NDArray[np.float64]]):
    return all(np.all(np.isfinite(params[name])) for name in PARAMETER_NAMES) and bool(
        np.all(params["delta"] > 0)
    )


def train(
    model: Union[SsmModel, SsmBank],
    task: Task,
    config: TrainConfig = TrainConfig(),
):
    """
    Adam on the task loss, with the timescale and nodes on `lr_state` and the
    read-out on `lr_readout`. Both losses are measured on the full training
    and test sets every `eval_every` steps and after the last step.

    Nothing constrains the parameters: real parts may turn positive. A step
    that produces a non-finite value or a non-positive timescale stops the
    run, which is then reported as diverged with the last good parameters.
    """
    bank = _as_bank(model)
    X_train, Y_train, X_test, Y_test = make_task_data(task)
    lag = task.copy_lag if task.is_sequence else None

    _check_batch(bank, X_train, lag)

    params = bank.parameters()
    optimizer = Adam(
        [(config.lr_state, STATE_PARAMETERS), (config.lr_readout, READOUT_PARAMETERS)],
        betas=config.betas,
        eps=config.eps,
    )
    rng = make_rng(config.seed)

    loss_train = []
    loss_test = []
    eval_steps = []

    def evaluate(step: int):
        current = SsmBank.from_parameters(params)

        try:
            values = (
                loss(current, X_train, Y_train, lag),
                loss(current, X_test, Y_test, lag),
            )

        except KernelOverflowError:
            values = (float("inf"), float("inf"))

        loss_train.append(values[0])
        loss_test.append(values[1])
        eval_steps.append(step)

        logger.info(
            "step=%d train=%.6g test=%.6g",
            step,
            loss_train[-1],
            loss_test[-1],
        )

        return np.isfinite(loss_train[-1]) and np.isfinite(loss_test[-1])

    diverged = not evaluate(0)
    divergence_step: Optional[int] = 0 if diverged else None
    n = X_train.shape[0]
    replace = config.batch_size > n

    for step in range(1, config.steps + 1):
        if diverged:
            break

        indices = rng.choice(n, size=config.batch_size, replace=replace)
        last = {name: value.copy() for name, value in params.items()}
        grads: Optional[Gradients]

        try:
            grads = gradients(
                SsmBank.from_parameters(params),
                X_train[indices],
                Y_train[indices],
                lag,
            )

        except (KernelOverflowError, DivergenceError):
            grads = None

        if grads is not None:
            optimizer.step(params, grads.as_dict())

        if grads is None or not _is_usable(params):
            logger.warning("Training diverged at step %d", step)

            params = last
            diverged = True
            divergence_step = step
            break

        if step % config.eval_every == 0 or step == config.steps:
            if not evaluate(step):
                logger.warning("Non-finite loss at step %d", step)

                diverged = True
                divergence_step = step

    final = SsmBank.from_parameters(params)

    try:
        kernel = bank_kernels(final, task.L)

    except KernelOverflowError:
        kernel = np.full((final.d, task.L), np.nan)

    return TrainReport(
        loss_train=loss_train,
        loss_test=loss_test,
        eval_steps=eval_steps,
        kernel=kernel,
        re_nonneg_ratio=final.re_nonneg_ratio,
        bank=final,
        diverged=diverged,
        divergence_step=divergence_step,
    )
