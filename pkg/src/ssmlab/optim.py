from typing import Dict, Iterable, Mapping, Tuple

import numpy as np
from numpy.typing import NDArray

from .errors import ValidationError


class Adam:
    """
    Adam over a dictionary of named arrays, with one learning rate per group
    of names. Parameters are updated in place.
    """

    def __init__(
        self,
        groups: Iterable[Tuple[float, Iterable[str]]],
        betas: Tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
    ):
        """
        Args:
            groups: Pairs of a learning rate and the parameter names it applies to.
        """
        self.lr: Dict[str, float] = {}

        for lr, names in groups:
            if not lr > 0:
                raise ValidationError(f"Invalid learning rate: {lr}")

            for name in names:
                self.lr[name] = lr

        if not 0.0 <= betas[0] < 1.0:
            raise ValidationError(f"Invalid beta parameter at index 0: {betas[0]}")

        if not 0.0 <= betas[1] < 1.0:
            raise ValidationError(f"Invalid beta parameter at index 1: {betas[1]}")

        if not eps > 0:
            raise ValidationError(f"Invalid epsilon value: {eps}")

        self.beta1, self.beta2 = betas
        self.eps = eps

        self.m: Dict[str, NDArray[np.float64]] = {}
        self.v: Dict[str, NDArray[np.float64]] = {}
        self.t = 0

    def step(
        self,
        params: Dict[str, NDArray[np.float64]],
        grads: Mapping[str, NDArray[np.float64]],
    ):
        self.t += 1

        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t

        for name, lr in self.lr.items():
            g = grads[name]

            if name not in self.m:
                self.m[name] = np.zeros_like(params[name])
                self.v[name] = np.zeros_like(params[name])

            self.m[name] *= self.beta1
            self.m[name] += (1.0 - self.beta1) * g

            self.v[name] *= self.beta2
            self.v[name] += (1.0 - self.beta2) * (g * g)

            denom = np.sqrt(self.v[name] / bc2) + self.eps
            params[name] -= (lr / bc1) * self.m[name] / denom
