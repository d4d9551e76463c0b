"""
Copyright 2024 Google LLC

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""
"""One-variable profile functions
   2024 Google
"""
# Standard library imports
from dataclasses import dataclass
from typing import Callable, Tuple
import logging
import toml
import pkgutil

# Third-party imports
import numpy as np

# Local imports
from .exceptions import InputValidationError

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])

MAX_ORDER = 4


def _output(values):
    values = np.asarray(values, dtype=float)
    return values if values.ndim else float(values)


@dataclass(frozen=True)
class ProfileFunction:
    """Scalar function of one variable on a closed interval.

    Attributes:
        domain: The interval (a, b).
        func: Vectorized callable returning the value.
        derivatives: Analytic derivatives, derivatives[k] being order k + 1.
            Orders beyond the tuple fall back to central differences.
        h_fd: Step of the central difference fallback.
        name: Label used in logs and reports.
    """

    domain: Tuple[float, float]
    func: Callable
    derivatives: Tuple[Callable, ...] = ()
    h_fd: float = constants["ORACLE"]["H_FD"]
    name: str = "profile"

    def __call__(self, x):
        return self.value(x)

    def value(self, x):
        return _output(self.func(np.asarray(x, dtype=float)))

    def has_analytic(self, order):
        return 1 <= order <= len(self.derivatives)

    def derivative(self, x, order=1):
        """Derivative of the given order at x.

        Args:
            x (float | numpy.ndarray): Evaluation points.
            order (int): Derivative order between 0 and 4.

        Returns:
            float | numpy.ndarray: The derivative values.

        Raises:
            InputValidationError: If the order is not supported.
        """
        if order < 0 or order > MAX_ORDER:
            raise InputValidationError(
                f"Derivative order {order} is not supported, use 0 to {MAX_ORDER}."
            )
        if order == 0:
            return self.value(x)
        if self.has_analytic(order):
            return _output(self.derivatives[order - 1](np.asarray(x, dtype=float)))
        return self.finite_difference(x, order)

    def finite_difference(self, x, order, step=None):
        """Central difference estimate of the derivative of the given order."""
        h = self.h_fd if step is None else step
        x = np.asarray(x, dtype=float)
        f = self.value
        if order == 1:
            result = (f(x + h) - f(x - h)) / (2.0 * h)
        elif order == 2:
            result = (f(x + h) - 2.0 * f(x) + f(x - h)) / h**2
        elif order == 3:
            result = (
                f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)
            ) / (2.0 * h**3)
        elif order == 4:
            result = (
                f(x + 2.0 * h)
                - 4.0 * f(x + h)
                + 6.0 * f(x)
                - 4.0 * f(x - h)
                + f(x - 2.0 * h)
            ) / h**4
        else:
            raise InputValidationError(
                f"Finite difference order {order} is not supported, use 1 to {MAX_ORDER}."
            )
        return _output(result)

    def even_derivatives_at(self, x0, step=None):
        """Symmetric difference estimates of the 2nd and 4th derivative at x0.

        The profile is evaluated on both sides of x0, so at a tip it must carry
        its odd extension.
        """
        if step is None:
            step = constants["ETA"]["EVEN_DERIVATIVE_STEP"]
        second = self.finite_difference(x0, 2, step)
        fourth = self.finite_difference(x0, 4, step)
        return float(second), float(fourth)

    def derivative_consistency(self, grid):
        """Max deviation between analytic derivatives and central differences."""
        grid = np.asarray(grid, dtype=float)
        deviations = {}
        for order in range(1, len(self.derivatives) + 1):
            analytic = np.asarray(self.derivative(grid, order))
            numeric = np.asarray(self.finite_difference(grid, order))
            deviations[order] = float(np.max(np.abs(analytic - numeric)))
        return deviations

    def require_finite(self, n=1024):
        """Raises InputValidationError unless the profile is finite on its domain."""
        a, b = self.domain
        values = np.asarray(self.value(np.linspace(a, b, n)))
        if not np.all(np.isfinite(values)):
            raise InputValidationError(f"Profile {self.name} is not finite on [{a}, {b}].")
        return True

    def sum(self, other, name=None):
        """Pointwise sum with another profile, analytic orders kept where both have them."""
        shared = min(len(self.derivatives), len(other.derivatives))
        derivatives = tuple(
            (lambda x, k=k: self.derivatives[k](x) + other.derivatives[k](x))
            for k in range(shared)
        )
        return ProfileFunction(
            domain=self.domain,
            func=lambda x: self.func(x) + other.func(x),
            derivatives=derivatives,
            h_fd=self.h_fd,
            name=name or f"{self.name}+{other.name}",
        )

    def scaled(self, factor, name=None):
        """Profile multiplied by a constant."""
        return ProfileFunction(
            domain=self.domain,
            func=lambda x: factor * self.func(x),
            derivatives=tuple(
                (lambda x, d=d: factor * d(x)) for d in self.derivatives
            ),
            h_fd=self.h_fd,
            name=name or f"{factor}*{self.name}",
        )


def sine_profile(scale=1.0, frequency=1.0, length=None):
    """Profile sin(frequency * x) / scale with analytic derivatives to order 4."""
    k = frequency
    c = 1.0 / scale
    if length is None:
        length = np.pi / k
    return ProfileFunction(
        domain=(0.0, length),
        func=lambda x: c * np.sin(k * x),
        derivatives=(
            lambda x: c * k * np.cos(k * x),
            lambda x: -c * k**2 * np.sin(k * x),
            lambda x: -c * k**3 * np.cos(k * x),
            lambda x: c * k**4 * np.sin(k * x),
        ),
        name=f"sin({k}x)/{scale}",
    )


def cosh_profile(length=2.0):
    """Profile cosh(x), the warp of constant curvature -1."""
    return ProfileFunction(
        domain=(0.0, length),
        func=np.cosh,
        derivatives=(np.sinh, np.cosh, np.sinh, np.cosh),
        name="cosh",
    )


def linear_profile(slope=1.0, length=1.0):
    """Profile slope * x, the flat cone."""
    return ProfileFunction(
        domain=(0.0, length),
        func=lambda x: slope * x,
        derivatives=(
            lambda x: slope * np.ones_like(x),
            lambda x: np.zeros_like(x),
            lambda x: np.zeros_like(x),
            lambda x: np.zeros_like(x),
        ),
        name=f"{slope}x",
    )


def constant_profile(value=1.0, length=1.0):
    return ProfileFunction(
        domain=(0.0, length),
        func=lambda x: value * np.ones_like(x),
        derivatives=tuple(lambda x: np.zeros_like(x) for _ in range(MAX_ORDER)),
        name=f"const({value})",
    )


def zero_profile(length=np.pi / 2.0):
    return constant_profile(0.0, length)
