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
"""Orbifold resolution toolkit utility functions
   2024 Google
"""
# Standard library imports
import logging
import os
import toml
import pkgutil

# Third-party imports
import numpy as np
from scipy.special import expit

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])

# Below this distance from 0 or 1 the smoothstep derivatives are below e^-1000.
_FLAT_ZONE = 1e-3


def smoothstep(u):
    """C-infinity step rising from 0 on (-inf, 0] to 1 on [1, inf).

    Built from the bump psi(u) = exp(-1/u) as psi(u) / (psi(u) + psi(1 - u)),
    written as a logistic in 1/u - 1/(1 - u) to stay finite in floating point.
    """
    u = np.asarray(u, dtype=float)
    inner = (u > 0.0) & (u < 1.0)
    safe = np.where(inner, u, 0.5)
    value = expit(1.0 / (1.0 - safe) - 1.0 / safe)
    value = np.where(inner, value, np.where(u >= 1.0, 1.0, 0.0))
    return value if value.ndim else float(value)


def smoothstep_derivatives(u):
    """Returns (S, S', S'') of the smoothstep at u."""
    u = np.asarray(u, dtype=float)
    value = np.asarray(smoothstep(u), dtype=float)
    live = (u > _FLAT_ZONE) & (u < 1.0 - _FLAT_ZONE)
    safe = np.where(live, u, 0.5)
    c = 1.0 / safe**2 + 1.0 / (1.0 - safe) ** 2
    dc = -2.0 / safe**3 + 2.0 / (1.0 - safe) ** 3
    s = np.where(live, value, 0.5)
    first = s * (1.0 - s) * c
    second = first * (1.0 - 2.0 * s) * c + s * (1.0 - s) * dc
    first = np.where(live, first, 0.0)
    second = np.where(live, second, 0.0)
    if value.ndim == 0:
        return float(value), float(first), float(second)
    return value, first, second


def smoothstep_derivative_bounds(samples=20001):
    """Returns (sup S', sup |S''|) sampled on [0, 1]."""
    grid = np.linspace(0.0, 1.0, samples)
    _, first, second = smoothstep_derivatives(grid)
    return float(np.max(first)), float(np.max(np.abs(second)))


def interior_grid(lower, upper, n):
    """Cell-centred grid of n points strictly inside (lower, upper)."""
    step = (upper - lower) / n
    return lower + step * (np.arange(n) + 0.5)


def gauss_legendre(n, lower=-1.0, upper=1.0):
    """Gauss-Legendre nodes and weights mapped to [lower, upper]."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (upper - lower)
    return lower + half * (nodes + 1.0), half * weights


class ResolutionUtils:
    """Utility functions shared by the operation classes."""

    def __init__(self, client):
        """Initialize with reference to main client."""
        self._client = client

    def rng(self, seed=None):
        """Returns a numpy Generator seeded from the client options.

        Args:
            seed (int, optional): Overrides the configured seed.

        Returns:
            numpy.random.Generator: Deterministic generator.
        """
        if seed is None:
            seed = self._client._client_options._seed
        logger.debug(f"Seeding generator with {seed}.")
        return np.random.default_rng(seed)

    def thread_count(self):
        """Worker count for ladder sweeps, read from the environment.

        Returns:
            int: Number of worker threads, at least 1.
        """
        raw = os.environ.get(constants["CLI"]["THREADS_ENV"], "1")
        try:
            count = int(raw)
        except ValueError:
            logger.warning(
                f"Ignoring non-integer {constants['CLI']['THREADS_ENV']}={raw}."
            )
            return 1
        return max(count, 1)
