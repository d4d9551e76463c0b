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
"""Coordinate chart metrics and tangent planes
   2024 Google
"""
# Standard library imports
from dataclasses import dataclass, field
from typing import Callable, Tuple
import logging
import toml
import pkgutil

# Third-party imports
import numpy as np

# Local imports
from .exceptions import ChartBoundaryError, InputValidationError
from .utils import interior_grid

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])


@dataclass(frozen=True)
class ChartMetric:
    """Symmetric positive definite coefficient field over a rectangular chart.

    Attributes:
        coords: Coordinate names, 2 or 3 of them.
        bounds: (lower, upper) per coordinate.
        g: Callable mapping a point (numpy array of length dim) to a
            dim x dim matrix.
        h_fd: Finite difference step of the curvature oracle.
        richardson: Combine the steps h_fd and h_fd / 2, cancelling the h^2
            error term of the stencils.
        periodic: Per coordinate, whether the chart wraps around.
        name: Label used in logs and reports.
    """

    coords: Tuple[str, ...]
    bounds: Tuple[Tuple[float, float], ...]
    g: Callable
    h_fd: float = constants["ORACLE"]["H_FD"]
    periodic: Tuple[bool, ...] = field(default=())
    name: str = "chart"
    richardson: bool = False

    def __post_init__(self):
        if len(self.coords) not in (2, 3):
            raise InputValidationError(
                f"Chart {self.name} has {len(self.coords)} coordinates, use 2 or 3."
            )
        if len(self.bounds) != len(self.coords):
            raise InputValidationError(
                f"Chart {self.name} needs one (lower, upper) pair per coordinate."
            )
        if not self.periodic:
            object.__setattr__(self, "periodic", (False,) * len(self.coords))

    @property
    def dim(self):
        return len(self.coords)

    def index(self, coord):
        return self.coords.index(coord)

    def metric(self, point):
        """Coefficient matrix g_ij at point."""
        return np.asarray(self.g(np.asarray(point, dtype=float)), dtype=float)

    def require_interior(self, point, margin=None):
        """Raises ChartBoundaryError if point is within margin of a non periodic edge.

        The default margin is two finite difference steps, the reach of the
        mixed second derivative stencil.
        """
        if margin is None:
            margin = 2.0 * self.h_fd
        point = np.asarray(point, dtype=float)
        if point.shape != (self.dim,):
            raise InputValidationError(
                f"Point {point} does not have the {self.dim} coordinates of chart {self.name}."
            )
        for value, (lower, upper), name, wraps in zip(
            point, self.bounds, self.coords, self.periodic
        ):
            if wraps:
                continue
            if value - lower < margin or upper - value < margin:
                raise ChartBoundaryError(
                    f"Point {name}={value} is within {margin} of the boundary "
                    f"[{lower}, {upper}] of chart {self.name}."
                )
        return point

    def grid(self, n, margin=None):
        """Uniform interior sample grid with n points per coordinate.

        Returns:
            numpy.ndarray: Array of shape (n**dim, dim).
        """
        if margin is None:
            margin = 3.0 * self.h_fd
        axes = []
        for (lower, upper), wraps in zip(self.bounds, self.periodic):
            if wraps:
                axes.append(interior_grid(lower, upper, n))
            else:
                axes.append(np.linspace(lower + margin, upper - margin, n))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def check_positive_definite(self, points):
        """Smallest eigenvalue over the points and the worst asymmetry.

        Raises:
            InputValidationError: If some coefficient matrix is not positive definite.
        """
        smallest = np.inf
        asymmetry = 0.0
        for point in np.atleast_2d(points):
            g = self.metric(point)
            asymmetry = max(asymmetry, float(np.max(np.abs(g - g.T))))
            smallest = min(smallest, float(np.linalg.eigvalsh(0.5 * (g + g.T))[0]))
        if smallest <= 0.0:
            raise InputValidationError(
                f"Chart {self.name} is not positive definite, smallest eigenvalue {smallest}."
            )
        return smallest, asymmetry

    def with_metric(self, g, name=None):
        """Same chart with another coefficient field."""
        return ChartMetric(
            coords=self.coords,
            bounds=self.bounds,
            g=g,
            h_fd=self.h_fd,
            periodic=self.periodic,
            name=name or self.name,
            richardson=self.richardson,
        )


@dataclass(frozen=True)
class PlaneSection:
    """Tangent plane at a chart point spanned by coordinate vectors u and v."""

    point: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def gram(self, g):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        return u @ g @ u, u @ g @ v, v @ g @ v

    def area_squared(self, g):
        uu, uv, vv = self.gram(g)
        return uu * vv - uv**2


def euclidean_chart(dim=2, half_width=1.0):
    """Flat chart with identity coefficients on a centred cube."""
    coords = ("x", "y", "z")[:dim]
    return ChartMetric(
        coords=coords,
        bounds=((-half_width, half_width),) * dim,
        g=lambda p: np.eye(dim),
        name=f"euclidean{dim}",
    )


def polar_chart(r_max=2.0):
    """Flat plane in polar coordinates dr^2 + r^2 dtheta^2."""
    return ChartMetric(
        coords=("r", "theta"),
        bounds=((0.0, r_max), (0.0, 2.0 * np.pi)),
        g=lambda p: np.diag([1.0, p[0] ** 2]),
        periodic=(False, True),
        name="polar",
    )


def warped_chart(profile, name=None):
    """Chart dr^2 + f(r)^2 dtheta^2 of a surface of revolution.

    Args:
        profile (ProfileFunction): The warp f on its domain.
        name (str, optional): Chart label.

    Returns:
        ChartMetric: Two dimensional chart with periodic angle.
    """
    a, b = profile.domain
    return ChartMetric(
        coords=("r", "theta"),
        bounds=((a, b), (0.0, 2.0 * np.pi)),
        g=lambda p: np.diag([1.0, float(profile.value(p[0])) ** 2]),
        periodic=(False, True),
        name=name or f"warped[{profile.name}]",
    )


def round_sphere_chart(dim=2):
    """Round unit sphere in geodesic polar coordinates."""
    if dim == 2:
        return ChartMetric(
            coords=("r", "theta"),
            bounds=((0.0, np.pi), (0.0, 2.0 * np.pi)),
            g=lambda p: np.diag([1.0, np.sin(p[0]) ** 2]),
            periodic=(False, True),
            name="round_s2",
        )
    return ChartMetric(
        coords=("r", "theta", "alpha"),
        bounds=((0.0, np.pi), (0.0, np.pi), (0.0, 2.0 * np.pi)),
        g=lambda p: np.diag(
            [1.0, np.sin(p[0]) ** 2, (np.sin(p[0]) * np.sin(p[1])) ** 2]
        ),
        periodic=(False, False, True),
        name="round_s3",
    )


def doubly_warped_chart(f, psi, s_bounds, t_bounds, name="doubly_warped"):
    """Chart f(s,t)^2 ds^2 + dt^2 + psi(s,t)^2 dphi^2 in coordinates (s, t, phi).

    Args:
        f (Callable): Section warp f(s, t).
        psi (Callable): Killing length psi(s, t).
        s_bounds (tuple): Range of s.
        t_bounds (tuple): Range of t.
        name (str): Chart label.
    """
    return ChartMetric(
        coords=("s", "t", "phi"),
        bounds=(tuple(s_bounds), tuple(t_bounds), (0.0, 2.0 * np.pi)),
        g=lambda p: np.diag(
            [float(f(p[0], p[1])) ** 2, 1.0, float(psi(p[0], p[1])) ** 2]
        ),
        periodic=(False, False, True),
        name=name,
    )


def circle_invariant_chart(sigma, phi, name=None):
    """Three dimensional chart sigma + phi^2 dalpha^2 over a 2-dim section chart."""

    def g(p):
        block = np.zeros((3, 3))
        block[:2, :2] = sigma.metric(p[:2])
        block[2, 2] = float(phi(p[:2])) ** 2
        return block

    return ChartMetric(
        coords=tuple(sigma.coords) + ("alpha",),
        bounds=tuple(sigma.bounds) + ((0.0, 2.0 * np.pi),),
        g=g,
        h_fd=sigma.h_fd,
        periodic=tuple(sigma.periodic) + (True,),
        name=name or f"{sigma.name}+killing",
    )
