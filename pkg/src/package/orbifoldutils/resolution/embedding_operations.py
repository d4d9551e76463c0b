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
"""Embedding of rotational spheres into S^3, Beltrami maps and cone smoothing
   2024 Google
"""
# Standard library imports
from dataclasses import dataclass
from typing import Optional
import logging
import math
import toml
import pkgutil

# Third-party imports
import numpy as np
import pandas as pd
from scipy.interpolate import CubicHermiteSpline
from scipy.linalg import null_space

# Local imports
from .exceptions import ChartBoundaryError, InputValidationError, RigidityCaseError
from .profiles import ProfileFunction
from .utils import gauss_legendre, smoothstep

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])


@dataclass(frozen=True)
class RevolutionMetric:
    """Sphere dr^2 + R(r)^2 dtheta^2 with tips at r = 0 and r = d."""

    d: float
    R: ProfileFunction
    grid_size: int = 2048

    def __post_init__(self):
        if not 0.0 < self.d < np.pi + 1e-12:
            raise InputValidationError(f"Tip distance d={self.d} must lie in (0, pi).")
        tol = constants["EMBEDDING"]["PROFILE_BOUND_TOL"]
        ends = np.abs([self.R.value(0.0), self.R.value(self.d)])
        if np.max(ends) > tol:
            raise InputValidationError(f"Profile {self.R.name} does not vanish at the tips: {ends}.")
        slope = float(self.R.derivative(0.0, 1))
        if abs(slope - 1.0) > constants["ETA"]["SLOPE_TOL"]:
            raise InputValidationError(f"Profile {self.R.name} has slope {slope} at r = 0, expected 1.")

    def grid(self, n=None):
        n = self.grid_size if n is None else n
        return np.linspace(0.0, self.d, n + 1)

    def interior(self, n=None):
        return self.grid(n)[1:-1]

    def curvature_margin(self, n=None):
        """min(-R''/R) - 1 over the open interval."""
        r = self.interior(n)
        return float(np.min(-np.asarray(self.R.derivative(r, 2)) / np.asarray(self.R.value(r))) - 1.0)

    def energy_excess(self, n=None):
        """max(R'^2 + R^2) - 1 over the closed interval."""
        r = self.grid(n)
        return float(np.max(np.asarray(self.R.derivative(r, 1)) ** 2 + np.asarray(self.R.value(r)) ** 2) - 1.0)

    def radicand(self, r):
        r = np.asarray(r, dtype=float)
        radius = np.asarray(self.R.value(r))
        return 1.0 - radius**2 - np.asarray(self.R.derivative(r, 1)) ** 2


@dataclass(frozen=True)
class EmbeddingCurve:
    """Longitude v(r) of the embedding, with the RK4 samples it was built from."""

    metric: RevolutionMetric
    v: ProfileFunction
    step: float
    nodes: np.ndarray
    values: np.ndarray

    def table(self):
        """Table of (r, R, v, pullback residual) at the integration nodes."""
        residual = pullback_residual(self.metric, self.v, self.nodes)
        return pd.DataFrame(
            {
                "r": self.nodes,
                "R": self.metric.R.value(self.nodes),
                "v": self.values,
                "pullback_residual": residual,
            }
        )

    def point(self, r, theta):
        """u(r, theta) in S^3 of flat 4-space."""
        radius = np.asarray(self.metric.R.value(r), dtype=float)
        normal = np.sqrt(np.clip(1.0 - radius**2, 0.0, None))
        v = np.asarray(self.v.value(r), dtype=float)
        return np.stack(
            [normal * np.cos(v), normal * np.sin(v), radius * np.cos(theta), radius * np.sin(theta)],
            axis=-1,
        )


def pullback_residual(metric: RevolutionMetric, v: ProfileFunction, r):
    """v'^2 (1 - R^2) + R'^2 / (1 - R^2) - 1 at r."""
    radius = np.asarray(metric.R.value(r))
    slope = np.asarray(metric.R.derivative(r, 1))
    dv = np.asarray(v.derivative(r, 1))
    normal = 1.0 - radius**2
    return dv**2 * normal + slope**2 / normal - 1.0


def _longitude_rate(metric: RevolutionMetric, r):
    clamp = constants["EMBEDDING"]["RADICAND_CLAMP"]
    radicand = np.asarray(metric.radicand(r), dtype=float)
    if np.any(radicand < -clamp):
        worst = float(np.min(radicand))
        raise InputValidationError(
            f"1 - R^2 - R'^2 = {worst} is negative for {metric.R.name}, the profile violates R'^2 + R^2 <= 1."
        )
    radius = np.asarray(metric.R.value(r), dtype=float)
    return np.sqrt(np.clip(radicand, 0.0, None)) / (1.0 - radius**2)


def beltrami(center, q):
    """Central projection of the open hemisphere around center onto the plane <x, center> = 1.

    Args:
        center (array-like): Unit vector of flat space.
        q (array-like): Unit vectors, one per row, with <q, center> > 0.

    Returns:
        numpy.ndarray: Points of the affine tangent plane at center.

    Raises:
        ChartBoundaryError: If some q is outside the open hemisphere.
    """
    center = np.asarray(center, dtype=float)
    q = np.asarray(q, dtype=float)
    height = q @ center
    if np.any(height <= 0.0):
        raise ChartBoundaryError(f"Points with <q, v> = {np.min(height)} are outside the open hemisphere.")
    return q / np.asarray(height)[..., None]


def beltrami_inverse(center, x):
    """Radial projection of points of the plane <x, center> = 1 back to the sphere."""
    center = np.asarray(center, dtype=float)
    x = np.asarray(x, dtype=float)
    offset = np.abs(x @ center - 1.0)
    if np.any(offset > constants["EMBEDDING"]["ROUND_TRIP_TOL"] * 1e3):
        raise ChartBoundaryError(f"Points are {np.max(offset)} off the tangent plane.")
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


@dataclass(frozen=True)
class ConeProfile:
    """Graph x -> |x| slope(x/|x|) of a convex cone over flat 3-space."""

    slopes: np.ndarray
    mean_slope: float
    spread: float
    radial_deviation: float
    profile: ProfileFunction


def cone_profile(slope, length=1.0):
    return ProfileFunction(
        domain=(0.0, length),
        func=lambda rho: slope * np.asarray(rho, dtype=float),
        derivatives=(lambda rho: slope * np.ones_like(rho), lambda rho: np.zeros_like(rho)),
        name=f"cone[{slope}]",
    )


class EmbeddingOperations:
    """Isometric embeddings into S^3 and the smoothing of convex cones."""

    def __init__(self, client):
        """Initialize with reference to main client."""
        self._client = client

    def revolution_metric(self, R: ProfileFunction, d=None):
        """Checks the curvature >= 1 hypotheses of a rotational sphere.

        Args:
            R (ProfileFunction): Warp vanishing at both ends of its domain.
            d (float, optional): Tip distance, the end of the domain by default.

        Returns:
            RevolutionMetric: The validated metric.

        Raises:
            InputValidationError: If curvature or R'^2 + R^2 <= 1 fail on the grid.
        """
        try:
            metric = RevolutionMetric(d=R.domain[1] if d is None else d, R=R)
            excess = metric.energy_excess()
            if excess > constants["EMBEDDING"]["PROFILE_BOUND_TOL"]:
                raise InputValidationError(f"R'^2 + R^2 exceeds 1 by {excess} for {R.name}.")
            margin = metric.curvature_margin()
            if margin < -self._client._client_options._tol_oracle:
                raise InputValidationError(f"Curvature of {R.name} drops {-margin} below 1.")
            logger.info(f"Revolution metric {R.name}: d={metric.d}, curvature margin {margin}, energy excess {excess}.")
            return metric
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def solve_embedding_ode(self, metric: RevolutionMetric, step=None):
        """Integrates v' = sqrt(1 - R^2 - R'^2) / (1 - R^2) from v(0) = 0 with classical RK4.

        The radicand is clamped at 0 within RADICAND_CLAMP below it, which
        covers the tips where R' = +-1.

        Returns:
            EmbeddingCurve: The longitude function, a cubic Hermite interpolant
                of the RK4 samples with slopes from the integrand.

        Raises:
            RigidityCaseError: If sup R >= 1, the case d = pi of Cheng's rigidity
                theorem where the sphere is round and the map degenerates.
        """
        try:
            if step is None:
                step = self._client._client_options._ode_step
            sup = float(np.max(np.asarray(metric.R.value(metric.grid()))))
            if sup >= 1.0:
                raise RigidityCaseError(
                    f"sup R = {sup} >= 1 for {metric.R.name}: by Cheng's maximal diameter theorem the "
                    "sphere is round with d = pi, which is not embedded by this construction."
                )
            count = max(int(math.ceil(metric.d / step)), 2)
            nodes = np.linspace(0.0, metric.d, count + 1)
            h = nodes[1] - nodes[0]
            left = _longitude_rate(metric, nodes)
            middle = _longitude_rate(metric, nodes[:-1] + 0.5 * h)
            increments = h / 6.0 * (left[:-1] + 4.0 * middle + left[1:])
            values = np.concatenate([[0.0], np.cumsum(increments)])
            spline = CubicHermiteSpline(nodes, values, left)
            first = spline.derivative()
            second = first.derivative()
            v = ProfileFunction(
                domain=(0.0, metric.d),
                func=lambda r: spline(r),
                derivatives=(lambda r: first(r), lambda r: second(r)),
                name=f"v[{metric.R.name}]",
            )
            logger.info(f"Embedding of {metric.R.name}: v(d)={values[-1]} with {count} RK4 steps.")
            return EmbeddingCurve(metric=metric, v=v, step=h, nodes=nodes, values=values)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def pullback_check(self, metric: RevolutionMetric, curve: EmbeddingCurve, n=None):
        """Largest |v'^2 (1 - R^2) + R'^2/(1 - R^2) - 1| on the grid, tips included."""
        r = metric.grid(n)
        return float(np.max(np.abs(pullback_residual(metric, curve.v, r))))

    def integration_order(self, metric: RevolutionMetric, exact, steps):
        """Observed RK4 error of v against a closed form for a ladder of steps.

        Returns:
            pandas.DataFrame: Columns step, error and ratio to the next step.
        """
        errors = []
        for step in steps:
            curve = self.solve_embedding_ode(metric, step)
            errors.append(float(np.max(np.abs(curve.values - np.asarray(exact(curve.nodes))))))
        ratios = [errors[k] / errors[k + 1] if errors[k + 1] > 0.0 else np.inf for k in range(len(errors) - 1)]
        return pd.DataFrame({"step": list(steps), "error": errors, "ratio": ratios + [np.nan]})

    def immersion_check(self, curve: EmbeddingCurve, n=256, angles=8):
        """Smallest singular value of the Jacobian of u on an interior grid.

        Embeddedness is not checked, only that u has rank 2 away from the tips.
        """
        r = curve.metric.interior(n)
        h = 1e-6
        smallest = np.inf
        for theta in 2.0 * np.pi * np.arange(angles) / angles:
            du_dr = (curve.point(r + h, theta) - curve.point(r - h, theta)) / (2.0 * h)
            du_dtheta = (curve.point(r, theta + h) - curve.point(r, theta - h)) / (2.0 * h)
            jac = np.stack([du_dr, du_dtheta], axis=-1)
            singular = np.linalg.svd(jac, compute_uv=False)
            smallest = min(smallest, float(np.min(singular[:, -1])))
        report = {"min_singular_value": smallest, "immersion": smallest > 0.0, "embedded": None}
        logger.info(f"Immersion check of {curve.v.name}: {report}.")
        return report

    def beltrami(self, center, q):
        return beltrami(center, q)

    def beltrami_inverse(self, center, x):
        return beltrami_inverse(center, x)

    def require_convex(self, profile: ProfileFunction, upper, n=2048):
        """Raises InputValidationError unless the radial profile is convex and non-decreasing."""
        rho = np.linspace(0.0, upper, n + 1)[1:]
        slope = np.asarray(profile.derivative(rho, 1))
        # slopes may come from central differences
        tol = 1e3 * constants["EMBEDDING"]["CONVEXITY_TOL"] * max(1.0, float(np.max(np.abs(slope))))
        if slope[0] < -tol or np.any(np.diff(slope) < -tol):
            raise InputValidationError(f"Radial profile {profile.name} is not convex on [0, {upper}].")
        return True

    def convex_mollify(self, profile: ProfileFunction, n, r, upper=None, nodes=None):
        """Blend j_r(|x|) (f * sigma_n)(x) + (1 - j_r(|x|)) f(x) of a radial convex f.

        The convolution with the radial mollifier sigma_n of support 1/n is
        a weighted sum of spherical averages of f over spheres of radius s
        around x, which for f(x) = F(|x|) at |x| = rho equal
        int_{|rho - s|}^{rho + s} F(z) z dz / (2 rho s).

        Args:
            profile (ProfileFunction): Radial profile F of f(x) = F(|x|).
            n (float): Mollifier index, support radius 1/n.
            r (float): Blend radius, f is kept for |x| >= r.
            upper (float, optional): Largest radius of interest.
            nodes (int, optional): Radial quadrature nodes of the mollifier.

        Returns:
            ProfileFunction: Radial profile of the blend.
        """
        try:
            if n <= 0.0 or r <= 0.0:
                raise InputValidationError(f"Mollifier index n={n} and radius r={r} must be positive.")
            if upper is None:
                upper = profile.domain[1]
            if nodes is None:
                nodes = constants["EMBEDDING"]["MOLLIFIER_NODES"]
            self.require_convex(profile, upper)
            s, w = gauss_legendre(nodes, 0.0, 1.0 / n)
            u = s * n
            weights = w * s**2 * np.exp(-1.0 / (1.0 - u**2))
            weights = weights / np.sum(weights)
            z, zw = gauss_legendre(16)

            def spherical_average(rho):
                rho = rho[:, None]
                half = np.minimum(rho, s[None, :])
                mid = np.abs(rho - s[None, :]) + half
                points = mid[..., None] + half[..., None] * z
                integral = half * np.sum(zw * np.asarray(profile.value(points)) * points, axis=-1)
                safe = np.where(rho > 0.0, rho, 1.0)
                origin = np.broadcast_to(np.asarray(profile.value(s))[None, :], integral.shape)
                return np.where(rho > 0.0, integral / (2.0 * safe * s[None, :]), origin)

            def value(rho):
                shape = np.shape(rho)
                flat = np.atleast_1d(np.asarray(rho, dtype=float)).ravel()
                j = 1.0 - np.atleast_1d(smoothstep((flat - 0.5 * r) / (0.5 * r)))
                blended = np.array(profile.value(flat), dtype=float, ndmin=1)
                live = j > 0.0
                if np.any(live):
                    mollified = spherical_average(flat[live]) @ weights
                    blended[live] = j[live] * mollified + (1.0 - j[live]) * blended[live]
                return blended.reshape(shape) if shape else float(blended[0])

            logger.info(f"Mollified {profile.name} with n={n} inside r={r}.")
            return ProfileFunction(domain=(0.0, upper), func=value, name=f"mollified[{profile.name},{n},{r}]")
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def midpoint_convexity(self, profile: ProfileFunction, upper, r=None, trials=100000, seed=None, length=0.02):
        """Largest f(mid) - (f(a) + f(b))/2 over random collinear triples in the ball of radius upper.

        With r given, segments meeting the annulus r/2 <= |x| <= r are skipped.
        """
        rng = self._client._utils.rng(seed)
        directions = rng.normal(size=(trials, 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = (upper - length) * rng.uniform(0.0, 1.0, size=trials) ** (1.0 / 3.0)
        centers = directions * radii[:, None]
        offsets = rng.normal(size=(trials, 3))
        offsets *= length / np.linalg.norm(offsets, axis=1, keepdims=True)
        keep = np.ones(trials, dtype=bool)
        if r is not None:
            keep = (radii + length < 0.5 * r) | (radii - length > r)
        fa, fm, fb = (
            np.asarray(profile.value(np.linalg.norm(x, axis=1))) for x in (centers - offsets, centers, centers + offsets)
        )
        gap = fm - 0.5 * (fa + fb)
        return float(np.max(gap[keep])) if np.any(keep) else -np.inf

    def cone_from_tip(self, link, curve: Optional[EmbeddingCurve] = None, n=128, angles=32):
        """Convex cone over the space of directions at a tip, as a graph over flat space.

        A link given as a weight w in (0, 1] is the circle of length 2 pi w
        of a 2-dim tip, whose cone has slope cot(alpha) with sin(alpha) = w.
        A RevolutionMetric link is embedded into S^3 and projected from its
        area weighted barycenter v: a point q of the link gives the slope
        cot(angle(q, v)) in the direction of its Beltrami image.

        Returns:
            ConeProfile: Slopes per sample, their mean and spread.

        Raises:
            InputValidationError: If the link is not a valid weight or metric.
        """
        try:
            if isinstance(link, RevolutionMetric):
                if curve is None:
                    curve = self.solve_embedding_ode(link)
                r = np.linspace(0.0, link.d, n + 1)
                theta = 2.0 * np.pi * np.arange(angles) / angles
                rr, tt = np.meshgrid(r, theta, indexing="ij")
                points = curve.point(rr.ravel(), tt.ravel())
                trapezoid = np.full(n + 1, link.d / n)
                trapezoid[[0, -1]] *= 0.5
                area = np.repeat(np.abs(np.asarray(link.R.value(r))) * trapezoid, angles)
                barycenter = np.sum(points * area[:, None], axis=0)
                axis = barycenter / np.linalg.norm(barycenter)
                projected = beltrami(axis, points) - axis
                basis = null_space(axis[None, :])
                flat = projected @ basis
                slopes = 1.0 / np.linalg.norm(flat, axis=1)
            else:
                weight = float(link)
                if not 0.0 < weight <= 1.0:
                    raise InputValidationError(f"Tip weight {weight} must lie in (0, 1].")
                slopes = np.array([math.sqrt(max(1.0 / weight**2 - 1.0, 0.0))])
            mean = float(np.mean(slopes))
            profile = cone_profile(mean)
            grid = np.linspace(0.05, 0.5, 10)
            radial = float(np.max(np.abs(np.asarray(profile.value(2.0 * grid)) - 2.0 * np.asarray(profile.value(grid)))))
            report = ConeProfile(
                slopes=slopes,
                mean_slope=mean,
                spread=float(np.max(slopes) - np.min(slopes)),
                radial_deviation=radial,
                profile=profile,
            )
            logger.info(f"Tip cone: mean slope {report.mean_slope}, spread {report.spread}.")
            return report
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e
