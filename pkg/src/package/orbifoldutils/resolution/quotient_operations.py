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
"""Weighted circle quotients, Z_k spaces of directions, cones and suspensions
   2024 Google
"""
# Standard library imports
from dataclasses import dataclass, replace
from typing import Callable
import itertools
import logging
import math
import toml
import pkgutil

# Third-party imports
import numpy as np
import pandas as pd

# Local imports
from .charts import ChartMetric, warped_chart
from .exceptions import InputValidationError
from .profiles import ProfileFunction, sine_profile

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])

HALF_PI = 0.5 * np.pi


def check_weights(m_minus, m_plus):
    """Raises InputValidationError unless the weights are coprime positive integers."""
    for label, m in (("m_minus", m_minus), ("m_plus", m_plus)):
        if int(m) != m or m < 1:
            raise InputValidationError(f"Weight {label}={m} must be a positive integer.")
    if math.gcd(int(m_minus), int(m_plus)) != 1:
        raise InputValidationError(
            f"Weights ({m_minus}, {m_plus}) are not coprime, the circle action is not effective."
        )
    return int(m_minus), int(m_plus)


def _weighted_parts(m_minus, m_plus, theta):
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    c = np.cos(theta)
    p = np.where((theta == 0.0) | (theta == HALF_PI), 0.0, s * c)
    dp = np.cos(2.0 * theta)
    ddp = -2.0 * np.sin(2.0 * theta)
    delta = float(m_plus**2 - m_minus**2)
    q = np.sqrt(m_plus**2 * s**2 + m_minus**2 * c**2)
    dq = delta * np.sin(2.0 * theta) / (2.0 * q)
    ddq = delta * np.cos(2.0 * theta) / q - delta * np.sin(2.0 * theta) * dq / (2.0 * q**2)
    return p, dp, ddp, q, dq, ddq


def weighted_profile(m_minus, m_plus):
    """Profile sin(t)cos(t) / sqrt(m_+^2 sin^2 t + m_-^2 cos^2 t) of the weighted quotient.

    The formula is odd in theta, so symmetric differences at the tip see the
    odd extension automatically.
    """

    def value(theta):
        p, _, _, q, _, _ = _weighted_parts(m_minus, m_plus, theta)
        return p / q

    def first(theta):
        p, dp, _, q, dq, _ = _weighted_parts(m_minus, m_plus, theta)
        return dp / q - p * dq / q**2

    def second(theta):
        p, dp, ddp, q, dq, ddq = _weighted_parts(m_minus, m_plus, theta)
        return ddp / q - 2.0 * dp * dq / q**2 - p * ddq / q**2 + 2.0 * p * dq**2 / q**3

    return ProfileFunction(
        domain=(0.0, HALF_PI),
        func=value,
        derivatives=(first, second),
        name=f"R[{m_minus},{m_plus}]",
    )


def weighted_curvature(m_minus, m_plus, theta):
    """Closed form 1 + 3 m_-^2 m_+^2 / (m_-^2 cos^2 + m_+^2 sin^2)^2."""
    theta = np.asarray(theta, dtype=float)
    denominator = (m_minus**2 * np.cos(theta) ** 2 + m_plus**2 * np.sin(theta) ** 2) ** 2
    result = 1.0 + 3.0 * m_minus**2 * m_plus**2 / denominator
    return result if result.ndim else float(result)


def quotient_weight(m):
    """Weight 1 - 1/m of the tip resolution for a Z_m quotient tip."""
    if m < 1:
        raise InputValidationError(f"Isotropy order {m} must be at least 1.")
    return 1.0 - 1.0 / m


def branched_weight(m):
    """Weight 1 - 2/m of the tip resolution along a branching curve."""
    if m < 3:
        raise InputValidationError(
            f"Branched-cover weight needs m >= 3, got {m}."
        )
    return 1.0 - 2.0 / m


@dataclass(frozen=True)
class WeightedQuotientProfile:
    """Space of directions of a weighted circle quotient of S^3.

    Attributes:
        m_minus: Isotropy order at theta = 0.
        m_plus: Isotropy order at theta = pi/2.
        R: The profile on [0, pi/2].
    """

    m_minus: int
    m_plus: int
    R: ProfileFunction

    @classmethod
    def build(cls, m_minus, m_plus):
        m_minus, m_plus = check_weights(m_minus, m_plus)
        return cls(m_minus, m_plus, weighted_profile(m_minus, m_plus))

    def weight(self, mode=constants["WEIGHT_MODE"]["QUOTIENT"]):
        """Weight of the eta family that resolves the theta = 0 tip."""
        if mode == constants["WEIGHT_MODE"]["QUOTIENT"]:
            return quotient_weight(self.m_minus)
        if mode == constants["WEIGHT_MODE"]["BRANCHED"]:
            return branched_weight(self.m_minus)
        raise InputValidationError(
            f"Invalid weight mode: {mode}. Valid options are "
            f"{constants['WEIGHT_MODE']['QUOTIENT']} and {constants['WEIGHT_MODE']['BRANCHED']}."
        )

    def tip_profile(self, mode=constants["WEIGHT_MODE"]["QUOTIENT"]):
        """R for a quotient tip, 2R for a branched tip (doubled normal angle)."""
        if mode == constants["WEIGHT_MODE"]["BRANCHED"]:
            branched_weight(self.m_minus)
            return self.R.scaled(2.0, name=f"2{self.R.name}")
        self.weight(mode)
        return self.R


@dataclass(frozen=True)
class SuspensionSpace:
    """Euclidean cone or spherical suspension over a base of diameter <= pi.

    Attributes:
        base_distance: Callable (x, y) -> base distance.
        base_diameter: Diameter of the base.
        kind: "cone" or "suspension".
    """

    base_distance: Callable
    base_diameter: float
    kind: str = "suspension"

    def __post_init__(self):
        if self.kind not in ("cone", "suspension"):
            raise InputValidationError(
                f"Invalid kind: {self.kind}. Valid options are cone and suspension."
            )
        if self.base_diameter > np.pi + constants["QUOTIENT"]["DIAMETER_TOL"]:
            raise InputValidationError(
                f"Base diameter {self.base_diameter} exceeds pi."
            )

    def distance(self, first, second):
        """Distance between (x, t) and (y, s)."""
        (x, t), (y, s) = first, second
        d = self.base_distance(x, y)
        if self.kind == "cone":
            return cone_distance(d, t, s)
        return suspension_distance(d, t, s)


def _check_base_distance(d_base):
    d_base = np.asarray(d_base, dtype=float)
    if np.any(d_base > np.pi + constants["QUOTIENT"]["DIAMETER_TOL"]) or np.any(d_base < 0.0):
        raise InputValidationError(f"Base distance must lie in [0, pi], got {d_base}.")
    return np.minimum(d_base, np.pi)


def suspension_distance(d_base, t, s):
    """Distance in S(X): arccos(cos t cos s + sin t sin s cos d)."""
    d_base = _check_base_distance(d_base)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any((t < 0.0) | (t > np.pi) | (s < 0.0) | (s > np.pi)):
        raise InputValidationError("Suspension heights must lie in [0, pi].")
    cosine = np.cos(t) * np.cos(s) + np.sin(t) * np.sin(s) * np.cos(d_base)
    result = np.arccos(np.clip(cosine, -1.0, 1.0))
    return result if result.ndim else float(result)


def cone_distance(d_base, t, s):
    """Distance in C(X): sqrt(t^2 + s^2 - 2 t s cos d)."""
    d_base = _check_base_distance(d_base)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any((t < 0.0) | (s < 0.0)):
        raise InputValidationError("Cone radii must be non-negative.")
    squared = t**2 + s**2 - 2.0 * t * s * np.cos(d_base)
    result = np.sqrt(np.maximum(squared, 0.0))
    return result if result.ndim else float(result)


def ball_suspension_chart(profile, rho):
    """Chart dr^2 + sin^2 r (dtheta^2 + R(theta)^2 dalpha^2) on (0, rho) x domain x circle."""
    if not 0.0 < rho < HALF_PI:
        raise InputValidationError(f"Ball radius rho={rho} must lie in (0, pi/2).")
    a, b = profile.domain

    def g(p):
        sr2 = np.sin(p[0]) ** 2
        return np.diag([1.0, sr2, sr2 * float(profile.value(p[1])) ** 2])

    return ChartMetric(
        coords=("r", "theta", "alpha"),
        bounds=((0.0, rho), (a, b), (0.0, 2.0 * np.pi)),
        g=g,
        periodic=(False, False, True),
        name=f"suspension[{profile.name}]",
    )


class QuotientOperations:
    """Closed form model geometries of the weighted quotients."""

    def __init__(self, client):
        """Initialize with reference to main client."""
        self._client = client

    def quotient_profile(self, m_minus, m_plus, theta):
        """Value of the weighted quotient profile R(theta).

        Args:
            m_minus (int): Weight at theta = 0.
            m_plus (int): Weight at theta = pi/2.
            theta (float | numpy.ndarray): Angles in [0, pi/2].

        Returns:
            float | numpy.ndarray: R(theta), exactly 0 at both endpoints.

        Raises:
            InputValidationError: For non-coprime weights or angles outside [0, pi/2].
        """
        try:
            check_weights(m_minus, m_plus)
            theta_arr = np.asarray(theta, dtype=float)
            if np.any((theta_arr < 0.0) | (theta_arr > HALF_PI)):
                raise InputValidationError(f"Angle {theta} is outside [0, pi/2].")
            return weighted_profile(m_minus, m_plus).value(theta)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def quotient_curvature(self, m_minus, m_plus, theta, method="closed_form"):
        """Curvature of the weighted quotient at theta.

        The closed form is finite on all of [0, pi/2]; the ratio -R''/R is a
        0/0 limit at the endpoints and is only evaluated on the open interval.

        Args:
            m_minus (int): Weight at theta = 0.
            m_plus (int): Weight at theta = pi/2.
            theta (float | numpy.ndarray): Angles.
            method (str): "closed_form" or "ratio".

        Returns:
            float | numpy.ndarray: The curvature, always above 1.

        Raises:
            InputValidationError: For invalid weights, an unknown method, or an
                endpoint angle with the ratio method.
        """
        try:
            check_weights(m_minus, m_plus)
            theta_arr = np.asarray(theta, dtype=float)
            if method == "closed_form":
                if np.any((theta_arr < 0.0) | (theta_arr > HALF_PI)):
                    raise InputValidationError(f"Angle {theta} is outside [0, pi/2].")
                return weighted_curvature(m_minus, m_plus, theta)
            if method == "ratio":
                if np.any((theta_arr <= 0.0) | (theta_arr >= HALF_PI)):
                    raise InputValidationError(
                        f"Angle {theta} must lie in the open interval (0, pi/2) for the ratio -R''/R."
                    )
                profile = weighted_profile(m_minus, m_plus)
                result = -np.asarray(profile.derivative(theta_arr, 2)) / np.asarray(profile.value(theta_arr))
                return result if result.ndim else float(result)
            raise InputValidationError(
                f"Invalid method: {method}. Valid options are closed_form and ratio."
            )
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def curvature_gap(self, m_minus, m_plus, n=None):
        """Gap a > 0 with sec >= 1 + a, minimized over a uniform theta grid.

        Returns:
            float: min over the grid of the closed form curvature minus 1.
        """
        try:
            check_weights(m_minus, m_plus)
            if n is None:
                n = constants["QUOTIENT"]["GAP_GRID"]
            grid = np.linspace(0.0, HALF_PI, n)
            gap = float(np.min(weighted_curvature(m_minus, m_plus, grid)) - 1.0)
            logger.info(f"Curvature gap of ({m_minus}, {m_plus}): {gap}.")
            return gap
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def endpoint_report(self, m_minus, m_plus):
        """Tip values, tip slopes and symmetric-difference even derivatives of R."""
        profile = WeightedQuotientProfile.build(m_minus, m_plus).R
        even_0 = profile.even_derivatives_at(0.0)
        even_1 = profile.even_derivatives_at(HALF_PI)
        report = {
            "R_0": float(profile.value(0.0)),
            "R_half_pi": float(profile.value(HALF_PI)),
            "slope_0": float(profile.derivative(0.0, 1)),
            "slope_half_pi": float(profile.derivative(HALF_PI, 1)),
            "second_0": even_0[0],
            "fourth_0": even_0[1],
            "second_half_pi": even_1[0],
            "fourth_half_pi": even_1[1],
        }
        endpoint_tol = constants["QUOTIENT"]["ENDPOINT_TOL"]
        report["passed"] = (
            report["R_0"] == 0.0
            and abs(report["R_half_pi"]) <= endpoint_tol
            and abs(report["slope_0"] - 1.0 / m_minus) <= endpoint_tol
            and abs(report["slope_half_pi"] + 1.0 / m_plus) <= endpoint_tol
            and max(abs(v) for v in (*even_0, *even_1)) <= constants["ETA"]["EVEN_DERIVATIVE_TOL"]
        )
        return report

    def zk_directions_metric(self, k):
        """Chart dr^2 + k^-2 sin^2(r) dtheta^2, the suspension of a circle of length 2 pi/k.

        Raises:
            InputValidationError: If k < 1.
        """
        if int(k) != k or k < 1:
            raise InputValidationError(f"Isotropy order k={k} must be a positive integer.")
        return warped_chart(sine_profile(scale=float(k)), name=f"zk_directions[{k}]")

    def tip_cone_angle(self, metric: ChartMetric, r0=1e-3):
        """Cone angle 2 pi sqrt(g_thetatheta(r0)) / r0 at the r = 0 tip of a warped chart."""
        angle = 2.0 * np.pi * np.sqrt(metric.metric(np.array([r0, np.pi]))[1, 1]) / r0
        logger.debug(f"Tip cone angle of {metric.name}: {angle}.")
        return float(angle)

    def suspension_distance(self, d_base, first, second):
        """Distance between (x, t) and (y, s) in the spherical suspension."""
        try:
            return suspension_distance(d_base, first[1], second[1])
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def cone_distance(self, d_base, first, second):
        """Distance between (x, t) and (y, s) in the Euclidean cone."""
        try:
            return cone_distance(d_base, first[1], second[1])
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def ball_suspension_metric(self, profile, rho):
        """Chart dr^2 + sin^2(r)(dtheta^2 + R^2(theta) dalpha^2) on B_rho.

        Args:
            profile (WeightedQuotientProfile | ProfileFunction): The base profile.
            rho (float): Ball radius in (0, pi/2).

        Raises:
            InputValidationError: If rho is out of range.
        """
        try:
            if isinstance(profile, WeightedQuotientProfile):
                profile = profile.R
            return ball_suspension_chart(profile, rho)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def suspension_curvature_sweep(self, profile, rho, n=5, theta_margin=0.05):
        """Smallest curvature operator eigenvalue of the ball chart over a grid.

        The eigenvalue is a lower bound for every sectional curvature at the
        grid point, not just the coordinate planes.

        Returns:
            tuple: (minimum, argmin point).
        """
        chart = replace(
            self.ball_suspension_metric(profile, rho),
            h_fd=constants["ORACLE"]["H_RICHARDSON"],
            richardson=True,
        )
        curvature_ops = self._client._curvature_ops
        a, b = chart.bounds[1]
        r_axis = np.linspace(0.1 * rho, 0.9 * rho, n)
        theta_axis = np.linspace(a + theta_margin, b - theta_margin, n)
        minimum, where = np.inf, None
        for r, theta in itertools.product(r_axis, theta_axis):
            point = np.array([r, theta, np.pi])
            scales = np.sqrt(np.diag(chart.metric(point)))
            frame = np.diag(1.0 / scales)
            _, eigenvalues = curvature_ops.curvature_operator(chart, point, frame)
            if eigenvalues[0] < minimum:
                minimum, where = float(eigenvalues[0]), point
        logger.info(f"Suspension sweep of {chart.name}: min curvature {minimum} at {where}.")
        return minimum, where

    def profile_table(self, m_minus, m_plus, n=None):
        """Table of (theta, R, R', R'', sec) on a uniform grid of [0, pi/2].

        Returns:
            pandas.DataFrame: One row per grid angle.
        """
        try:
            quotient = WeightedQuotientProfile.build(m_minus, m_plus)
            if n is None:
                n = self._client._client_options._theta_grid
            theta = np.linspace(0.0, HALF_PI, n)
            return pd.DataFrame(
                {
                    "theta": theta,
                    "R": quotient.R.value(theta),
                    "dR": quotient.R.derivative(theta, 1),
                    "ddR": quotient.R.derivative(theta, 2),
                    "sec": weighted_curvature(m_minus, m_plus, theta),
                }
            )
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e
