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
"""Tube around the singular geodesic, min-gluing and Greene-Wu smoothing
   2024 Google
"""
# Standard library imports
from dataclasses import dataclass
from typing import Callable, Optional
import itertools
import logging
import toml
import pkgutil

# Third-party imports
import numpy as np

# Local imports
from . import section
from .charts import ChartMetric, doubly_warped_chart
from .exceptions import (
    ChartBoundaryError,
    InputValidationError,
    NotConcaveError,
    SeamMismatchError,
)
from .profiles import ProfileFunction
from .resolution_operations import EtaFunction
from .utils import gauss_legendre, smoothstep

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])

HALF_PI = 0.5 * np.pi
GEOMETRIES = ("flat", "spherical")


@dataclass(frozen=True)
class CoordinateTransfer:
    """Polar coordinates (r, theta) around p of chart points (s, t) and their Jacobian."""

    s: np.ndarray
    t: np.ndarray
    r: np.ndarray
    theta: np.ndarray
    sin_r: np.ndarray
    r_s: np.ndarray
    r_t: np.ndarray
    theta_s: np.ndarray
    theta_t: np.ndarray

    def relation_residuals(self):
        """Worst residuals of cos r = cos s cos t, sin t = sin r sin theta and the cos theta identity."""
        s, t = self.s, self.t
        cos_r = np.max(np.abs(np.cos(self.r) - np.cos(s) * np.cos(t)))
        sin_t = np.max(np.abs(np.sin(t) - self.sin_r * np.sin(self.theta)))
        cos_theta = np.max(np.abs(self.sin_r * np.cos(self.theta) - np.cos(t) * np.sin(s)))
        return {"cos_r": float(cos_r), "sin_t": float(sin_t), "cos_theta": float(cos_theta)}


def transfer(s, t):
    """Unchecked coordinate transfer; negative t gives the reflected point."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    sin_s, cos_s = np.sin(s), np.cos(s)
    sin_t, cos_t = np.sin(t), np.cos(t)
    sin_r = np.sqrt(sin_s**2 + cos_s**2 * sin_t**2)
    r = np.arctan2(sin_r, cos_s * cos_t)
    theta = np.arctan2(sin_t, cos_t * sin_s)
    sin2 = sin_r**2
    return CoordinateTransfer(
        s=s,
        t=t,
        r=r,
        theta=theta,
        sin_r=sin_r,
        r_s=sin_s * cos_t / sin_r,
        r_t=cos_s * sin_t / sin_r,
        theta_s=-sin_t * cos_t * cos_s / sin2,
        theta_t=sin_s / sin2,
    )


def field_t_derivatives(eta: EtaFunction, s, t):
    """h = sin(r) eta(theta) and its first two t-derivatives at fixed s."""
    c = transfer(s, t)
    sin_r = c.sin_r
    cos_r = np.cos(c.r)
    r1 = c.r_t
    r2 = np.cos(c.s) * (np.cos(c.t) * sin_r - np.sin(c.t) * cos_r * r1) / sin_r**2
    th1 = c.theta_t
    th2 = -2.0 * np.sin(c.s) * cos_r * r1 / sin_r**3
    e0 = np.asarray(eta.eta.value(c.theta))
    e1 = np.asarray(eta.eta.derivative(c.theta, 1))
    e2 = np.asarray(eta.eta.derivative(c.theta, 2))
    big1 = cos_r * r1
    big2 = -sin_r * r1**2 + cos_r * r2
    small1 = e1 * th1
    small2 = e2 * th1**2 + e1 * th2
    value = sin_r * e0
    first = big1 * e0 + sin_r * small1
    second = big2 * e0 + 2.0 * big1 * small1 + sin_r * small2
    return value, first, second


def field_s_derivative(eta: EtaFunction, s, t):
    """d_s h = cos s cos t (eta cos theta - eta' sin theta)."""
    c = transfer(s, t)
    e0 = np.asarray(eta.eta.value(c.theta))
    e1 = np.asarray(eta.eta.derivative(c.theta, 1))
    return np.cos(c.s) * np.cos(c.t) * (e0 * np.cos(c.theta) - e1 * np.sin(c.theta))


@dataclass(frozen=True)
class TubeChart:
    """Tube f^2 ds^2 + dt^2 + phi^2 dphi^2 over (0, l) x [0, T) around a Z_m geodesic.

    f and phi take (s, t) arrays; phi must accept negative t (odd extension).
    """

    length: float
    radius: float
    f: Callable
    phi: Callable
    rho: float
    m: int
    name: str = "tube"

    def __post_init__(self):
        if not 0.0 < self.rho < HALF_PI:
            raise InputValidationError(f"Matching radius rho={self.rho} must lie in (0, pi/2).")
        if not self.length > self.rho:
            raise InputValidationError(f"Tube length {self.length} must exceed rho={self.rho}.")
        if not 0.0 < self.radius:
            raise InputValidationError(f"Tube radius {self.radius} must be positive.")
        s = np.linspace(0.05 * self.length, 0.95 * self.length, 33)
        zero = np.zeros_like(s)
        step = 1e-5
        slope = (self.phi(s, zero + step) - self.phi(s, zero - step)) / (2.0 * step)
        checks = {
            "f(s,0) = 1": np.max(np.abs(self.f(s, zero) - 1.0)),
            "phi(s,0) = 0": np.max(np.abs(self.phi(s, zero))),
            "d_t phi(s,0) = 1/m": np.max(np.abs(slope - 1.0 / self.m)),
        }
        for label, deviation in checks.items():
            if deviation > 1e-8:
                raise InputValidationError(f"Tube {self.name} violates {label}: deviation {deviation}.")

    def section_chart(self):
        """Two dimensional chart f^2 ds^2 + dt^2 of the section."""
        return ChartMetric(
            coords=("s", "t"),
            bounds=((0.0, self.length), (0.0, self.radius)),
            g=lambda p: np.diag([float(self.f(p[0], p[1])) ** 2, 1.0]),
            name=f"{self.name}.section",
        )


def spherical_tube(m, length=1.2, radius=1.0, rho=0.5):
    """Constant curvature tube f = cos t, phi = sin t / m."""
    if radius >= HALF_PI:
        raise InputValidationError(f"Spherical tube radius {radius} must be below pi/2.")
    return TubeChart(
        length=length,
        radius=radius,
        f=lambda s, t: np.cos(t) * np.ones_like(np.asarray(s, dtype=float)),
        phi=lambda s, t: np.sin(t) / m * np.ones_like(np.asarray(s, dtype=float)),
        rho=rho,
        m=m,
        name=f"spherical_tube[{m}]",
    )


@dataclass(frozen=True)
class GluedProfile:
    """Piecewise section profile: phi + h, then phi + hbar, then phi + htilde."""

    phi: Callable
    h: Callable
    hbar: Callable
    htilde: Callable
    rho: float
    length: float

    @property
    def seams(self):
        return 0.5 * self.rho, self.length - 0.5 * self.rho

    def __call__(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        left, right = self.seams
        result = np.asarray(self.phi(s, t), dtype=float) + np.asarray(self.hbar(s, t), dtype=float)
        inner = s <= left
        if np.any(inner):
            result[inner] = self.phi(s[inner], t[inner]) + self.h(s[inner], t[inner])
        outer = s >= right
        if np.any(outer):
            result[outer] = self.phi(s[outer], t[outer]) + self.htilde(s[outer], t[outer])
        return result


@dataclass(frozen=True)
class SmoothedProfile:
    """Blend j psi^n + (1 - j) psi found on the mollifier width ladder."""

    func: Callable
    width: float
    ladder_index: int
    max_second_difference: float
    deviation_outside: float

    def __call__(self, *coords):
        return self.func(*coords)


def _mollifier(dim, nodes):
    """Symmetric quadrature of the bump exp(-1/(1 - |y|^2)) on the unit ball."""
    if dim == 1:
        y, w = gauss_legendre(nodes)
        weight = w * np.exp(-1.0 / (1.0 - y**2))
        return y[:, None], weight / np.sum(weight)
    radius, w = gauss_legendre(nodes, 0.0, 1.0)
    angles = 2.0 * np.pi * np.arange(nodes) / nodes
    rr, aa = np.meshgrid(radius, angles, indexing="ij")
    weight = (w[:, None] * rr * np.exp(-1.0 / (1.0 - rr**2))).ravel()
    y = np.stack(((rr * np.cos(aa)).ravel(), (rr * np.sin(aa)).ravel()), axis=-1)
    return y, weight / np.sum(weight)


class TubeOperations:
    """Coordinates, tube metric, gluing and smoothing of the section profile."""

    def __init__(self, client):
        """Initialize with reference to main client."""
        self._client = client

    def coordinate_transfer(self, s, t):
        """Polar coordinates (r, theta) around p of chart points (s, t).

        Args:
            s (float | numpy.ndarray): Arc length along the singular geodesic, in [0, pi/2).
            t (float | numpy.ndarray): Distance from the geodesic, in [0, pi/2).

        Returns:
            CoordinateTransfer: r, theta and the four Jacobian entries.

        Raises:
            InputValidationError: On points outside the chart or at s = t = 0.
        """
        s_arr = np.asarray(s, dtype=float)
        t_arr = np.asarray(t, dtype=float)
        if np.any((s_arr < 0.0) | (s_arr >= HALF_PI)) or np.any((t_arr < 0.0) | (t_arr >= HALF_PI)):
            raise ChartBoundaryError("Coordinates (s, t) must lie in [0, pi/2) x [0, pi/2).")
        if np.any((s_arr == 0.0) & (t_arr == 0.0)):
            raise InputValidationError("The point s = t = 0 is the pole p, where theta is undefined.")
        return transfer(s_arr, t_arr)

    def monotonicity_check(self, rho, radius, n=256):
        """Sign conditions d_s sin r > 0, d_t sin r > 0, d_t theta > 0 and d_s theta < 0.

        The coordinate relations are checked on the same grid.

        Returns:
            dict: Worst margin per condition, the axis row value of d_s theta
                and a finite difference spot check.
        """
        s = np.linspace(0.0, rho, n + 2)[1:-1]
        t = np.linspace(0.0, radius, n + 2)[1:-1]
        ss, tt = np.meshgrid(s, t, indexing="ij")
        c = transfer(ss, tt)
        cos_r = np.cos(c.r)
        margins = {
            "ds_sin_r": float(np.min(cos_r * c.r_s)),
            "dt_sin_r": float(np.min(cos_r * c.r_t)),
            "dt_theta": float(np.min(c.theta_t)),
            "ds_theta": float(np.min(-c.theta_s)),
        }
        axis = transfer(s, np.zeros_like(s))
        step = 1e-6
        s0, t0 = float(s[n // 3]), float(t[n // 5])
        numeric = (
            (transfer(s0, t0 + step).theta - transfer(s0, t0 - step).theta) / (2.0 * step),
            (transfer(s0 + step, t0).theta - transfer(s0 - step, t0).theta) / (2.0 * step),
        )
        spot = transfer(s0, t0)
        relations = max(c.relation_residuals().values())
        report = {
            "margins": margins,
            "relations": relations,
            "passed": all(v > 0.0 for v in margins.values()) and relations <= constants["TUBE"]["RELATION_TOL"],
            "axis_ds_theta": float(np.max(np.abs(axis.theta_s))),
            "spot_check": float(
                max(abs(numeric[0] - spot.theta_t), abs(numeric[1] - spot.theta_s))
            ),
        }
        logger.info(f"Monotonicity check on (0,{rho})x(0,{radius}): {margins}.")
        return report

    def killing_derivative_check(self, eta: EtaFunction, rho, n=64):
        """Signs of the s- and t-derivatives of h = sin(r) eta(theta) on the ball section.

        d_s h >= 0 everywhere, 0 < d_t h < w and d_t^2 h < 0 where 0 < theta < tau/2.
        """
        w = eta.params.weight
        tau = eta.params.tau
        s = np.linspace(0.0, rho, n + 2)[1:-1]
        ss, tt = np.meshgrid(s, s, indexing="ij")
        inside = np.cos(ss) * np.cos(tt) > np.cos(rho)
        ss, tt = ss[inside], tt[inside]
        c = transfer(ss, tt)
        _, first, second = field_t_derivatives(eta, ss, tt)
        ds = field_s_derivative(eta, ss, tt)
        cone = (c.theta > 0.0) & (c.theta < 0.5 * tau)
        tol = constants["ETA"]["MARGIN_TOL"]
        report = {
            "ds_h": float(np.min(ds)) + tol,
            "dt_h_positive": float(np.min(first[cone])) if np.any(cone) else 0.0,
            "dt_h_below_w": float(np.min(w - first[cone])) if np.any(cone) else 0.0,
            "dtt_h_negative": float(np.min(-second[cone])) if np.any(cone) else 0.0,
        }
        axis_slope = field_t_derivatives(eta, s, np.zeros_like(s))[1]
        report["axis_dt_h"] = float(np.max(np.abs(axis_slope - w)))
        report["passed"] = all(report[k] > 0.0 for k in ("ds_h", "dt_h_positive", "dt_h_below_w", "dtt_h_negative"))
        return report

    def hbar_extension(self, eta: EtaFunction, rho):
        """Profile hbar(t) = h(rho/2, t), the field extended constantly in s.

        Returns:
            ProfileFunction: hbar on [0, pi/2) with analytic derivatives to order 2.
        """
        if not 0.0 < rho < HALF_PI:
            raise InputValidationError(f"Matching radius rho={rho} must lie in (0, pi/2).")
        s0 = 0.5 * rho
        return ProfileFunction(
            domain=(0.0, HALF_PI),
            func=lambda t: field_t_derivatives(eta, s0, t)[0],
            derivatives=(
                lambda t: field_t_derivatives(eta, s0, t)[1],
                lambda t: field_t_derivatives(eta, s0, t)[2],
            ),
            name=f"hbar[{eta.eta.name},{rho}]",
        )

    def section_field(self, killing_field, mirror_length=None):
        """A field h(r, theta) on the ball around p as a function of (s, t).

        With mirror_length l the field is read in the ball around q = (l, 0).
        """

        def field(s, t):
            s = np.asarray(s, dtype=float)
            if mirror_length is not None:
                s = mirror_length - s
            c = transfer(s, t)
            return killing_field(c.r, c.theta)

        return field

    def spherical_tube(self, m, length=1.2, radius=1.0, rho=0.5):
        return spherical_tube(m, length, radius, rho)

    def killing_length(self, tube: TubeChart, hbar: Optional[ProfileFunction] = None):
        """psi(s, t) = phi(s, t) + hbar(t)."""
        if hbar is None:
            return tube.phi
        return lambda s, t: tube.phi(s, t) + np.asarray(hbar.value(t))

    def tube_metric(self, tube: TubeChart, hbar: Optional[ProfileFunction] = None):
        """Chart f^2 ds^2 + dt^2 + (phi + hbar)^2 dphi^2 of the resolved tube."""
        psi = self.killing_length(tube, hbar)
        return doubly_warped_chart(
            tube.f,
            psi,
            (0.0, tube.length),
            (0.0, tube.radius),
            name=f"{tube.name}+hbar" if hbar is not None else tube.name,
        )

    def zeta_regularity(
        self,
        tube: TubeChart,
        hbar: ProfileFunction,
        eta: Optional[EtaFunction] = None,
        n=3,
        t_max=None,
    ):
        """The coefficient zeta = (xi/t^2 - 1)/t^2, xi = (phi + hbar)^2, near the axis.

        Sampled at t in [t_max / 4, 3 t_max / 4]. Without t_max the samples stay
        where theta(rho/2, t) <= tau(delta), where hbar = w sin t.

        Returns:
            dict: Largest |zeta|, largest |zeta(t) - zeta(-t)|, the axis limit
                zeta_axis read off a least squares line in t^2, and roundoff, the
                cancellation error bound 16 eps / t^2 at the smallest sample.

        Raises:
            InputValidationError: If neither eta nor t_max is given.
        """
        if t_max is None:
            if eta is None:
                raise InputValidationError("zeta regularity needs eta or t_max.")
            t_max = float(np.arctan(np.tan(eta.tau_of_delta) * np.sin(0.5 * tube.rho)))
        if not 0.0 < t_max < tube.radius:
            raise InputValidationError(f"t_max={t_max} must lie in (0, {tube.radius}).")
        t = t_max * np.linspace(0.25, 0.75, n)
        s = np.linspace(0.1 * tube.length, 0.9 * tube.length, 5)
        ss, tt = np.meshgrid(s, t, indexing="ij")
        psi = self.killing_length(tube, hbar)

        def zeta(s_, t_):
            xi = np.asarray(psi(s_, t_)) ** 2
            return (xi / t_**2 - 1.0) / t_**2

        plus = zeta(ss, tt)
        minus = zeta(ss, -tt)
        axis = np.polynomial.polynomial.polyfit(t**2, plus.T, 1)[0]
        report = {
            "max_abs_zeta": float(np.max(np.abs(plus))),
            "odd_residual": float(np.max(np.abs(plus - minus))),
            "zeta_axis": float(axis[np.argmax(np.abs(axis))]),
            "roundoff": float(16.0 * np.finfo(float).eps / t[0] ** 2),
            "t_max": t_max,
        }
        report["finite"] = bool(np.all(np.isfinite(plus)) and report["max_abs_zeta"] <= constants["TUBE"]["ZETA_BOUND"])
        logger.info(f"zeta regularity of {tube.name}: {report}.")
        return report

    def ball_pullback_check(self, tube: TubeChart, profile: ProfileFunction, hbar=None, points=None):
        """Max |J^T G_ball J - G_tube| over points of the ball chart overlap.

        G_ball is dr^2 + sin^2 r (dtheta^2 + profile(theta)^2 dalpha^2) and J is
        the Jacobian of (s, t, phi) -> (r, theta, alpha).
        """
        if points is None:
            s = np.linspace(0.2, 0.9, 5) * tube.rho
            points = np.array([(a, b) for a, b in itertools.product(s, s) if np.cos(a) * np.cos(b) > np.cos(tube.rho)])
        psi = self.killing_length(tube, hbar)
        worst = 0.0
        for s, t in np.atleast_2d(points):
            c = transfer(s, t)
            theta = float(c.theta)
            sin_r = float(c.sin_r)
            ball = np.diag([1.0, sin_r**2, (sin_r * float(profile.value(theta))) ** 2])
            jac = np.array(
                [
                    [float(c.r_s), float(c.r_t), 0.0],
                    [float(c.theta_s), float(c.theta_t), 0.0],
                    [0.0, 0.0, 1.0],
                ]
            )
            pulled = jac.T @ ball @ jac
            own = np.diag([float(tube.f(s, t)) ** 2, 1.0, float(psi(s, t)) ** 2])
            worst = max(worst, float(np.max(np.abs(pulled - own))))
        logger.info(f"Pullback of the ball chart onto {tube.name}: deviation {worst}.")
        return worst

    def _frame(self, tube, psi, s, t):
        return np.array(
            [
                [0.0, 0.0, 1.0 / float(psi(s, t))],
                [0.0, 1.0, 0.0],
                [1.0 / float(tube.f(s, t)), 0.0, 0.0],
            ]
        )

    def tube_curvature_sweep(self, tube: TubeChart, hbar=None, n=6, t_min=0.05):
        """Smallest curvature operator eigenvalue on S = {rho/4 <= s <= l - rho/4}.

        Returns:
            tuple: (minimum, argmin point).
        """
        try:
            chart = self.tube_metric(tube, hbar)
            psi = self.killing_length(tube, hbar)
            s_axis = np.linspace(0.25 * tube.rho, tube.length - 0.25 * tube.rho, n)
            t_axis = np.linspace(t_min, 0.9 * tube.radius, n)
            minimum, where = np.inf, None
            for s, t in itertools.product(s_axis, t_axis):
                point = np.array([s, t, np.pi])
                _, eigenvalues = self._client._curvature_ops.curvature_operator(
                    chart, point, self._frame(tube, psi, s, t)
                )
                if eigenvalues[0] < minimum:
                    minimum, where = float(eigenvalues[0]), point
            logger.info(f"Tube sweep of {chart.name}: min curvature {minimum} at {where}.")
            return minimum, where
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def block_structure_check(self, tube: TubeChart, hbar, point):
        """Compares the oracle curvature operator with its block form.

        The Killing block is -psi^{-1} Hess(psi) on the section and the section
        entry is the section curvature, in the frame {psi^-1 d_phi, d_t, f^-1 d_s}.

        Returns:
            dict: Mixed block size relative to the operator norm and the block deviations.
        """
        try:
            s, t = float(point[0]), float(point[1])
            chart = self.tube_metric(tube, hbar)
            psi = self.killing_length(tube, hbar)
            curvature_ops = self._client._curvature_ops
            matrix, _ = curvature_ops.curvature_operator(
                chart, np.array([s, t, np.pi]), self._frame(tube, psi, s, t)
            )
            sigma = tube.section_chart()
            hess = curvature_ops.hessian_scalar(sigma, lambda p: float(psi(p[0], p[1])), np.array([s, t]))
            f = float(tube.f(s, t))
            # rows e1 = d_t, e2 = f^-1 d_s in (s, t) components
            basis = np.array([[0.0, 1.0], [1.0 / f, 0.0]])
            killing = -(basis @ hess @ basis.T) / float(psi(s, t))
            sec = curvature_ops.coordinate_sectional_curvatures(sigma, np.array([s, t]))[(0, 1)]
            scale = float(np.max(np.abs(matrix)))
            report = {
                "mixed_relative": float(max(abs(matrix[0, 2]), abs(matrix[1, 2]))) / scale,
                "killing_deviation": float(np.max(np.abs(matrix[:2, :2] - killing))),
                "section_deviation": float(abs(matrix[2, 2] - sec)),
            }
            logger.debug(f"Block structure at {point}: {report}.")
            return report
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def hbar_hessian_check(self, tube: TubeChart, hbar: ProfileFunction, point):
        """Max deviation of the section Hessian of hbar from diag(f f_t hbar', hbar'')."""
        s, t = float(point[0]), float(point[1])
        sigma = tube.section_chart()
        hess = self._client._curvature_ops.hessian_scalar(
            sigma, lambda p: float(hbar.value(p[1])), np.array([s, t])
        )
        step = 1e-6
        f_t = float((tube.f(s, t + step) - tube.f(s, t - step)) / (2.0 * step))
        expected = np.diag(
            [float(tube.f(s, t)) * f_t * float(hbar.derivative(t, 1)), float(hbar.derivative(t, 2))]
        )
        return float(np.max(np.abs(hess - expected)))

    def tau0_check(self, tube: TubeChart, tau0, n=64):
        """Checks that hbar for tau < tau0 is supported where f^-1 d_t f / phi < 0.

        T0 is the first grid t where the sign condition fails on
        [rho/4, l - rho/4]; the support of hbar ends at t(tau0) with
        theta(rho/2, t(tau0)) = tau0.
        """
        if not 0.0 < tau0 < 0.25 * np.pi:
            raise InputValidationError(f"tau0={tau0} must lie in (0, pi/4).")
        s = np.linspace(0.25 * tube.rho, tube.length - 0.25 * tube.rho, n)
        t = np.linspace(0.0, tube.radius, n + 1)[1:]
        ss, tt = np.meshgrid(s, t, indexing="ij")
        step = 1e-6
        f_t = (tube.f(ss, tt + step) - tube.f(ss, tt - step)) / (2.0 * step)
        ratio = f_t / (tube.f(ss, tt) * tube.phi(ss, tt))
        failing = np.any(ratio >= 0.0, axis=0)
        t0_cap = float(t[np.argmax(failing)]) if np.any(failing) else float(tube.radius)
        support = float(np.arctan(np.tan(tau0) * np.sin(0.5 * tube.rho)))
        report = {"T0": t0_cap, "support_end": support, "passed": support < t0_cap}
        logger.info(f"tau0={tau0} sign condition on {tube.name}: {report}.")
        return report

    def psi_min_glue(self, phi, h, hbar, htilde, rho, length, t_grid=None):
        """Glues phi + h, phi + hbar and phi + htilde along s = rho/2 and s = l - rho/2.

        Args:
            phi, h, htilde (Callable): Fields of (s, t).
            hbar (ProfileFunction | Callable): hbar(t), or a field of (s, t).
            rho (float): Matching radius.
            length (float): Tube length l.
            t_grid (array-like, optional): Seam test values of t.

        Returns:
            GluedProfile: The glued section profile.

        Raises:
            SeamMismatchError: If the pieces differ on a seam by more than the seam tolerance.
        """
        try:
            if isinstance(hbar, ProfileFunction):
                profile = hbar
                hbar = lambda s, t: np.asarray(profile.value(t)) * np.ones_like(np.asarray(s, dtype=float))
            glued = GluedProfile(phi=phi, h=h, hbar=hbar, htilde=htilde, rho=rho, length=length)
            if t_grid is None:
                t_grid = np.linspace(0.0, 0.9 * rho, 257)[1:]
            t_grid = np.asarray(t_grid, dtype=float)
            left, right = glued.seams
            tol = self._client._client_options._seam_tol
            for seam, piece in ((left, h), (right, htilde)):
                s = np.full_like(t_grid, seam)
                mismatch = float(np.max(np.abs(piece(s, t_grid) - hbar(s, t_grid))))
                if mismatch > tol:
                    raise SeamMismatchError(f"Pieces differ by {mismatch} on the seam s={seam}.")
            logger.info(f"Glued section profile with seams at s={left} and s={right}.")
            return glued
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def kink_scan(self, glued: GluedProfile, eta: EtaFunction, t_grid, step=1e-7, threshold=1e-6):
        """Locates jumps of d_s psi on the seams and on control lines between them.

        Returns:
            dict: Flagged t band per seam, the theta band [tau(delta), tau] mapped
                to t on the left seam, the largest control line jump and whether
                every flagged point lies in the band.
        """
        t_grid = np.asarray(t_grid, dtype=float)
        left, right = glued.seams

        def jumps(s0):
            s = np.full_like(t_grid, s0)
            centre = glued(s, t_grid)
            forward = (glued(s + step, t_grid) - centre) / step
            backward = (centre - glued(s - step, t_grid)) / step
            return np.abs(forward - backward)

        band_theta = np.array([eta.tau_of_delta, eta.params.tau])
        band_t = np.arctan(np.tan(band_theta) * np.sin(left))
        report = {"band": [float(band_t[0]), float(band_t[1])], "seams": {}}
        confined = True
        for s0 in (left, right):
            jump = jumps(s0)
            flagged = t_grid[jump > threshold]
            if flagged.size:
                report["seams"][float(s0)] = [float(flagged.min()), float(flagged.max())]
                confined &= bool(flagged.min() >= band_t[0] - step and flagged.max() <= band_t[1] + step)
            else:
                report["seams"][float(s0)] = []
        controls = (0.5 * left, 0.5 * (left + right), right + 0.5 * (glued.length - right))
        report["control_jump"] = float(max(np.max(jumps(s0)) for s0 in controls))
        report["confined"] = confined and report["control_jump"] <= threshold
        logger.info(f"Kink scan: {report}.")
        return report

    def midpoint_concavity(self, func, rho, trials=None, seed=None, t_min=1e-3, tol=None):
        """Random midpoint test func(mid) >= (func(a) + func(b))/2 on the quarter ball.

        Returns:
            float: The worst violation (average minus midpoint value).
        """
        if trials is None:
            trials = constants["TUBE"]["MIDPOINT_TRIALS"]
        rng = self._client._utils.rng(seed)
        a = section.sample_ball(rng, rho, trials, t_min)
        b = section.sample_ball(rng, rho, trials, t_min)
        mid = section.midpoint((a[:, 0], a[:, 1]), (b[:, 0], b[:, 1]))
        average = 0.5 * (func(a[:, 0], a[:, 1]) + func(b[:, 0], b[:, 1]))
        worst = float(np.max(average - func(*mid)))
        logger.info(f"Midpoint concavity over {trials} trials: worst violation {worst}.")
        return worst

    def _second_differences(self, func, points, step, geometry):
        points = np.atleast_2d(points)
        dim = points.shape[1]
        if geometry == "spherical":
            directions = ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0))
            return np.max(
                [section.second_difference(func, points[:, 0], points[:, 1], d, step) for d in directions],
                axis=0,
            )
        if dim == 1:
            directions = (np.array([1.0]),)
        else:
            directions = tuple(
                np.array(d) / np.linalg.norm(d) for d in ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0))
            )
        values = []
        for d in directions:
            plus = (points + step * d).T
            minus = (points - step * d).T
            values.append(func(*plus) - 2.0 * func(*points.T) + func(*minus))
        return np.max(values, axis=0)

    def _convolution(self, psi, width, geometry, dim):
        nodes, weights = _mollifier(dim, constants["TUBE"]["GW_NODES"])

        if geometry == "flat":

            def convolved(*coords):
                points = np.stack([np.asarray(c, dtype=float) for c in coords], axis=-1)
                shifted = points[..., None, :] + width * nodes
                values = psi(*np.moveaxis(shifted, -1, 0))
                return np.sum(values * weights, axis=-1)

            return convolved

        def convolved(s, t):
            s = np.asarray(s, dtype=float)
            t = np.asarray(t, dtype=float)
            x = section.embed(s, t)
            e_s, e_t = section.frame(s, t)
            v = width * (nodes[:, 0, None] * e_s[..., None, :] + nodes[:, 1, None] * e_t[..., None, :])
            q = section.exp(x[..., None, :], v)
            values = psi(*section.chart(q))
            return np.sum(values * weights, axis=-1)

        return convolved

    def greene_wu_smooth(
        self,
        psi,
        seam_distance,
        test_points,
        neighborhood,
        ladder=None,
        geometry="spherical",
        require_strict=True,
        blend=True,
    ):
        """Smooths a concave profile near its kinks by a blended Riemannian convolution.

        psi^n is the average of psi over the mollifier of width eps in normal
        coordinates. The result j psi^n + (1 - j) psi uses
        j = 1 - S((d - L/2)/(L/2)) of the distance d to the kink set, so it is
        psi^n within L/2 of the kinks and psi beyond L. The ladder is walked
        until the second difference test at the test points is strictly
        negative (non-positive when require_strict is False).

        Args:
            psi (Callable): Profile taking chart coordinates.
            seam_distance (Callable): Distance to the kink set, same arguments.
            test_points (array-like): (n, dim) chart points of the smoothing region.
            neighborhood (float): The radius L of the blend region.
            ladder (list[float], optional): Decreasing mollifier widths.
            geometry (str): "flat" (1 or 2 dims) or "spherical" (the section).
            require_strict (bool): Demand strictly negative second differences.
            blend (bool): When False, j = 0 and psi is returned unchanged.

        Returns:
            SmoothedProfile: The first admissible blend.

        Raises:
            NotConcaveError: If psi fails the concavity test on the test points
                or no width of the ladder gives an admissible blend.
        """
        try:
            if geometry not in GEOMETRIES:
                raise InputValidationError(
                    f"Invalid geometry: {geometry}. Valid options are {', '.join(GEOMETRIES)}."
                )
            if ladder is None:
                ladder = constants["TUBE"]["GW_LADDER"]
            points = np.asarray(test_points, dtype=float)
            if points.ndim == 1:
                points = points[:, None]
            dim = points.shape[1]
            if geometry == "spherical" and dim != 2:
                raise InputValidationError("The spherical section takes (s, t) points.")
            tol = constants["TUBE"]["CONCAVITY_TOL"]
            check_step = min(1e-3, 0.125 * min(ladder))
            initial = float(np.max(self._second_differences(psi, points, check_step, geometry)))
            if initial > tol:
                raise NotConcaveError(
                    f"Profile is not concave on the smoothing region, second difference {initial}."
                )
            if not blend:
                return SmoothedProfile(psi, 0.0, -1, initial, 0.0)
            half = 0.5 * neighborhood

            def cutoff(*coords):
                return 1.0 - smoothstep((np.asarray(seam_distance(*coords)) - half) / half)

            for index, width in enumerate(ladder):
                convolved = self._convolution(psi, width, geometry, dim)

                def smoothed(*coords, convolved=convolved):
                    j = np.asarray(cutoff(*coords), dtype=float)
                    base = np.asarray(psi(*coords), dtype=float)
                    result = base.copy()
                    live = j > 0.0
                    if np.any(live):
                        live_coords = [np.broadcast_to(np.asarray(c, dtype=float), j.shape)[live] for c in coords]
                        result[live] = j[live] * convolved(*live_coords) + (1.0 - j[live]) * base[live]
                    return result

                step = min(1e-3, 0.125 * width)
                worst = float(np.max(self._second_differences(smoothed, points, step, geometry)))
                admissible = worst < 0.0 if require_strict else worst <= tol
                logger.info(f"Greene-Wu ladder width {width}: max second difference {worst}.")
                if admissible:
                    far = np.asarray(seam_distance(*points.T)) >= neighborhood
                    deviation = (
                        float(np.max(np.abs(smoothed(*points[far].T) - psi(*points[far].T))))
                        if np.any(far)
                        else 0.0
                    )
                    return SmoothedProfile(smoothed, width, index, worst, deviation)
            raise NotConcaveError(f"No mollifier width in {list(ladder)} gives a concave blend.")
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e
