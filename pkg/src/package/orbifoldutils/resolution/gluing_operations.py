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
"""Cutoffs, metric blending and the circle action constructions
   2024 Google
"""
# Standard library imports
from dataclasses import dataclass
from typing import Callable, Union
import itertools
import logging
import math
import toml
import pkgutil

# Third-party imports
import numpy as np

# Local imports
from .charts import ChartMetric, warped_chart
from .exceptions import ChartBoundaryError, FirstOrderMismatchError, InputValidationError
from .profiles import ProfileFunction
from .utils import smoothstep, smoothstep_derivative_bounds, smoothstep_derivatives

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])


@dataclass(frozen=True)
class CutoffFunction:
    """phi(x) = S((ln eps - ln x)/(ln eps - ln delta)): 1 on [0, delta], 0 on [eps, inf)."""

    eps: float
    delta: float
    profile: ProfileFunction
    margins: dict

    @property
    def log_width(self):
        return math.log(self.eps / self.delta)

    def __call__(self, x):
        return self.profile.value(x)


def log_cutoff(outer, log_width):
    """Cutoff equal to 1 below outer * exp(-log_width) and 0 above outer."""

    def arg(x):
        x = np.asarray(x, dtype=float)
        safe = np.where(x > 0.0, x, outer)
        u = (math.log(outer) - np.log(safe)) / log_width
        return np.where(x > 0.0, u, 2.0)

    def value(x):
        return smoothstep(arg(x))

    def first(x):
        x = np.asarray(x, dtype=float)
        _, ds, _ = smoothstep_derivatives(arg(x))
        safe = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, -ds / (safe * log_width), 0.0)

    def second(x):
        x = np.asarray(x, dtype=float)
        _, ds, dds = smoothstep_derivatives(arg(x))
        safe = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, dds / (safe * log_width) ** 2 + ds / (safe**2 * log_width), 0.0)

    return ProfileFunction(
        domain=(0.0, 2.0 * outer),
        func=value,
        derivatives=(first, second),
        name=f"cutoff[{outer},{log_width}]",
    )


def space_form_profile(kappa, length=np.pi / 2.0):
    """Warp sn_kappa of the space form of curvature kappa."""
    if kappa > 0.0:
        k = math.sqrt(kappa)
        return ProfileFunction(
            domain=(0.0, length),
            func=lambda r: np.sin(k * r) / k,
            derivatives=(lambda r: np.cos(k * r), lambda r: -k * np.sin(k * r)),
            name=f"sn[{kappa}]",
        )
    if kappa < 0.0:
        k = math.sqrt(-kappa)
        return ProfileFunction(
            domain=(0.0, length),
            func=lambda r: np.sinh(k * r) / k,
            derivatives=(lambda r: np.cosh(k * r), lambda r: k * np.sinh(k * r)),
            name=f"sn[{kappa}]",
        )
    return ProfileFunction(
        domain=(0.0, length),
        func=lambda r: np.asarray(r, dtype=float),
        derivatives=(lambda r: np.ones_like(r), lambda r: np.zeros_like(r)),
        name="sn[0]",
    )


def space_form_normal_metric(sn, y):
    """Space form metric with warp sn in normal coordinates y around the centre.

    G(y) = P + (sn(|y|) / |y|)^2 (I - P) with P the projection on y.
    """
    y = np.asarray(y, dtype=float)
    rho = float(np.linalg.norm(y))
    eye = np.eye(len(y))
    if rho < 1e-8:
        return eye
    radial = np.outer(y, y) / rho**2
    ratio = float(sn.value(rho)) / rho
    return radial + ratio**2 * (eye - radial)


def normal_coordinate_map(gamma, d_gamma, root):
    """Third order normal coordinates y(u) at a point, u the chart offset.

    With Gamma and its derivatives at the point,
    v = u + Gamma(u, u) / 2 + (dGamma + Gamma Gamma)(u, u, u) / 6 inverts the
    geodesic expansion to third order and y = root v, root the square root of g.

    Returns:
        Callable: u -> (y, dy/du).
    """
    n = len(root)
    cubic = np.einsum("akbc->kabc", d_gamma) + np.einsum("kam,mbc->kabc", gamma, gamma)
    cubic = sum(np.transpose(cubic, (0,) + tuple(1 + i for i in order)) for order in itertools.permutations(range(3))) / 6.0

    def chart_to_normal(u):
        u = np.asarray(u, dtype=float)
        v = (
            u
            + 0.5 * np.einsum("kij,i,j->k", gamma, u, u)
            + np.einsum("kabc,a,b,c->k", cubic, u, u, u) / 6.0
        )
        jac = np.eye(n) + np.einsum("kij,j->ki", gamma, u) + 0.5 * np.einsum("kabc,b,c->ka", cubic, u, u)
        return root @ v, root @ jac

    return chart_to_normal


def suspension_chart_3d(profile, name=None):
    """Chart dr^2 + f(r)^2 (dtheta^2 + sin^2 theta dalpha^2) of a rotationally symmetric 3-ball."""
    a, b = profile.domain
    return ChartMetric(
        coords=("r", "theta", "alpha"),
        bounds=((a, b), (0.0, np.pi), (0.0, 2.0 * np.pi)),
        g=lambda p: np.diag(
            [1.0, float(profile.value(p[0])) ** 2, (float(profile.value(p[0])) * np.sin(p[1])) ** 2]
        ),
        periodic=(False, False, True),
        name=name or f"ball3[{profile.name}]",
    )


class GluingOperations:
    """Cutoff, blending and averaging constructions on chart metrics."""

    def __init__(self, client):
        """Initialize with reference to main client."""
        self._client = client

    def build_cutoff(self, eps):
        """Log-scale cutoff with sup |x phi'| <= eps and sup |x^2 phi''| <= eps.

        With L = ln(eps/delta), x phi' = -S'/L and x^2 phi'' = S''/L^2 + S'/L,
        so L is taken as the safety factor times the root of
        sup|S''| y^2 + sup S' y = eps in y = 1/L.

        Args:
            eps (float): Outer radius and derivative budget, in (0, 1).

        Returns:
            CutoffFunction: The cutoff with its measured margins.
        """
        try:
            if not 0.0 < eps < 1.0:
                raise InputValidationError(f"Cutoff radius eps={eps} must lie in (0, 1).")
            first, second = smoothstep_derivative_bounds()
            y = (-first + math.sqrt(first**2 + 4.0 * second * eps)) / (2.0 * second)
            log_width = constants["GLUING"]["CUTOFF_SAFETY"] / y
            delta = eps * math.exp(-log_width)
            profile = log_cutoff(eps, log_width)
            grid = np.geomspace(0.5 * delta, 2.0 * eps, 4001)
            values = np.asarray(profile.value(grid))
            slope = np.max(np.abs(grid * np.asarray(profile.derivative(grid, 1))))
            curve = np.max(np.abs(grid**2 * np.asarray(profile.derivative(grid, 2))))
            margins = {
                "first": eps - float(slope),
                "second": eps - float(curve),
                "inner": 1.0 - float(np.max(np.abs(values[grid <= delta] - 1.0))) if np.any(grid <= delta) else 1.0,
                "outer": 1.0 - float(np.max(np.abs(values[grid >= eps]))),
                "range": float(min(np.min(values), 1.0 - np.max(values))) + 1e-15,
            }
            logger.info(f"Cutoff for eps={eps}: delta={delta}, margins {margins}.")
            return CutoffFunction(eps=eps, delta=delta, profile=profile, margins=margins)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def first_order_mismatch(self, g: ChartMetric, g_tilde: ChartMetric, points):
        """Largest difference of the coefficients and their first derivatives at points."""
        h = g.h_fd
        eye = np.eye(g.dim) * h
        worst = 0.0
        for point in np.atleast_2d(points):
            worst = max(worst, float(np.max(np.abs(g.metric(point) - g_tilde.metric(point)))))
            for k in range(g.dim):
                dg = (g.metric(point + eye[k]) - g.metric(point - eye[k])) / (2.0 * h)
                dgt = (g_tilde.metric(point + eye[k]) - g_tilde.metric(point - eye[k])) / (2.0 * h)
                worst = max(worst, float(np.max(np.abs(dg - dgt))))
        return worst

    def blend_metrics(self, g: ChartMetric, g_tilde: ChartMetric, dist_to_n: Callable, eps, submanifold_points, tol=None):
        """Blend h = psi g_tilde + (1 - psi) g with psi = phi_eps(dist to N).

        Args:
            g (ChartMetric): The metric kept away from N.
            g_tilde (ChartMetric): The metric installed near N, same chart.
            dist_to_n (Callable): Distance to N of a chart point.
            eps (float): Tube radius.
            submanifold_points (array-like): Points of N for the first order check.
            tol (float, optional): Agreement tolerance, tol_match by default.

        Returns:
            ChartMetric: The blended metric.

        Raises:
            FirstOrderMismatchError: If g and g_tilde differ to first order on N.
        """
        try:
            if tol is None:
                tol = self._client._client_options._tol_match
            mismatch = self.first_order_mismatch(g, g_tilde, submanifold_points)
            if mismatch > tol:
                raise FirstOrderMismatchError(
                    f"Metrics {g.name} and {g_tilde.name} differ to first order on N by {mismatch} > {tol}."
                )
            cutoff = self.build_cutoff(eps)

            def blended(p):
                psi = float(cutoff(float(dist_to_n(p))))
                if psi == 0.0:
                    return g.metric(p)
                if psi == 1.0:
                    return g_tilde.metric(p)
                return psi * g_tilde.metric(p) + (1.0 - psi) * g.metric(p)

            logger.info(f"Blending {g_tilde.name} into {g.name} within eps={eps}.")
            return g.with_metric(blended, name=f"blend[{g.name},{g_tilde.name},{eps}]")
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def min_curvature(self, metric: ChartMetric, points):
        """Smallest sectional curvature over points; coordinate planes in dim 2, operator eigenvalue in dim 3."""
        curvature_ops = self._client._curvature_ops
        minimum = np.inf
        for point in np.atleast_2d(points):
            if metric.dim == 2:
                value = curvature_ops.coordinate_sectional_curvatures(metric, point)[(0, 1)]
            else:
                frame = np.linalg.cholesky(np.linalg.inv(metric.metric(point))).T
                value = curvature_ops.curvature_operator(metric, point, frame)[1][0]
            minimum = min(minimum, float(value))
        return minimum

    def _cap_log_width(self, kappa, base_curvature, eps, name):
        if kappa < base_curvature - constants["GLUING"]["TOL_MATCH_SAMPLED"]:
            raise InputValidationError(
                f"Cap curvature {kappa} is below the curvature {base_curvature} of {name} at the centre."
            )
        sup_first, _ = smoothstep_derivative_bounds()
        return max(
            1.0,
            constants["GLUING"]["CUTOFF_SAFETY"] * 4.0 * sup_first * abs(kappa - base_curvature) / (3.0 * eps),
        )

    def _cap_profile(self, profile: ProfileFunction, kappa, eps, radius, dim):
        if dim not in (2, 3):
            raise InputValidationError(f"Cap dimension {dim} must be 2 or 3.")
        if not 0.0 < radius < profile.domain[1]:
            raise ChartBoundaryError(
                f"Cap radius {radius} does not fit the chart [0, {profile.domain[1]}]."
            )
        r0 = 1e-3
        base_curvature = -float(profile.derivative(r0, 2)) / float(profile.value(r0))
        log_width = self._cap_log_width(kappa, base_curvature, eps, profile.name)
        cutoff = log_cutoff(radius, log_width)
        model = space_form_profile(kappa, profile.domain[1])

        def warp(r):
            psi = np.asarray(cutoff.value(r))
            return np.sqrt(psi * np.asarray(model.value(r)) ** 2 + (1.0 - psi) * np.asarray(profile.value(r)) ** 2)

        capped = ProfileFunction(domain=profile.domain, func=warp, name=f"cap[{profile.name},{kappa}]")
        inner = radius * math.exp(-log_width)
        logger.info(f"Curvature {kappa} cap on {profile.name}: ball radius {inner}, log width {log_width}.")
        chart = warped_chart(capped) if dim == 2 else suspension_chart_3d(capped)
        return chart, inner

    def _cap_chart(self, g: ChartMetric, p, kappa, eps, radius):
        p = g.require_interior(p)
        g0 = g.metric(p)
        eigenvalues, vectors = np.linalg.eigh(0.5 * (g0 + g0.T))
        root = vectors @ np.diag(np.sqrt(eigenvalues)) @ vectors.T
        g.require_interior(p, margin=radius / math.sqrt(eigenvalues[0]) + 2.0 * g.h_fd)
        if kappa > 0.0 and radius >= 0.5 * np.pi / math.sqrt(kappa):
            raise InputValidationError(
                f"Cap radius {radius} does not fit inside the curvature {kappa} hemisphere."
            )
        base_curvature = self.min_curvature(g, [p])
        log_width = self._cap_log_width(kappa, base_curvature, eps, g.name)
        cutoff = log_cutoff(radius, log_width)
        _, gamma, d_gamma = self._client._curvature_ops._connection(g, p)
        chart_to_normal = normal_coordinate_map(gamma, d_gamma, root)
        sn = space_form_profile(kappa, 2.0 * radius)
        periods = np.array([upper - lower if wraps else 0.0 for (lower, upper), wraps in zip(g.bounds, g.periodic)])

        def offset(x):
            u = np.asarray(x, dtype=float) - p
            wrapped = periods > 0.0
            u[wrapped] = (u[wrapped] + 0.5 * periods[wrapped]) % periods[wrapped] - 0.5 * periods[wrapped]
            return u

        def capped(x):
            u = offset(x)
            psi = float(cutoff(float(np.linalg.norm(root @ u))))
            if psi == 0.0:
                return g.metric(x)
            y, jac = chart_to_normal(u)
            model = jac.T @ space_form_normal_metric(sn, y) @ jac
            if psi == 1.0:
                return model
            return psi * model + (1.0 - psi) * g.metric(x)

        inner = radius * math.exp(-log_width)
        logger.info(f"Curvature {kappa} cap on {g.name} at {p}: ball radius {inner}, log width {log_width}.")
        return g.with_metric(capped, name=f"cap[{g.name},{kappa}]"), inner

    def constant_curvature_cap(
        self,
        g: Union[ChartMetric, ProfileFunction],
        p,
        kappa,
        eps,
        radius,
        dim=2,
    ):
        """Installs constant curvature kappa on a ball around p.

        A ChartMetric is read in third order normal coordinates at p. The
        space form metric of curvature kappa, pulled back through them,
        agrees with g to first order at p and is blended in as
        psi g_kappa + (1 - psi) g, psi a log-scale cutoff in the g(p) length
        of the chart offset from radius down to radius * exp(-L).

        A ProfileFunction f stands for the polar chart dr^2 + f(r)^2 dtheta^2
        (or its 3-dim suspension form, see dim) centred at r = 0, already in
        normal coordinates, and p must be None. There the warp is blended as
        psi sn_kappa^2 + (1 - psi) f^2.

        L is chosen so that the transition loses at most eps of curvature:
        the loss is bounded by (4/3) sup S' |kappa - K(p)| / L.

        Returns:
            tuple: (ChartMetric, inner radius of the curvature kappa ball).

        Raises:
            ChartBoundaryError: If the radius does not fit the chart.
            InputValidationError: If kappa is below the curvature at p.
        """
        try:
            if isinstance(g, ProfileFunction):
                if p is not None:
                    raise InputValidationError("A profile cap is centred at the tip r = 0, pass p=None.")
                return self._cap_profile(g, kappa, eps, radius, dim)
            if p is None:
                raise InputValidationError(f"Cap on chart {g.name} needs a centre point p.")
            return self._cap_chart(g, p, kappa, eps, radius)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def require_invariant(self, chart: ChartMetric, coord, points, shifts=8):
        """Raises InputValidationError if the coefficients depend on the angle coord."""
        k = chart.index(coord)
        lower, upper = chart.bounds[k]
        worst = 0.0
        for point in np.atleast_2d(points):
            reference = chart.metric(point)
            for shift in np.linspace(0.0, upper - lower, shifts, endpoint=False)[1:]:
                moved = np.array(point, dtype=float)
                moved[k] = lower + (moved[k] - lower + shift) % (upper - lower)
                worst = max(worst, float(np.max(np.abs(chart.metric(moved) - reference))))
        if worst > 1e-12 * max(1.0, float(np.max(np.abs(chart.metric(np.atleast_2d(points)[0]))))):
            raise InputValidationError(f"Chart {chart.name} depends on {coord}: deviation {worst}.")
        return worst

    def drop_cross_term(self, chart: ChartMetric, points=None):
        """Sets the g_{t theta} coefficient of a circle invariant (t, r, theta) chart to 0.

        Raises:
            InputValidationError: If the chart is not (t, r, theta) or depends on theta.
        """
        try:
            if chart.coords != ("t", "r", "theta"):
                raise InputValidationError(f"drop_cross_term needs coordinates (t, r, theta), got {chart.coords}.")
            if points is None:
                points = chart.grid(3, margin=0.1 * (chart.bounds[1][1] - chart.bounds[1][0]))
            self.require_invariant(chart, "theta", points)

            def polar(p):
                g = np.array(chart.metric(p), dtype=float)
                g[0, 2] = g[2, 0] = 0.0
                return g

            return chart.with_metric(polar, name=f"{chart.name}.polar")
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def fermi_cartesian(self, chart: ChartMetric, half_width=None):
        """The (t, r, theta) chart written in Cartesian normal coordinates (t, x, y)."""
        if half_width is None:
            half_width = 0.5 * chart.bounds[1][1]

        def g(p):
            t, x, y = p
            r = math.hypot(x, y)
            theta = math.atan2(y, x) % (2.0 * np.pi)
            jac = np.array(
                [
                    [1.0, 0.0, 0.0],
                    [0.0, x / r, y / r],
                    [0.0, -y / r**2, x / r**2],
                ]
            )
            return jac.T @ chart.metric(np.array([t, r, theta])) @ jac

        return ChartMetric(
            coords=("t", "x", "y"),
            bounds=(chart.bounds[0], (-half_width, half_width), (-half_width, half_width)),
            g=g,
            h_fd=chart.h_fd,
            name=f"{chart.name}.cartesian",
        )

    def cross_term_report(self, chart: ChartMetric, polar: ChartMetric, t_values, r=1e-2, offset=None):
        """How closely the chart and its polar version agree along the axis r = 0.

        Returns:
            dict: Vanishing order in r of g_{t theta} and of the Cartesian cross
                coefficient g_{t theta}/r, and the largest change of the
                coordinate sectional curvatures at points next to the axis.
        """
        t_values = np.atleast_1d(np.asarray(t_values, dtype=float))
        theta = 0.5 * np.pi

        def cross(t, radius):
            return abs(float(chart.metric(np.array([t, radius, theta]))[0, 2]))

        orders = []
        for t in t_values:
            big, small = cross(t, r), cross(t, 0.5 * r)
            orders.append(math.log2(big / small) if small > 0.0 else np.inf)
        polar_order = float(np.min(orders))
        if offset is None:
            offset = 3.0 * chart.h_fd
        curvature_ops = self._client._curvature_ops
        original = self.fermi_cartesian(chart)
        dropped = self.fermi_cartesian(polar)
        change = 0.0
        for t in t_values:
            point = np.array([t, offset, 0.0])
            before = curvature_ops.coordinate_sectional_curvatures(original, point)
            after = curvature_ops.coordinate_sectional_curvatures(dropped, point)
            change = max(change, max(abs(before[k] - after[k]) for k in before))
        report = {
            "polar_order": polar_order,
            "cartesian_order": polar_order - 1.0,
            "second_order_agreement": polar_order - 1.0 >= 2.5,
            "axis_curvature_change": change,
        }
        logger.info(f"Cross term report for {chart.name}: {report}.")
        return report

    def average_circle_action(self, chart: ChartMetric, coord="theta", nodes=None):
        """h = (2 pi)^-1 int theta^* g dtheta, by the trapezoid rule over the angle.

        The action translates the angle coordinate, so the pullback keeps the
        coordinate coefficients and the average is over shifted points.
        """
        try:
            k = chart.index(coord)
            if not chart.periodic[k]:
                raise InputValidationError(f"Coordinate {coord} of chart {chart.name} is not a full angle.")
            if nodes is None:
                nodes = constants["GLUING"]["ANGULAR_NODES"]
            lower, upper = chart.bounds[k]
            shifts = (upper - lower) * np.arange(nodes) / nodes

            def averaged(p):
                p = np.asarray(p, dtype=float)
                total = np.zeros((chart.dim, chart.dim))
                for shift in shifts:
                    moved = p.copy()
                    moved[k] = lower + (p[k] - lower + shift) % (upper - lower)
                    total += chart.metric(moved)
                return total / nodes

            return chart.with_metric(averaged, name=f"{chart.name}.averaged")
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e
