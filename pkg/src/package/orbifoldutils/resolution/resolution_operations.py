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
"""Smoothing family eta, resolved tip profiles and the delta witness search
   2024 Google
"""
# Standard library imports
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple
import logging
import math
import toml
import pkgutil

# Third-party imports
import numpy as np
import pandas as pd
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

# Local imports
from .exceptions import (
    InfeasibleParametersError,
    InputValidationError,
    WitnessNotFoundError,
)
from .profiles import ProfileFunction
from .quotient_operations import HALF_PI, WeightedQuotientProfile, branched_weight, quotient_weight
from .reports import EtaCertificate, PropertyMargin, WitnessReport
from .utils import gauss_legendre, smoothstep, smoothstep_derivatives

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])

EPSILON = constants["ETA"]["EPSILON_SHIFT"]
PROPERTY_NAMES = (
    "i_equals_weighted_sine",
    "ii_increasing",
    "iii_non_increasing",
    "iv_vanishes",
    "v_concavity",
    "vi_small",
    "bounds",
)


@dataclass(frozen=True)
class SmoothingParams:
    """Parameters (tau, delta, w) of one member of the eta family.

    w = 0 is the smooth tip of a Z_1 quotient, where eta vanishes identically.
    """

    tau: float
    delta: float
    weight: float

    def __post_init__(self):
        if not 0.0 < self.tau < 0.25 * np.pi:
            raise InputValidationError(f"tau={self.tau} must lie in (0, pi/4).")
        if not self.delta > 0.0:
            raise InputValidationError(f"delta={self.delta} must be positive.")
        if not 0.0 <= self.weight < 1.0:
            raise InputValidationError(f"weight={self.weight} must lie in [0, 1).")


@dataclass(frozen=True)
class _Bump:
    """The derivative h of the primitive H that eta follows away from the tip.

    h = cos(x + eps) up to tau/3, bends down to a transversal zero at tau/2,
    forms a negative lobe of amplitude A on [tau/2, tau] and vanishes after.
    """

    a: float
    mid: float
    b: float
    lam: float
    amplitude: float

    def _lobe_parts(self, x):
        half = 0.5 * (self.b - self.mid)
        u1 = (x - self.mid) / half
        u2 = (x - self.mid - half) / half
        s1, ds1, dds1 = smoothstep_derivatives(u1)
        s2, ds2, dds2 = smoothstep_derivatives(u2)
        rise = 1.0 + self.amplitude * s1
        fall = 1.0 - s2
        w = rise * fall
        dw = self.amplitude * ds1 / half * fall - rise * ds2 / half
        return w, dw

    def value(self, x):
        x = np.asarray(x, dtype=float)
        result = np.cos(x + EPSILON)
        bend = (x >= self.a) & (x < self.mid)
        if np.any(bend):
            v = (x[bend] - self.a) / (self.mid - self.a)
            result[bend] = np.cos(x[bend] + EPSILON) - self.lam * smoothstep(v)
        lobe = (x >= self.mid) & (x < self.b)
        if np.any(lobe):
            w, _ = self._lobe_parts(x[lobe])
            result[lobe] = (np.cos(x[lobe] + EPSILON) - self.lam) * w
        result[x >= self.b] = 0.0
        return result

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        result = -np.sin(x + EPSILON)
        bend = (x >= self.a) & (x < self.mid)
        if np.any(bend):
            v = (x[bend] - self.a) / (self.mid - self.a)
            _, ds, _ = smoothstep_derivatives(v)
            result[bend] = -np.sin(x[bend] + EPSILON) - self.lam * ds / (self.mid - self.a)
        lobe = (x >= self.mid) & (x < self.b)
        if np.any(lobe):
            w, dw = self._lobe_parts(x[lobe])
            c = np.cos(x[lobe] + EPSILON) - self.lam
            result[lobe] = -np.sin(x[lobe] + EPSILON) * w + c * dw
        result[x >= self.b] = 0.0
        return result


@dataclass(frozen=True)
class EtaFunction:
    """A realization of eta_{tau,delta} together with its construction data.

    Attributes:
        params: The smoothing parameters.
        eta: Profile on [0, pi/2] with analytic derivatives to order 2 and its
            odd extension to negative angles.
        tau_of_delta: Inner radius where eta equals w sin exactly.
        corner: (left, right) ends of the window smoothing the corner of
            min(w sin, H/n).
        n: Divisor of the primitive H.
        certificate: Property name to pass flag, filled by verify_eta.
    """

    params: SmoothingParams
    eta: ProfileFunction
    tau_of_delta: float
    corner: Tuple[float, float]
    n: int
    certificate: Dict[str, bool] = field(default_factory=dict)

    @property
    def certified(self):
        return bool(self.certificate) and all(self.certificate.values())


class _EtaBuilder:
    """Pins every free choice of the eta construction for one parameter set."""

    def __init__(self, params: SmoothingParams, nodes):
        self.params = params
        tau = params.tau
        self.a = tau / 3.0
        self.mid = tau / 2.0
        self.b = tau
        lam = math.cos(self.mid + EPSILON)
        primitive_mid = math.sin(self.mid + EPSILON) - lam * 0.5 * (self.mid - self.a)
        base = _Bump(self.a, self.mid, self.b, lam, 0.0)
        unit = _Bump(self.a, self.mid, self.b, lam, 1.0)
        lobe = lambda x, bump: float(bump.value(np.array([x]))[0])
        j0 = quad(lobe, self.mid, self.b, args=(base,), limit=200, epsabs=1e-15)[0]
        j_unit = quad(lobe, self.mid, self.b, args=(unit,), limit=200, epsabs=1e-15)[0]
        j1 = j_unit - j0
        amplitude = -(primitive_mid + j0) / j1
        if amplitude < 0.0:
            raise InfeasibleParametersError(
                f"Negative lobe amplitude {amplitude} for tau={tau}; the primitive cannot return to 0."
            )
        self.bump = _Bump(self.a, self.mid, self.b, lam, amplitude)
        self._tabulate(nodes)

    def _tabulate(self, nodes):
        x = np.linspace(self.a, self.b, nodes)
        gl_x, gl_w = gauss_legendre(8)
        left, right = x[:-1], x[1:]
        half = 0.5 * (right - left)
        centre = 0.5 * (right + left)
        samples = centre[:, None] + half[:, None] * gl_x[None, :]
        pieces = np.sum(self.bump.value(samples.ravel()).reshape(samples.shape) * gl_w[None, :], axis=1) * half
        primitive = math.sin(self.a + EPSILON) + np.concatenate(([0.0], np.cumsum(pieces)))
        self.h_nodes = self.bump.value(x)
        self.spline = CubicHermiteSpline(x, primitive, self.h_nodes)
        self.grid = x
        self.primitive_nodes = primitive
        self.sup = float(
            np.max(np.abs(primitive) + np.abs(self.h_nodes) + np.abs(self.bump.derivative(x)))
        )
        logger.debug(f"Primitive residual at tau: {primitive[-1]}, sup {self.sup}.")

    def primitive(self, x):
        x = np.asarray(x, dtype=float)
        result = np.sin(x + EPSILON)
        inner = (x >= self.a) & (x < self.b)
        if np.any(inner):
            result[inner] = self.spline(x[inner])
        result[x >= self.b] = 0.0
        return result


def _divisor(builder: _EtaBuilder, params: SmoothingParams):
    by_size = math.ceil(2.0 * builder.sup / params.delta)
    # keeps the corner at or below a/4
    by_corner = math.ceil(
        (math.cos(EPSILON) + math.sin(EPSILON) / math.tan(0.25 * builder.a)) / params.weight
    )
    return max(by_size, by_corner, constants["ETA"]["N_MIN"])


def _assemble(params: SmoothingParams, builder: _EtaBuilder, n: int):
    w = params.weight
    s = math.atan(math.sin(EPSILON) / (n * w - math.cos(EPSILON)))
    mu = constants["ETA"]["CORNER_FRACTION"] * min(s, builder.a - s)
    x0 = s - mu

    def gap(x):
        return w * np.cos(x) - np.cos(x + EPSILON) / n

    def blend(x, x1):
        return smoothstep((x - x0) / (x1 - x0))

    def mismatch(mu2):
        x1 = s + mu2
        lost = quad(lambda x: blend(x, x1) * gap(x), x0, x1, epsabs=1e-18, epsrel=1e-13)[0]
        return w * math.sin(x1) - math.sin(x1 + EPSILON) / n - lost

    lower, upper = 0.25 * mu, 4.0 * mu
    while mismatch(lower) * mismatch(upper) > 0.0:
        lower, upper = 0.5 * lower, 2.0 * upper
        if upper > builder.a - s:
            raise InfeasibleParametersError(
                f"Corner window for tau={params.tau}, delta={params.delta} does not close before tau/3."
            )
    mu2 = brentq(mismatch, lower, upper, xtol=1e-16, rtol=4.0 * np.finfo(float).eps)
    x1 = s + mu2
    base = w * math.sin(x0)

    def window_value(x):
        return base + quad(
            lambda y: w * np.cos(y) - blend(y, x1) * gap(y), x0, x, epsabs=1e-18, epsrel=1e-13
        )[0]

    def value(theta):
        shape = np.shape(theta)
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        sign = np.where(theta < 0.0, -1.0, 1.0)
        x = np.abs(theta)
        result = builder.primitive(x) / n
        tip = x <= x0
        result[tip] = w * np.sin(x[tip])
        inside = (x > x0) & (x < x1)
        if np.any(inside):
            result[inside] = [window_value(xi) for xi in x[inside]]
        return (sign * result).reshape(shape)

    def first(theta):
        shape = np.shape(theta)
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        x = np.abs(theta)
        result = builder.bump.value(x) / n
        tip = x <= x0
        result[tip] = w * np.cos(x[tip])
        inside = (x > x0) & (x < x1)
        if np.any(inside):
            xi = x[inside]
            result[inside] = w * np.cos(xi) - blend(xi, x1) * gap(xi)
        return result.reshape(shape)

    def second(theta):
        shape = np.shape(theta)
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        sign = np.where(theta < 0.0, -1.0, 1.0)
        x = np.abs(theta)
        result = builder.bump.derivative(x) / n
        tip = x <= x0
        result[tip] = -w * np.sin(x[tip])
        inside = (x > x0) & (x < x1)
        if np.any(inside):
            xi = x[inside]
            beta, dbeta, _ = smoothstep_derivatives((xi - x0) / (x1 - x0))
            result[inside] = (
                -(1.0 - beta) * w * np.sin(xi)
                - beta * np.sin(xi + EPSILON) / n
                - dbeta / (x1 - x0) * gap(xi)
            )
        return (sign * result).reshape(shape)

    profile = ProfileFunction(
        domain=(0.0, HALF_PI),
        func=value,
        derivatives=(first, second),
        name=f"eta[{params.tau},{params.delta},{params.weight:.6g}]",
    )
    return EtaFunction(params=params, eta=profile, tau_of_delta=x0, corner=(x0, x1), n=n)


def _zero_eta(params: SmoothingParams):
    """eta = 0 for w = 0: the tip already has slope 1."""

    def zero(theta):
        return np.zeros_like(np.asarray(theta, dtype=float))

    profile = ProfileFunction(
        domain=(0.0, HALF_PI),
        func=zero,
        derivatives=(zero, zero, zero, zero),
        name=f"eta[{params.tau},{params.delta},0]",
    )
    return EtaFunction(params=params, eta=profile, tau_of_delta=params.tau, corner=(0.0, 0.0), n=0)


def property_grid(eta: EtaFunction, n=None, refined=None):
    """Uniform grid of [0, pi/2] merged with a refined grid up to past the corner."""
    if n is None:
        n = constants["ETA"]["GRID"]
    if refined is None:
        refined = constants["ETA"]["REFINED_GRID"]
    x0, x1 = eta.corner
    extra = np.linspace(0.0, x1 + (x1 - x0), refined)
    tau = eta.params.tau
    breakpoints = np.array([tau / 3.0, tau / 2.0, tau])
    return np.unique(np.concatenate((np.linspace(0.0, HALF_PI, n), extra, breakpoints)))


class ResolutionOperations:
    """Builds and certifies eta, resolves tips and searches delta witnesses."""

    def __init__(self, client):
        """Initialize with reference to main client."""
        self._client = client

    def smoothing_params(self, tau, delta, m, mode=None):
        """SmoothingParams with the weight of a Z_m tip in the given weight mode."""
        if mode is None:
            mode = self._client._client_options._weight_mode
        if mode == constants["WEIGHT_MODE"]["QUOTIENT"]:
            weight = quotient_weight(m)
        elif mode == constants["WEIGHT_MODE"]["BRANCHED"]:
            weight = branched_weight(m)
        else:
            raise InputValidationError(
                f"Invalid weight mode: {mode}. Valid options are "
                f"{constants['WEIGHT_MODE']['QUOTIENT']} and {constants['WEIGHT_MODE']['BRANCHED']}."
            )
        return SmoothingParams(tau=tau, delta=delta, weight=weight)

    def build_eta(self, params: SmoothingParams):
        """Constructs eta_{tau,delta} and certifies it.

        The primitive H follows sin(x + eps) up to tau/3, peaks at tau/2 and
        returns to 0 at tau through a negative lobe whose amplitude is solved
        from the vanishing integral. eta is the smoothed minimum of w sin and
        H/n, with n large enough for property (vi) and the corner at the
        intersection smoothed over a window that keeps eta below both.

        Args:
            params (SmoothingParams): The parameters.

        Returns:
            EtaFunction: eta with its certificate.

        Raises:
            InfeasibleParametersError: If the construction or its certificate fails.
        """
        try:
            if params.weight == 0.0:
                eta = _zero_eta(params)
            else:
                builder = _EtaBuilder(params, nodes=4001)
                n = _divisor(builder, params)
                logger.info(
                    f"Building eta for tau={params.tau}, delta={params.delta}, w={params.weight}: n={n}."
                )
                eta = _assemble(params, builder, n)
            certificate = self.verify_eta(eta)
            if not certificate.certified:
                failed = [m.name for m in certificate.margins if not m.passed]
                raise InfeasibleParametersError(
                    f"eta for tau={params.tau}, delta={params.delta} fails properties {failed}."
                )
            return replace(eta, certificate={m.name: m.passed for m in certificate.margins})
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def verify_eta(self, eta: EtaFunction, n=None):
        """Worst case margins of the six eta properties and the bounds 0 <= eta <= delta.

        Equality-type properties are measured against the absolute tolerance
        MARGIN_TOL; property (v) uses eta'' + eta <= 0, equivalent to
        eta''/eta <= -1 where eta > 0.

        Returns:
            EtaCertificate: Per-property margins, certified iff all are positive.
        """
        tol = constants["ETA"]["MARGIN_TOL"]
        params = eta.params
        tau, delta, w = params.tau, params.delta, params.weight
        x = property_grid(eta, n)
        value = np.asarray(eta.eta.value(x))
        first = np.asarray(eta.eta.derivative(x, 1))
        second = np.asarray(eta.eta.derivative(x, 2))

        def worst(mask, values, reducer, default=0.0):
            return float(reducer(values[mask])) if np.any(mask) else default

        tip = x <= eta.tau_of_delta
        rising = (x > 0.0) & (x < 0.5 * tau)
        falling = x >= 0.5 * tau
        vanishing = x >= tau
        concave = (x > 0.0) & (x <= 0.5 * tau)
        tail = x >= tau / 3.0
        margins = [
            tol - worst(tip, np.abs(value - w * np.sin(x)), np.max),
            worst(rising, first, np.min, default=-1.0) if w > 0.0 else tol - worst(rising, np.abs(first), np.max),
            tol - worst(falling, first, np.max),
            tol - worst(vanishing, np.abs(value), np.max),
            tol - worst(concave, second + value, np.max),
            delta - worst(tail, np.abs(value) + np.abs(first) + np.abs(second), np.max),
            min(float(np.min(value)) + tol, delta - float(np.max(value))),
        ]
        certificate = EtaCertificate(
            tau=tau,
            delta=delta,
            weight=w,
            tau_of_delta=eta.tau_of_delta,
            divisor=eta.n,
            grid_size=int(x.size),
            margins=[
                PropertyMargin(name=name, margin=margin, passed=margin > 0.0)
                for name, margin in zip(PROPERTY_NAMES, margins)
            ],
        )
        logger.debug(f"eta margins: {certificate.margins}.")
        return certificate

    def killing_extension(self, eta: EtaFunction, rho):
        """Field h(r, theta) = sin(r) eta(theta) on B_rho.

        Returns:
            Callable: h taking (r, theta) arrays.

        Raises:
            InputValidationError: If rho is not in (0, pi/2).
        """
        if not 0.0 < rho < HALF_PI:
            raise InputValidationError(f"Ball radius rho={rho} must lie in (0, pi/2).")

        def h(r, theta):
            return np.sin(np.asarray(r, dtype=float)) * np.asarray(eta.eta.value(theta))

        return h

    def resolved_profile(self, quotient, eta: Optional[EtaFunction] = None, mode=None):
        """Profile R + eta resolving the theta = 0 tip.

        Args:
            quotient (WeightedQuotientProfile | ProfileFunction): The tip profile.
            eta (EtaFunction, optional): The smoothing; None when the tip is smooth.
            mode (str, optional): Weight mode, selects R or 2R for quotients.

        Returns:
            ProfileFunction: The resolved profile with slope 1 at 0.

        Raises:
            InputValidationError: If the weight of eta does not match 1 - R'(0).
        """
        try:
            if mode is None:
                mode = self._client._client_options._weight_mode
            profile = quotient.tip_profile(mode) if isinstance(quotient, WeightedQuotientProfile) else quotient
            slope = float(profile.derivative(0.0, 1))
            if eta is None:
                if abs(slope - 1.0) > constants["ETA"]["SLOPE_TOL"]:
                    raise InputValidationError(
                        f"Tip slope {slope} of {profile.name} is not 1, an eta is required."
                    )
                return profile
            expected = 1.0 - slope
            if abs(eta.params.weight - expected) > 1e-12:
                raise InputValidationError(
                    f"Weight {eta.params.weight} of eta does not resolve {profile.name}, expected {expected}."
                )
            return profile.sum(eta.eta, name=f"{profile.name}+eta")
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def tip_report(self, resolved: ProfileFunction):
        """Slope and even derivatives of a resolved profile at the tip."""
        second, fourth = resolved.even_derivatives_at(0.0)
        return {
            "value": float(resolved.value(0.0)),
            "slope": float(resolved.derivative(0.0, 1)),
            "second_symmetric": second,
            "fourth_symmetric": fourth,
            "second_analytic": float(resolved.derivative(0.0, 2)),
        }

    def resolved_curvature_sweep(self, quotient, eta: Optional[EtaFunction] = None, n=None, mode=None):
        """Minimum of -(R + eta)''/(R + eta) over the open interval (0, pi/2).

        Returns:
            tuple: (minimum, argmin).
        """
        try:
            resolved = self.resolved_profile(quotient, eta, mode)
            if n is None:
                n = self._client._client_options._eta_grid
            grid = np.linspace(0.0, HALF_PI, n + 2)[1:-1]
            if eta is not None:
                grid = property_grid(eta, n)
                grid = grid[(grid > 0.0) & (grid < HALF_PI)]
            ratio = -np.asarray(resolved.derivative(grid, 2)) / np.asarray(resolved.value(grid))
            index = int(np.argmin(ratio))
            logger.info(f"Resolved curvature of {resolved.name}: min {ratio[index]} at {grid[index]}.")
            return float(ratio[index]), float(grid[index])
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def find_witness(self, quotient: WeightedQuotientProfile, tau, delta_ladder=None, mode=None, floor=None):
        """Walks a descending delta ladder until the resolved curvature clears the floor.

        Args:
            quotient (WeightedQuotientProfile): The weighted quotient.
            tau (float): Support radius of eta.
            delta_ladder (list[float], optional): Descending deltas.
            mode (str, optional): Weight mode.
            floor (float, optional): Required minimum curvature.

        Returns:
            tuple: (WitnessReport, EtaFunction of the witness).

        Raises:
            WitnessNotFoundError: If no delta in the ladder clears the floor.
        """
        try:
            if mode is None:
                mode = self._client._client_options._weight_mode
            if delta_ladder is None:
                delta_ladder = constants["ETA"]["DELTA_LADDER"]
            if floor is None:
                floor = constants["ETA"]["WITNESS_CURVATURE_FLOOR"]
            if list(delta_ladder) != sorted(delta_ladder, reverse=True):
                raise InputValidationError(f"delta ladder {delta_ladder} must be descending.")
            params = [
                self.smoothing_params(tau, delta, quotient.m_minus, mode) for delta in delta_ladder
            ]

            def attempt(p):
                eta = self.build_eta(p)
                minimum, where = self.resolved_curvature_sweep(quotient, eta, mode=mode)
                return eta, minimum, where

            # One delta per worker per window, read in ladder order.
            workers = self._client._utils.thread_count()
            margins = {}
            found = None
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for start in range(0, len(params), workers):
                    window = list(zip(delta_ladder[start:start + workers], params[start:start + workers]))
                    futures = [(delta, pool.submit(attempt, p)) for delta, p in window]
                    for delta, future in futures:
                        try:
                            eta, minimum, where = future.result()
                        except InfeasibleParametersError as e:
                            logger.warning(f"delta={delta} skipped for tau={tau}: {e}")
                            margins[str(delta)] = -np.inf
                            continue
                        margins[str(delta)] = minimum - floor
                        if minimum >= floor:
                            found = (delta, eta, minimum, where)
                            break
                    if found is not None:
                        for _, future in futures:
                            future.cancel()
                        break
            if found is not None:
                delta, eta, minimum, where = found
                tip = self.tip_report(self.resolved_profile(quotient, eta, mode))
                logger.info(f"delta witness {delta} for tau={tau}: min curvature {minimum}.")
                report = WitnessReport(
                    m_minus=quotient.m_minus,
                    m_plus=quotient.m_plus,
                    tau=tau,
                    delta=delta,
                    weight=eta.params.weight,
                    weight_mode=mode,
                    tau_of_delta=eta.tau_of_delta,
                    min_curvature=minimum,
                    argmin=where,
                    tip_slope=tip["slope"],
                    tip_second_derivative=tip["second_analytic"],
                    margins=margins,
                )
                return report, eta
            raise WitnessNotFoundError(
                f"No delta in {list(delta_ladder)} gives curvature >= {floor} for tau={tau}.",
                margins=margins,
            )
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def eta_certificate(self, eta: EtaFunction):
        """JSON model of the parameters, achieved tau(delta) and margins of eta."""
        return self.verify_eta(eta)

    def eta_table(self, eta: EtaFunction, n=None):
        """Table of (theta, eta, eta', eta'') on the property grid.

        Returns:
            pandas.DataFrame: One row per grid angle.
        """
        theta = property_grid(eta, n)
        return pd.DataFrame(
            {
                "theta": theta,
                "eta": eta.eta.value(theta),
                "deta": eta.eta.derivative(theta, 1),
                "ddeta": eta.eta.derivative(theta, 2),
            }
        )

    def resolved_suspension_sweep(self, quotient, eta: Optional[EtaFunction], rho, n=5, mode=None):
        """Smallest curvature operator eigenvalue of the resolved ball chart.

        The ball dr^2 + sin^2 r (dtheta^2 + (R + eta)^2 dalpha^2) is swept away
        from r = 0 and the tips.
        """
        resolved = self.resolved_profile(quotient, eta, mode)
        return self._client._quotient_ops.suspension_curvature_sweep(resolved, rho, n=n)
