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
"""Finite difference curvature oracle on coordinate charts
   2024 Google
"""
# Standard library imports
from dataclasses import replace
import itertools
import logging
import toml
import pkgutil

# Third-party imports
import numpy as np

# Local imports
from .charts import ChartMetric, PlaneSection, circle_invariant_chart, round_sphere_chart
from .exceptions import InputValidationError, OracleDisagreementError

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])

# Bivector order e0^e1, e0^e2, e1^e2.
BIVECTORS = ((0, 1), (0, 2), (1, 2))


class CurvatureOperations:
    """Christoffel symbols, Riemann tensor and derived curvatures by finite differences.

    The sign convention is R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z and
    sec(u, v) = g(R(u,v)v, u) / |u ^ v|^2, so the round sphere has sec = +1.
    """

    def __init__(self, client):
        """Initialize with reference to main client."""
        self._client = client

    def _metric_jet(self, metric: ChartMetric, point):
        """Metric, first and second coordinate derivatives at point.

        Uses 1 + 2 dim + 2 dim (dim - 1) evaluations of g per step: central
        differences for first and pure second derivatives, the four point
        stencil for the mixed ones. With metric.richardson the steps h_fd and
        h_fd / 2 are combined as (4 D(h / 2) - D(h)) / 3.
        """
        point = metric.require_interior(point)
        g0, dg, ddg = self._stencil_jet(metric, point, metric.h_fd)
        if metric.richardson:
            _, dg_half, ddg_half = self._stencil_jet(metric, point, 0.5 * metric.h_fd)
            dg = (4.0 * dg_half - dg) / 3.0
            ddg = (4.0 * ddg_half - ddg) / 3.0
        return g0, dg, ddg

    @staticmethod
    def _stencil_jet(metric: ChartMetric, point, h):
        n = metric.dim
        eye = np.eye(n) * h
        g0 = metric.metric(point)
        plus = [metric.metric(point + eye[k]) for k in range(n)]
        minus = [metric.metric(point - eye[k]) for k in range(n)]
        dg = np.empty((n, n, n))
        ddg = np.empty((n, n, n, n))
        for k in range(n):
            dg[k] = (plus[k] - minus[k]) / (2.0 * h)
            ddg[k, k] = (plus[k] - 2.0 * g0 + minus[k]) / h**2
        for k, l in itertools.combinations(range(n), 2):
            mixed = (
                metric.metric(point + eye[k] + eye[l])
                - metric.metric(point + eye[k] - eye[l])
                - metric.metric(point - eye[k] + eye[l])
                + metric.metric(point - eye[k] - eye[l])
            ) / (4.0 * h**2)
            ddg[k, l] = mixed
            ddg[l, k] = mixed
        return g0, dg, ddg

    @staticmethod
    def _inverse(g, name):
        try:
            return np.linalg.inv(g)
        except np.linalg.LinAlgError as e:
            raise InputValidationError(f"Singular metric matrix on chart {name}: {e}.")

    def _connection(self, metric: ChartMetric, point):
        g, dg, ddg = self._metric_jet(metric, point)
        ginv = self._inverse(g, metric.name)
        # lowered[l, j, k] = d_j g_lk + d_k g_lj - d_l g_jk
        lowered = dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg
        gamma = 0.5 * np.einsum("ml,ljk->mjk", ginv, lowered)
        d_lowered = (
            np.einsum("ijlk->iljk", ddg)
            + np.einsum("iklj->iljk", ddg)
            - ddg
        )
        d_ginv = -np.einsum("ma,iab,bl->iml", ginv, dg, ginv)
        d_gamma = 0.5 * (
            np.einsum("iml,ljk->imjk", d_ginv, lowered)
            + np.einsum("ml,iljk->imjk", ginv, d_lowered)
        )
        return g, gamma, d_gamma

    def christoffel(self, metric: ChartMetric, point):
        """Christoffel symbols Gamma[k, i, j] = Gamma^k_ij at point.

        Args:
            metric (ChartMetric): The chart.
            point (array-like): Chart point at least 2 h_fd inside the chart.

        Returns:
            numpy.ndarray: Array of shape (dim, dim, dim).

        Raises:
            ChartBoundaryError: If the point is too close to the boundary.
            InputValidationError: If the metric matrix is singular.
        """
        try:
            g, dg, _ = self._metric_jet(metric, point)
            ginv = self._inverse(g, metric.name)
            lowered = dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg
            return 0.5 * np.einsum("ml,ljk->mjk", ginv, lowered)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def riemann(self, metric: ChartMetric, point):
        """Lowered Riemann tensor R[i, j, k, l] = g(R(d_i, d_j) d_k, d_l).

        Returns:
            numpy.ndarray: Array of shape (dim, dim, dim, dim) with the symmetries
                R_ijkl = -R_jikl = -R_ijlk = R_klij up to finite difference error.
        """
        try:
            g, gamma, d_gamma = self._connection(metric, point)
            upper = (
                np.einsum("iljk->lijk", d_gamma)
                - np.einsum("jlik->lijk", d_gamma)
                + np.einsum("lim,mjk->lijk", gamma, gamma)
                - np.einsum("ljm,mik->lijk", gamma, gamma)
            )
            return np.einsum("lm,mijk->ijkl", g, upper)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    @staticmethod
    def symmetry_violation(riemann):
        """Largest violation of the four index symmetries of a lowered Riemann tensor."""
        return float(
            max(
                np.max(np.abs(riemann + riemann.transpose(1, 0, 2, 3))),
                np.max(np.abs(riemann + riemann.transpose(0, 1, 3, 2))),
                np.max(np.abs(riemann - riemann.transpose(2, 3, 0, 1))),
            )
        )

    def sectional_curvature(self, metric: ChartMetric, section: PlaneSection):
        """Sectional curvature of the plane spanned by section.u and section.v.

        Raises:
            InputValidationError: If the plane is degenerate.
        """
        try:
            riemann = self.riemann(metric, section.point)
            g = metric.metric(section.point)
            return self._sectional_from(riemann, g, section)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    @staticmethod
    def _sectional_from(riemann, g, section):
        u = np.asarray(section.u, dtype=float)
        v = np.asarray(section.v, dtype=float)
        area = section.area_squared(g)
        uu, _, vv = section.gram(g)
        if area <= constants["ORACLE"]["GRAM_TOL"] * max(uu * vv, 1.0):
            raise InputValidationError(
                f"Degenerate plane, Gram determinant {area} at {section.point}."
            )
        return float(np.einsum("ijkl,i,j,k,l->", riemann, u, v, v, u) / area)

    def coordinate_sectional_curvatures(self, metric: ChartMetric, point):
        """Sectional curvatures of all coordinate planes at point, keyed by index pair."""
        riemann = self.riemann(metric, point)
        g = metric.metric(point)
        eye = np.eye(metric.dim)
        return {
            (i, j): self._sectional_from(riemann, g, PlaneSection(point, eye[i], eye[j]))
            for i, j in itertools.combinations(range(metric.dim), 2)
        }

    def curvature_operator(self, metric: ChartMetric, point, frame):
        """Curvature operator on bivectors of a 3-dim chart in an orthonormal frame.

        Entry ((i,j),(k,l)) is <R(b_i ^ b_j), b_k ^ b_l> = g(R(b_i, b_j) b_l, b_k),
        bivectors ordered b0^b1, b0^b2, b1^b2.

        Args:
            metric (ChartMetric): A 3-dim chart.
            point (array-like): Chart point.
            frame (array-like): 3 x 3 array whose rows are the frame vectors in
                coordinate components.

        Returns:
            tuple: (matrix, eigenvalues sorted ascending).

        Raises:
            InputValidationError: If the chart is not 3-dim or the frame is not
                orthonormal.
        """
        try:
            if metric.dim != 3:
                raise InputValidationError(
                    f"Curvature operator needs a 3-dim chart, got dim {metric.dim}."
                )
            frame = np.asarray(frame, dtype=float)
            g = metric.metric(point)
            gram = frame @ g @ frame.T
            deviation = float(np.max(np.abs(gram - np.eye(3))))
            if deviation > constants["ORACLE"]["FRAME_TOL"]:
                raise InputValidationError(
                    f"Frame is not orthonormal, Gram deviation {deviation}."
                )
            riemann = self.riemann(metric, point)
            in_frame = np.einsum(
                "ijkl,ai,bj,ck,dl->abcd", riemann, frame, frame, frame, frame
            )
            matrix = np.empty((3, 3))
            for row, (i, j) in enumerate(BIVECTORS):
                for col, (k, l) in enumerate(BIVECTORS):
                    matrix[row, col] = in_frame[i, j, l, k]
            matrix = 0.5 * (matrix + matrix.T)
            return matrix, np.sort(np.linalg.eigvalsh(matrix))
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def warped2d_curvature(self, f, r):
        """Curvature -f''(r)/f(r) of dr^2 + f(r)^2 dtheta^2.

        Raises:
            InputValidationError: If f(r) <= 0.
        """
        value = float(f.value(r))
        if value <= 0.0:
            raise InputValidationError(
                f"Warp {f.name} is not positive at r={r} (value {value}), a tip or invalid profile."
            )
        return -float(f.derivative(r, 2)) / value

    def _function_jet(self, func, point, h, n):
        eye = np.eye(n) * h
        f0 = float(func(point))
        plus = np.array([float(func(point + eye[k])) for k in range(n)])
        minus = np.array([float(func(point - eye[k])) for k in range(n)])
        grad = (plus - minus) / (2.0 * h)
        hess = np.empty((n, n))
        for k in range(n):
            hess[k, k] = (plus[k] - 2.0 * f0 + minus[k]) / h**2
        for k, l in itertools.combinations(range(n), 2):
            mixed = (
                float(func(point + eye[k] + eye[l]))
                - float(func(point + eye[k] - eye[l]))
                - float(func(point - eye[k] + eye[l]))
                + float(func(point - eye[k] - eye[l]))
            ) / (4.0 * h**2)
            hess[k, l] = mixed
            hess[l, k] = mixed
        return f0, grad, hess

    def hessian_scalar(self, metric: ChartMetric, func, point):
        """Riemannian Hessian d_i d_j f - Gamma^k_ij d_k f of a scalar field.

        Args:
            metric (ChartMetric): The chart.
            func (Callable): Scalar field taking a chart point.
            point (array-like): Chart point.

        Returns:
            numpy.ndarray: Symmetric dim x dim matrix.
        """
        try:
            point = metric.require_interior(point)
            gamma = self.christoffel(metric, point)
            _, grad, hess = self._function_jet(func, point, metric.h_fd, metric.dim)
            return hess - np.einsum("kij,k->ij", gamma, grad)
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def killing_hessian_check(self, sigma: ChartMetric, phi, ambient=None, points=None, n=6):
        """Max of |-phi Hess(phi)(v,v) - phi^2 sec(X ^ v)| over a section grid.

        X is the Killing field d_alpha of the circle invariant chart
        sigma + phi^2 dalpha^2, and v runs over unit vectors along both
        coordinate directions and their diagonal.

        Args:
            sigma (ChartMetric): 2-dim section chart.
            phi (Callable): Killing length on the section.
            ambient (ChartMetric, optional): The 3-dim chart; built from
                (sigma, phi) when omitted.
            points (array-like, optional): Section points; an n x n grid otherwise.
            n (int): Grid size per coordinate.

        Returns:
            float: The deviation.

        Raises:
            InputValidationError: If phi vanishes on the test region.
        """
        try:
            if ambient is None:
                ambient = circle_invariant_chart(sigma, phi)
            if points is None:
                points = sigma.grid(n, margin=0.05 * min(u - l for l, u in sigma.bounds))
            alpha = 0.5 * sum(ambient.bounds[2])
            killing = np.array([0.0, 0.0, 1.0])
            worst = 0.0
            for point in np.atleast_2d(points):
                length = float(phi(point))
                if length <= 0.0:
                    raise InputValidationError(
                        f"Killing length vanishes at {point}, choose a region off the axis."
                    )
                hess = self.hessian_scalar(sigma, phi, point)
                g = sigma.metric(point)
                full = np.append(point, alpha)
                riemann = self.riemann(ambient, full)
                g_amb = ambient.metric(full)
                for direction in (np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 1.0])):
                    v = direction / np.sqrt(direction @ g @ direction)
                    lhs = -length * float(v @ hess @ v)
                    section = PlaneSection(full, killing, np.append(v, 0.0))
                    rhs = length**2 * self._sectional_from(riemann, g_amb, section)
                    worst = max(worst, abs(lhs - rhs))
            logger.info(f"Killing Hessian check on {sigma.name}: deviation {worst}.")
            return worst
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def self_test(self):
        """Checks that the round 2-sphere has sectional curvature +1.

        Raises:
            OracleDisagreementError: If the oracle returns anything else.
        """
        options = self._client._client_options
        chart = replace(round_sphere_chart(2), h_fd=options._h_fd)
        point = np.array([np.pi / 3.0, np.pi])
        sec = self.sectional_curvature(chart, PlaneSection(point, np.array([1.0, 0.0]), np.array([0.0, 1.0])))
        if abs(sec - 1.0) > constants["ORACLE"]["SELF_TEST_TOL"]:
            raise OracleDisagreementError(
                f"Oracle self-test failed: round sphere curvature {sec}, expected 1."
            )
        violation = self.symmetry_violation(self.riemann(chart, point))
        if violation > options._tol_sym:
            raise OracleDisagreementError(
                f"Oracle self-test failed: Riemann symmetries violated by {violation}."
            )
        logger.debug(f"Oracle self-test passed with curvature {sec}.")
        return sec
