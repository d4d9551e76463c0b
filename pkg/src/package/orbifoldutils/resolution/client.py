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
"""Orbifold resolution toolkit main client
   2024 Google
"""
from .version import __version__

# Standard library imports
import logging
import toml
import pkgutil

# Local imports
from .client_options import ClientOptions
from .curvature_operations import CurvatureOperations
from .quotient_operations import QuotientOperations, WeightedQuotientProfile
from .resolution_operations import ResolutionOperations
from .tube_operations import TubeOperations
from .gluing_operations import GluingOperations
from .embedding_operations import EmbeddingOperations
from .gh_operations import GHOperations
from .utils import ResolutionUtils

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])


class Client:
    """Represents the main resolution toolkit client."""

    def __init__(self, client_options: ClientOptions = None):
        if client_options:
            self._client_options = client_options
        else:
            self._client_options = ClientOptions()

        # Initialize operation classes
        self._utils = ResolutionUtils(self)
        self._curvature_ops = CurvatureOperations(self)
        self._quotient_ops = QuotientOperations(self)
        self._resolution_ops = ResolutionOperations(self)
        self._tube_ops = TubeOperations(self)
        self._gluing_ops = GluingOperations(self)
        self._embedding_ops = EmbeddingOperations(self)
        self._gh_ops = GHOperations(self)

        if self._client_options._run_self_test:
            self._curvature_ops.self_test()
        logger.debug(f"Client {__version__} ready with options {self._client_options.to_dict()}.")

    # Delegate all operations to appropriate operation classes
    def christoffel(self, metric, point):
        return self._curvature_ops.christoffel(metric, point)

    def riemann(self, metric, point):
        return self._curvature_ops.riemann(metric, point)

    def sectional_curvature(self, metric, section):
        return self._curvature_ops.sectional_curvature(metric, section)

    def curvature_operator(self, metric, point, frame):
        return self._curvature_ops.curvature_operator(metric, point, frame)

    def warped2d_curvature(self, f, r):
        return self._curvature_ops.warped2d_curvature(f, r)

    def hessian_scalar(self, metric, func, point):
        return self._curvature_ops.hessian_scalar(metric, func, point)

    def killing_hessian_check(self, sigma, phi, ambient=None, points=None, n=6):
        return self._curvature_ops.killing_hessian_check(sigma, phi, ambient, points, n)

    def weighted_quotient(self, m_minus, m_plus):
        return WeightedQuotientProfile.build(m_minus, m_plus)

    def quotient_profile(self, m_minus, m_plus, theta):
        return self._quotient_ops.quotient_profile(m_minus, m_plus, theta)

    def quotient_curvature(self, m_minus, m_plus, theta, method="closed_form"):
        return self._quotient_ops.quotient_curvature(m_minus, m_plus, theta, method)

    def curvature_gap(self, m_minus, m_plus, n=None):
        return self._quotient_ops.curvature_gap(m_minus, m_plus, n)

    def endpoint_report(self, m_minus, m_plus):
        return self._quotient_ops.endpoint_report(m_minus, m_plus)

    def zk_directions_metric(self, k):
        return self._quotient_ops.zk_directions_metric(k)

    def tip_cone_angle(self, metric, r0=1e-3):
        return self._quotient_ops.tip_cone_angle(metric, r0)

    def suspension_distance(self, d_base, first, second):
        return self._quotient_ops.suspension_distance(d_base, first, second)

    def cone_distance(self, d_base, first, second):
        return self._quotient_ops.cone_distance(d_base, first, second)

    def ball_suspension_metric(self, profile, rho):
        return self._quotient_ops.ball_suspension_metric(profile, rho)

    def profile_table(self, m_minus, m_plus, n=None):
        return self._quotient_ops.profile_table(m_minus, m_plus, n)

    def smoothing_params(self, tau, delta, m, mode=None):
        return self._resolution_ops.smoothing_params(tau, delta, m, mode)

    def build_eta(self, params):
        return self._resolution_ops.build_eta(params)

    def verify_eta(self, eta, n=None):
        return self._resolution_ops.verify_eta(eta, n)

    def killing_extension(self, eta, rho):
        return self._resolution_ops.killing_extension(eta, rho)

    def resolved_profile(self, quotient, eta=None, mode=None):
        return self._resolution_ops.resolved_profile(quotient, eta, mode)

    def resolved_curvature_sweep(self, quotient, eta=None, n=None, mode=None):
        return self._resolution_ops.resolved_curvature_sweep(quotient, eta, n, mode)

    def find_witness(self, quotient, tau, delta_ladder=None, mode=None, floor=None):
        return self._resolution_ops.find_witness(quotient, tau, delta_ladder, mode, floor)

    def eta_certificate(self, eta):
        return self._resolution_ops.eta_certificate(eta)

    def eta_table(self, eta, n=None):
        return self._resolution_ops.eta_table(eta, n)

    def resolved_suspension_sweep(self, quotient, eta, rho, n=5, mode=None):
        return self._resolution_ops.resolved_suspension_sweep(quotient, eta, rho, n, mode)

    def coordinate_transfer(self, s, t):
        return self._tube_ops.coordinate_transfer(s, t)

    def monotonicity_check(self, rho, radius, n=256):
        return self._tube_ops.monotonicity_check(rho, radius, n)

    def hbar_extension(self, eta, rho):
        return self._tube_ops.hbar_extension(eta, rho)

    def spherical_tube(self, m, length=1.2, radius=1.0, rho=0.5):
        return self._tube_ops.spherical_tube(m, length, radius, rho)

    def tube_metric(self, tube, hbar=None):
        return self._tube_ops.tube_metric(tube, hbar)

    def tube_curvature_sweep(self, tube, hbar=None, n=6, t_min=0.05):
        return self._tube_ops.tube_curvature_sweep(tube, hbar, n, t_min)

    def tau0_check(self, tube, tau0, n=64):
        return self._tube_ops.tau0_check(tube, tau0, n)

    def psi_min_glue(self, phi, h, hbar, htilde, rho, length, t_grid=None):
        return self._tube_ops.psi_min_glue(phi, h, hbar, htilde, rho, length, t_grid)

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
        return self._tube_ops.greene_wu_smooth(
            psi, seam_distance, test_points, neighborhood, ladder, geometry, require_strict, blend
        )

    def build_cutoff(self, eps):
        return self._gluing_ops.build_cutoff(eps)

    def blend_metrics(self, g, g_tilde, dist_to_n, eps, submanifold_points, tol=None):
        return self._gluing_ops.blend_metrics(g, g_tilde, dist_to_n, eps, submanifold_points, tol)

    def constant_curvature_cap(self, g, p, kappa, eps, radius, dim=2):
        return self._gluing_ops.constant_curvature_cap(g, p, kappa, eps, radius, dim)

    def drop_cross_term(self, chart, points=None):
        return self._gluing_ops.drop_cross_term(chart, points)

    def average_circle_action(self, chart, coord="theta", nodes=None):
        return self._gluing_ops.average_circle_action(chart, coord, nodes)

    def revolution_metric(self, R, d=None):
        return self._embedding_ops.revolution_metric(R, d)

    def solve_embedding_ode(self, metric, step=None):
        return self._embedding_ops.solve_embedding_ode(metric, step)

    def pullback_check(self, metric, curve, n=None):
        return self._embedding_ops.pullback_check(metric, curve, n)

    def immersion_check(self, curve, n=256, angles=8):
        return self._embedding_ops.immersion_check(curve, n, angles)

    def beltrami(self, center, q):
        return self._embedding_ops.beltrami(center, q)

    def beltrami_inverse(self, center, x):
        return self._embedding_ops.beltrami_inverse(center, x)

    def convex_mollify(self, profile, n, r, upper=None, nodes=None):
        return self._embedding_ops.convex_mollify(profile, n, r, upper, nodes)

    def cone_from_tip(self, link, curve=None, n=128, angles=32):
        return self._embedding_ops.cone_from_tip(link, curve, n, angles)

    def surface_distances(self, profile, n=None, n_alpha=None, subsample=None):
        return self._gh_ops.surface_distances(profile, n, n_alpha, subsample)

    def gh_upper_bound(self, first, second, correspondence=None):
        return self._gh_ops.gh_upper_bound(first, second, correspondence)

    def convergence_study(self, m_minus, m_plus, tau_ladder=None, delta_ladder=None, n=None, mode=None, floor=None):
        return self._gh_ops.convergence_study(m_minus, m_plus, tau_ladder, delta_ladder, n, mode, floor)
