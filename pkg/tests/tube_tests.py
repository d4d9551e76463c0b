#!/usr/bin/env python
# -*- coding: utf-8 -*-
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
"""Singular geodesic tube test suite
"""

# OS Imports
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Package to test
from orbifoldutils.resolution.exceptions import (
    ChartBoundaryError,
    InputValidationError,
    NotConcaveError,
    SeamMismatchError,
)
from orbifoldutils.resolution.profiles import sine_profile
from orbifoldutils.resolution.tube_operations import TubeChart

RHO = 0.5
LENGTH = 1.2


@pytest.fixture(scope="module")
def eta_2_3(client):
    return client.build_eta(client.smoothing_params(0.3, 1e-3, 2))


class TestCoordinateTransfer:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_axis(self):
        s = np.linspace(0.1, 1.4, 14)
        c = self._client.coordinate_transfer(s, np.zeros_like(s))
        assert np.allclose(c.r, s, atol=1e-15)
        assert not np.any(c.theta)
        assert np.allclose(c.theta_t, 1.0 / np.sin(s), rtol=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(
        s=st.floats(min_value=1e-3, max_value=1.5),
        t=st.floats(min_value=0.0, max_value=1.5),
    )
    def test_relations(self, s, t):
        residuals = self._client.coordinate_transfer(s, t).relation_residuals()
        assert max(residuals.values()) <= 1e-12

    def test_theta_derivative_matches_difference(self):
        s, t, h = 0.4, 0.3, 1e-6
        c = self._client.coordinate_transfer(s, t)
        plus = self._client.coordinate_transfer(s, t + h).theta
        minus = self._client.coordinate_transfer(s, t - h).theta
        assert c.theta_t == pytest.approx(np.sin(s) / c.sin_r**2, rel=1e-14)
        assert (plus - minus) / (2.0 * h) == pytest.approx(c.theta_t, abs=1e-8)

    def test_pole_refused(self):
        with pytest.raises(InputValidationError):
            self._client.coordinate_transfer(0.0, 0.0)

    def test_outside_chart(self):
        with pytest.raises(ChartBoundaryError):
            self._client.coordinate_transfer(np.pi / 2.0, 0.1)

    def test_monotonicity(self):
        report = self._client.monotonicity_check(RHO, RHO)
        assert report["passed"]
        assert report["relations"] <= 1e-12
        assert report["axis_ds_theta"] == 0.0
        assert report["spot_check"] <= 1e-6


class TestKillingField:
    @pytest.fixture(autouse=True)
    def setup(self, client, eta_2_3):
        self._client = client
        self._eta = eta_2_3

    def test_derivative_signs(self):
        report = self._client._tube_ops.killing_derivative_check(self._eta, RHO)
        assert report["passed"]
        assert report["axis_dt_h"] <= 1e-12

    def test_hbar_near_axis(self):
        hbar = self._client.hbar_extension(self._eta, RHO)
        t_exact = np.arctan(np.tan(self._eta.tau_of_delta) * np.sin(0.5 * RHO))
        t = np.linspace(0.0, t_exact, 20)
        assert np.max(np.abs(hbar.value(t) - 0.5 * np.sin(t))) <= 1e-14
        assert hbar.derivative(0.0, 1) == pytest.approx(0.5, abs=1e-12)

    def test_hbar_vanishes_beyond_support(self):
        hbar = self._client.hbar_extension(self._eta, RHO)
        assert not np.any(hbar.value(np.linspace(0.1, 1.0, 30)))

    def test_hbar_rejects_radius(self):
        with pytest.raises(InputValidationError):
            self._client.hbar_extension(self._eta, 2.0)


class TestTubeMetric:
    @pytest.fixture(autouse=True)
    def setup(self, client, eta_2_3):
        self._client = client
        self._eta = eta_2_3
        self._tube = client.spherical_tube(2, length=LENGTH, radius=1.0, rho=RHO)
        self._hbar = client.hbar_extension(eta_2_3, RHO)

    def test_tube_invariants(self):
        with pytest.raises(InputValidationError):
            TubeChart(
                length=LENGTH,
                radius=1.0,
                f=lambda s, t: np.cos(t) * np.ones_like(s),
                phi=lambda s, t: np.sin(t) * np.ones_like(s),
                rho=RHO,
                m=2,
            )
        with pytest.raises(InputValidationError):
            self._client.spherical_tube(2, radius=2.0)

    def test_matches_ball_chart(self):
        deviation = self._client._tube_ops.ball_pullback_check(self._tube, sine_profile(scale=2.0))
        assert deviation <= 1e-10

    def test_resolved_matches_resolved_ball(self):
        quotient = sine_profile(scale=2.0)
        resolved = self._client.resolved_profile(quotient, self._eta)
        s = 0.5 * RHO
        points = [[s, t] for t in (0.01, 0.03, 0.05, 0.08)]
        deviation = self._client._tube_ops.ball_pullback_check(self._tube, resolved, self._hbar, points)
        assert deviation <= 1e-10

    def test_unresolved_curvature(self):
        minimum, _ = self._client.tube_curvature_sweep(self._tube, n=3)
        assert minimum == pytest.approx(1.0, abs=1e-5)

    def test_resolved_curvature_positive(self):
        minimum, _ = self._client.tube_curvature_sweep(self._tube, self._hbar, n=4, t_min=0.02)
        assert minimum > 0.0

    def test_block_structure(self):
        report = self._client._tube_ops.block_structure_check(self._tube, self._hbar, (0.6, 0.05))
        assert report["mixed_relative"] <= 1e-6
        assert report["killing_deviation"] <= 1e-4
        assert report["section_deviation"] <= 1e-4

    def test_coefficients(self):
        s, t = 0.6, 0.3
        g = self._client.tube_metric(self._tube).metric([s, t, 1.0])
        assert np.allclose(g, np.diag([np.cos(t) ** 2, 1.0, (np.sin(t) / 2.0) ** 2]), atol=1e-15)
        resolved = self._client.tube_metric(self._tube, self._hbar).metric([s, t, 1.0])
        psi = np.sin(t) / 2.0 + float(self._hbar.value(t))
        assert resolved[2, 2] == pytest.approx(psi**2, abs=1e-15)
        assert resolved[0, 0] == g[0, 0]

    def test_hbar_hessian(self):
        assert self._client._tube_ops.hbar_hessian_check(self._tube, self._hbar, (0.6, 0.05)) <= 1e-4

    def test_zeta_regularity(self):
        report = self._client._tube_ops.zeta_regularity(self._tube, self._hbar, self._eta)
        assert report["finite"]
        assert report["odd_residual"] <= 1e-8
        assert report["t_max"] == pytest.approx(np.arctan(np.tan(self._eta.tau_of_delta) * np.sin(0.5 * RHO)))

    def test_zeta_axis_limit(self):
        # phi = sin t / 2 and hbar = sin t / 2, so psi = sin t and zeta = -1/3 + 2 t^2 / 45.
        report = self._client._tube_ops.zeta_regularity(self._tube, sine_profile(scale=2.0), t_max=0.02)
        assert report["finite"]
        assert report["roundoff"] <= 1e-9
        assert report["zeta_axis"] == pytest.approx(-1.0 / 3.0, abs=1e-7)
        assert report["max_abs_zeta"] == pytest.approx(1.0 / 3.0, abs=1e-5)
        assert report["odd_residual"] <= 1e-8

    def test_zeta_needs_window(self):
        with pytest.raises(InputValidationError):
            self._client._tube_ops.zeta_regularity(self._tube, self._hbar)

    def test_tau0(self):
        report = self._client.tau0_check(self._tube, 0.2)
        assert report["passed"]
        assert report["T0"] == 1.0
        with pytest.raises(InputValidationError):
            self._client.tau0_check(self._tube, 1.0)


class TestGluing:
    @pytest.fixture(autouse=True)
    def setup(self, client, eta_2_3):
        self._client = client
        self._eta = eta_2_3
        tube_ops = client._tube_ops
        killing = client.killing_extension(eta_2_3, RHO)
        self._phi = lambda s, t: np.sin(t) / 2.0 * np.ones_like(np.asarray(s, dtype=float))
        self._h = tube_ops.section_field(killing)
        self._htilde = tube_ops.section_field(killing, mirror_length=LENGTH)
        self._hbar = client.hbar_extension(eta_2_3, RHO)

    def _glue(self, htilde=None):
        return self._client.psi_min_glue(
            self._phi, self._h, self._hbar, htilde or self._htilde, RHO, LENGTH
        )

    def test_seams_invisible_near_axis(self):
        glued = self._glue()
        t = np.full(5, 0.5 * np.arctan(np.tan(self._eta.tau_of_delta) * np.sin(0.1)))
        s = np.array([0.1, 0.25, 0.6, 0.95, 1.1])
        assert np.max(np.abs(glued(s, t) - np.sin(t))) <= 1e-14

    def test_middle_is_hbar(self):
        glued = self._glue()
        t = np.linspace(0.01, 0.2, 9)
        s = np.full_like(t, 0.6)
        assert np.array_equal(glued(s, t), self._phi(s, t) + self._hbar.value(t))

    def test_seam_mismatch(self):
        shifted = lambda s, t: self._htilde(s, t) + 1e-6
        with pytest.raises(SeamMismatchError):
            self._glue(shifted)

    def test_kinks_confined_to_band(self):
        report = self._client._tube_ops.kink_scan(self._glue(), self._eta, np.linspace(0.02, 0.2, 60))
        assert report["confined"]
        assert report["band"][0] < report["band"][1]

    def test_midpoint_concavity_of_cosine(self):
        worst = self._client._tube_ops.midpoint_concavity(
            lambda s, t: np.cos(s) * np.cos(t), RHO, trials=20000
        )
        assert worst <= 1e-12


class TestGreeneWu:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client
        self._x = np.linspace(-0.5, 0.5, 41)[:, None]

    def test_flat_kink(self):
        psi = lambda x: 1.0 - np.abs(x)
        result = self._client.greene_wu_smooth(
            psi, np.abs, self._x, 0.2, geometry="flat", require_strict=False
        )
        far = np.linspace(2.0 * result.width, 0.5, 20)
        assert np.max(np.abs(result(far) - psi(far))) <= 1e-15
        assert np.max(np.abs(result(-far) - psi(-far))) <= 1e-15
        assert result(np.array([0.0]))[0] < 1.0
        assert result.deviation_outside == 0.0

    def test_smooth_profile_barely_moves(self):
        psi = lambda x: -(x**2)
        result = self._client.greene_wu_smooth(psi, lambda x: np.abs(x), self._x, 0.2, geometry="flat")
        x = self._x[:, 0]
        assert result.max_second_difference < 0.0
        assert np.max(np.abs(result(x) - psi(x))) <= 1e-2

    def test_without_blend(self):
        psi = lambda x: 1.0 - np.abs(x)
        result = self._client._tube_ops.greene_wu_smooth(
            psi, np.abs, self._x, 0.2, geometry="flat", require_strict=False, blend=False
        )
        assert result.func is psi

    def test_convex_profile_refused(self):
        with pytest.raises(NotConcaveError):
            self._client.greene_wu_smooth(lambda x: x**2, np.abs, self._x, 0.2, geometry="flat")

    def test_unknown_geometry(self):
        with pytest.raises(InputValidationError):
            self._client.greene_wu_smooth(lambda x: -(x**2), np.abs, self._x, 0.2, geometry="hyperbolic")

    def test_spherical_section(self):
        s, t = np.meshgrid(np.linspace(0.2, 0.4, 5), np.linspace(0.2, 0.4, 5), indexing="ij")
        points = np.stack((s.ravel(), t.ravel()), axis=-1)
        psi = lambda s, t: np.cos(s) * np.cos(t)
        result = self._client.greene_wu_smooth(psi, lambda s, t: np.abs(s - 0.3), points, 0.1)
        assert result.max_second_difference < 0.0
        assert result.ladder_index >= 0
