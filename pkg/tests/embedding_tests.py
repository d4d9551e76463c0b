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
"""Embedding and convex cone test suite
"""

# OS Imports
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Package to test
from orbifoldutils.resolution.embedding_operations import RevolutionMetric, cone_profile
from orbifoldutils.resolution.exceptions import (
    ChartBoundaryError,
    InputValidationError,
    RigidityCaseError,
)
from orbifoldutils.resolution.profiles import ProfileFunction, sine_profile

NORTH = np.array([0.0, 0.0, 0.0, 1.0])


def _football_longitude(r):
    return np.pi / 6.0 - np.arctan(np.cos(2.0 * np.asarray(r)) / math.sqrt(3.0))


@pytest.fixture(scope="module")
def football(client):
    metric = client.revolution_metric(sine_profile(scale=2.0, frequency=2.0))
    return metric, client.solve_embedding_ode(metric)


class TestRevolutionMetric:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_football_hypotheses(self, football):
        metric, _ = football
        assert metric.d == pytest.approx(np.pi / 2.0)
        assert metric.curvature_margin() == pytest.approx(3.0, abs=1e-9)
        assert metric.energy_excess() <= 1e-12

    def test_wrong_slope_refused(self):
        with pytest.raises(InputValidationError):
            self._client.revolution_metric(sine_profile(frequency=2.0))

    def test_open_end_refused(self):
        with pytest.raises(InputValidationError):
            self._client.revolution_metric(sine_profile(), d=1.0)

    def test_tip_distance_range(self):
        with pytest.raises(InputValidationError):
            RevolutionMetric(d=4.0, R=sine_profile(length=4.0))

    def test_curvature_below_one_refused(self):
        # sin(2r)/4 + sin(4r)/8 is cubic at the far tip
        R = sine_profile(scale=4.0, frequency=2.0).sum(sine_profile(scale=8.0, frequency=4.0))
        with pytest.raises(InputValidationError):
            self._client.revolution_metric(R)


class TestEmbeddingODE:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_football_pullback(self, football):
        metric, curve = football
        assert self._client.pullback_check(metric, curve) <= 1e-8
        assert np.max(np.abs(curve.table()["pullback_residual"])) <= 1e-8

    def test_football_closed_form(self, football):
        _, curve = football
        assert curve.values[-1] == pytest.approx(np.pi / 3.0, abs=1e-10)
        assert np.max(np.abs(curve.values - _football_longitude(curve.nodes))) <= 1e-10

    @pytest.mark.parametrize("kappa", [1.5, 2.0, 3.0])
    def test_constant_curvature_pullback(self, kappa):
        root = math.sqrt(kappa)
        metric = self._client.revolution_metric(sine_profile(scale=root, frequency=root))
        curve = self._client.solve_embedding_ode(metric)
        assert self._client.pullback_check(metric, curve) <= 1e-8

    def test_points_on_unit_sphere(self, football):
        _, curve = football
        r = np.linspace(0.0, np.pi / 2.0, 33)
        for theta in (0.0, 1.0, 4.0):
            assert np.max(np.abs(np.linalg.norm(curve.point(r, theta), axis=-1) - 1.0)) <= 1e-12

    def test_fourth_order(self, football):
        metric, _ = football
        steps = [1.001 * metric.d / count for count in (16, 32, 64)]
        report = self._client._embedding_ops.integration_order(metric, _football_longitude, steps)
        ratios = report["ratio"].dropna()
        assert len(ratios) == 2
        assert np.all(np.log2(ratios) > 3.6)
        assert np.all(np.log2(ratios) < 4.4)

    def test_round_sphere_is_rigid(self):
        metric = self._client.revolution_metric(sine_profile())
        with pytest.raises(RigidityCaseError):
            self._client.solve_embedding_ode(metric)

    def test_immersion(self, football):
        _, curve = football
        report = self._client.immersion_check(curve)
        assert report["immersion"]
        assert report["min_singular_value"] > 1e-3
        assert report["embedded"] is None


class TestBeltrami:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    @settings(max_examples=50, deadline=None)
    @given(
        tangent=st.lists(st.floats(-1.0, 1.0), min_size=3, max_size=3),
        height=st.floats(0.1, 1.0),
    )
    def test_round_trip(self, tangent, height):
        q = np.append(tangent, height)
        q = q / np.linalg.norm(q)
        x = self._client.beltrami(NORTH, q[None, :])
        assert x[0, 3] == pytest.approx(1.0, abs=1e-12)
        back = self._client.beltrami_inverse(NORTH, x)
        assert np.max(np.abs(back[0] - q)) <= 1e-12

    def test_half_right_angle(self):
        q = np.array([[1.0, 0.0, 0.0, 1.0]]) / math.sqrt(2.0)
        x = self._client.beltrami(NORTH, q)
        assert np.linalg.norm(x[0] - NORTH) == pytest.approx(1.0, abs=1e-12)

    def test_great_circle_refused(self):
        with pytest.raises(ChartBoundaryError):
            self._client.beltrami(NORTH, np.array([[1.0, 0.0, 0.0, 0.0]]))

    def test_off_plane_refused(self):
        with pytest.raises(ChartBoundaryError):
            self._client.beltrami_inverse(NORTH, np.array([[0.0, 0.0, 0.0, 2.0]]))


class TestConvexMollify:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    @pytest.fixture(scope="class")
    def mollified_cone(self, client):
        return client.convex_mollify(cone_profile(1.0), n=10.0, r=0.4, upper=1.0)

    def test_tip_lifted(self, mollified_cone):
        assert mollified_cone.value(0.0) > 0.0

    def test_unchanged_outside_blend(self, mollified_cone):
        rho = np.linspace(0.4, 1.0, 13)
        assert np.array_equal(mollified_cone.value(rho), rho)

    def test_dominates_cone(self, mollified_cone):
        rho = np.linspace(0.0, 0.4, 41)
        assert np.all(np.asarray(mollified_cone.value(rho)) >= rho - 1e-12)

    def test_midpoint_convexity(self, mollified_cone, seed):
        gap = self._client._embedding_ops.midpoint_convexity(mollified_cone, 1.0, r=0.4, trials=20000, seed=seed)
        assert gap <= 1e-10

    def test_concave_profile_detected(self, seed):
        concave = ProfileFunction(domain=(0.0, 1.0), func=lambda x: -(x**2), name="concave")
        gap = self._client._embedding_ops.midpoint_convexity(concave, 1.0, trials=1000, seed=seed)
        assert gap > 1e-5
        with pytest.raises(InputValidationError):
            self._client.convex_mollify(concave, n=10.0, r=0.4)

    def test_invalid_index(self):
        with pytest.raises(InputValidationError):
            self._client.convex_mollify(cone_profile(1.0), n=0.0, r=0.4)


class TestConeFromTip:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_smooth_tip_is_flat(self):
        assert self._client.cone_from_tip(1.0).mean_slope == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("k", [2, 3, 5])
    def test_cyclic_tip(self, k):
        cone = self._client.cone_from_tip(1.0 / k)
        assert cone.mean_slope == pytest.approx(math.sqrt(k**2 - 1.0), rel=1e-12)
        assert cone.spread == 0.0
        assert cone.radial_deviation <= 1e-12

    def test_invalid_weight(self):
        with pytest.raises(InputValidationError):
            self._client.cone_from_tip(1.5)

    def test_football_link(self, football):
        metric, curve = football
        cone = self._client.cone_from_tip(metric, curve)
        assert cone.mean_slope == pytest.approx(math.sqrt(3.0), abs=1e-6)
        assert cone.spread <= 1e-6
