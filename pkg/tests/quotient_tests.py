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
"""Weighted quotient model test suite
"""

# OS Imports
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Package to test
from orbifoldutils.resolution.exceptions import InputValidationError
from orbifoldutils.resolution.profiles import sine_profile
from orbifoldutils.resolution.quotient_operations import (
    HALF_PI,
    SuspensionSpace,
    WeightedQuotientProfile,
    branched_weight,
    constants,
    quotient_weight,
    weighted_curvature,
)

WEIGHT_PAIRS = [(1, 1), (1, 2), (2, 3), (3, 4), (2, 5)]


class TestWeightedQuotientProfile:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    @pytest.mark.parametrize("m_minus, m_plus", WEIGHT_PAIRS)
    def test_endpoints(self, m_minus, m_plus):
        report = self._client.endpoint_report(m_minus, m_plus)
        assert report["R_0"] == 0.0
        assert report["R_half_pi"] == 0.0
        assert report["slope_0"] == pytest.approx(1.0 / m_minus, abs=1e-10)
        assert abs(report["slope_half_pi"]) == pytest.approx(1.0 / m_plus, abs=1e-10)

    @pytest.mark.parametrize("m_minus, m_plus", WEIGHT_PAIRS)
    def test_even_derivatives_vanish_at_tips(self, m_minus, m_plus):
        report = self._client.endpoint_report(m_minus, m_plus)
        for key in ("second_0", "fourth_0", "second_half_pi", "fourth_half_pi"):
            assert abs(report[key]) <= 1e-6
        assert report["passed"]

    @pytest.mark.parametrize("m_minus, m_plus", WEIGHT_PAIRS)
    def test_positive_inside(self, m_minus, m_plus):
        theta = np.linspace(1e-3, HALF_PI - 1e-3, 257)
        assert np.all(self._client.quotient_profile(m_minus, m_plus, theta) > 0.0)

    def test_known_values(self):
        assert self._client.quotient_profile(1, 1, np.pi / 4.0) == pytest.approx(0.5, abs=1e-15)
        assert self._client.quotient_profile(2, 3, np.pi / 4.0) == pytest.approx(1.0 / np.sqrt(26.0), abs=1e-15)
        assert self._client.quotient_profile(2, 3, 0.0) == 0.0

    @pytest.mark.parametrize("m_minus, m_plus", [(2, 2), (2, 4), (3, 6), (0, 1)])
    def test_invalid_weights(self, m_minus, m_plus):
        with pytest.raises(InputValidationError):
            self._client.weighted_quotient(m_minus, m_plus)

    def test_angle_outside_domain(self):
        with pytest.raises(InputValidationError):
            self._client.quotient_profile(1, 2, 2.0)


class TestQuotientCurvature:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_hopf_quotient_is_constant_four(self):
        theta = np.linspace(0.0, HALF_PI, 33)
        assert np.allclose(self._client.quotient_curvature(1, 1, theta), 4.0, atol=1e-14)

    def test_known_values(self):
        assert self._client.quotient_curvature(2, 3, np.pi / 4.0) == pytest.approx(1.0 + 108.0 / 42.25, rel=1e-14)
        assert self._client.quotient_curvature(2, 3, 0.0) == pytest.approx(1.0 + 3.0 * 9.0 / 4.0, rel=1e-14)

    @pytest.mark.parametrize("m_minus, m_plus", WEIGHT_PAIRS)
    def test_ratio_matches_closed_form(self, m_minus, m_plus):
        theta = np.linspace(0.01, HALF_PI - 0.01, 200)
        closed = self._client.quotient_curvature(m_minus, m_plus, theta)
        ratio = self._client.quotient_curvature(m_minus, m_plus, theta, method="ratio")
        assert np.max(np.abs(closed - ratio)) <= 1e-8

    @pytest.mark.parametrize("theta", [0.0, HALF_PI])
    def test_ratio_rejects_endpoints(self, theta):
        with pytest.raises(InputValidationError):
            self._client.quotient_curvature(2, 3, theta, method="ratio")

    def test_unknown_method(self):
        with pytest.raises(InputValidationError):
            self._client.quotient_curvature(2, 3, 0.5, method="spline")

    @pytest.mark.parametrize("m_minus, m_plus", WEIGHT_PAIRS)
    def test_warped_oracle_agrees(self, m_minus, m_plus):
        profile = self._client.weighted_quotient(m_minus, m_plus).R
        curvature_ops = self._client._curvature_ops
        for theta in (0.3, 0.8, 1.2):
            oracle = curvature_ops.warped2d_curvature(profile, theta)
            assert oracle == pytest.approx(weighted_curvature(m_minus, m_plus, theta), rel=1e-8)

    def test_gap(self):
        assert self._client.curvature_gap(1, 1) == pytest.approx(3.0, abs=1e-12)
        for m_minus, m_plus in WEIGHT_PAIRS[1:]:
            assert self._client.curvature_gap(m_minus, m_plus) > 0.0

    def test_profile_table(self):
        table = self._client.profile_table(2, 3, n=65)
        assert list(table.columns) == ["theta", "R", "dR", "ddR", "sec"]
        assert len(table) == 65
        assert table["theta"].iloc[-1] == HALF_PI
        assert (table["sec"] > 1.0).all()


class TestSpacesOfDirections:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_zk_directions_have_curvature_one(self, k):
        chart = self._client.zk_directions_metric(k)
        for r in (0.4, 1.5, 2.7):
            sec = self._client._curvature_ops.coordinate_sectional_curvatures(chart, np.array([r, 1.0]))
            assert sec[(0, 1)] == pytest.approx(1.0, abs=1e-5)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_tip_cone_angle(self, k):
        angle = self._client.tip_cone_angle(self._client.zk_directions_metric(k))
        assert angle == pytest.approx(2.0 * np.pi / k, rel=1e-6)

    @pytest.mark.parametrize("k", [0, -2, 1.5])
    def test_invalid_order(self, k):
        with pytest.raises(InputValidationError):
            self._client.zk_directions_metric(k)

    def test_suspension_distance_values(self):
        assert self._client.suspension_distance(0.3, (None, 0.0), (None, 0.0)) == 0.0
        assert self._client.suspension_distance(0.3, (None, 0.0), (None, np.pi)) == pytest.approx(np.pi)
        assert self._client.suspension_distance(HALF_PI, (None, HALF_PI), (None, HALF_PI)) == pytest.approx(HALF_PI)

    def test_cone_distance_values(self):
        assert self._client.cone_distance(1.0, (None, 2.0), (None, 0.0)) == pytest.approx(2.0)
        assert self._client.cone_distance(np.pi, (None, 1.5), (None, 0.5)) == pytest.approx(2.0)
        assert self._client.cone_distance(HALF_PI, (None, 1.0), (None, 1.0)) == pytest.approx(np.sqrt(2.0))

    def test_base_diameter_above_pi(self):
        with pytest.raises(InputValidationError):
            self._client.suspension_distance(np.pi + 1e-6, (None, 1.0), (None, 1.0))
        with pytest.raises(InputValidationError):
            SuspensionSpace(base_distance=lambda x, y: abs(x - y), base_diameter=4.0)

    @pytest.mark.parametrize("kind", ["cone", "suspension"])
    def test_triangle_inequality(self, kind, rng):
        upper = np.pi if kind == "suspension" else 3.0
        metric = self._client.cone_distance if kind == "cone" else self._client.suspension_distance
        trials = 100000
        base = rng.uniform(0.0, 2.0 * np.pi, size=(trials, 3))
        height = rng.uniform(0.0, upper, size=(trials, 3))

        def d_base(i, j):
            gap = np.abs(base[:, i] - base[:, j])
            return np.minimum(gap, 2.0 * np.pi - gap)

        xy = metric(d_base(0, 1), (None, height[:, 0]), (None, height[:, 1]))
        yz = metric(d_base(1, 2), (None, height[:, 1]), (None, height[:, 2]))
        xz = metric(d_base(0, 2), (None, height[:, 0]), (None, height[:, 2]))
        assert np.max(xz - xy - yz) <= 1e-12

    def test_suspension_space_distance(self):
        circle = lambda x, y: min(abs(x - y), 2.0 * np.pi - abs(x - y))
        cone = SuspensionSpace(base_distance=circle, base_diameter=np.pi, kind="cone")
        suspension = SuspensionSpace(base_distance=circle, base_diameter=np.pi)
        assert cone.distance((0.0, 1.0), (np.pi, 1.0)) == pytest.approx(2.0)
        assert suspension.distance((0.0, 0.0), (1.0, np.pi)) == pytest.approx(np.pi)
        with pytest.raises(InputValidationError):
            SuspensionSpace(base_distance=circle, base_diameter=1.0, kind="join")
    @settings(max_examples=50, deadline=None)
    @given(
        d=st.floats(min_value=0.0, max_value=np.pi),
        t=st.floats(min_value=0.0, max_value=np.pi),
        s=st.floats(min_value=0.0, max_value=np.pi),
    )
    def test_suspension_distance_range(self, d, t, s):
        value = self._client.suspension_distance(d, (None, t), (None, s))
        assert 0.0 <= value <= np.pi
        assert value >= abs(t - s) - 1e-7


class TestBallSuspension:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_round_base_gives_round_s3(self):
        minimum, _ = self._client._quotient_ops.suspension_curvature_sweep(sine_profile(), 1.0, n=3)
        assert minimum == pytest.approx(1.0, abs=constants["ORACLE"]["TOL_ORACLE"])

    def test_hopf_base_curvature_at_least_one(self):
        minimum, _ = self._client._quotient_ops.suspension_curvature_sweep(
            self._client.weighted_quotient(1, 1), 1.0, n=4
        )
        assert minimum >= 1.0 - 1e-3

    @pytest.mark.parametrize("rho", [0.0, HALF_PI, 2.0])
    def test_radius_out_of_range(self, rho):
        with pytest.raises(InputValidationError):
            self._client.ball_suspension_metric(self._client.weighted_quotient(1, 2), rho)

    def test_chart_shape(self):
        chart = self._client.ball_suspension_metric(WeightedQuotientProfile.build(2, 3), 1.0)
        assert chart.dim == 3
        assert chart.bounds[1] == (0.0, HALF_PI)
        assert chart.periodic == (False, False, True)


class TestTipWeights:
    @pytest.mark.parametrize("m, expected", [(1, 0.0), (2, 0.5), (3, 2.0 / 3.0), (7, 6.0 / 7.0)])
    def test_quotient_weight(self, m, expected):
        assert quotient_weight(m) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("m, expected", [(3, 1.0 / 3.0), (4, 0.5), (6, 2.0 / 3.0)])
    def test_branched_weight(self, m, expected):
        assert branched_weight(m) == pytest.approx(expected, abs=1e-15)

    def test_branched_doubles_the_slope(self):
        for m in (3, 4, 5):
            assert 1.0 - branched_weight(m) == pytest.approx(2.0 * (1.0 - quotient_weight(m)), abs=1e-15)

    @pytest.mark.parametrize("m", [0, -1])
    def test_quotient_weight_invalid(self, m):
        with pytest.raises(InputValidationError):
            quotient_weight(m)

    @pytest.mark.parametrize("m", [1, 2])
    def test_branched_weight_invalid(self, m):
        with pytest.raises(InputValidationError):
            branched_weight(m)
