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
"""Graph distance and Gromov-Hausdorff test suite
"""

# OS Imports
import numpy as np
import pytest

# Package to test
from orbifoldutils.resolution.exceptions import InputValidationError
from orbifoldutils.resolution.gh_operations import DiscreteMetricSpace, round_sphere_distances
from orbifoldutils.resolution.profiles import sine_profile

GRID = 64
SUBSAMPLE = 8


@pytest.fixture(scope="module")
def sphere_space(client):
    return client.surface_distances(sine_profile(), n=GRID, subsample=SUBSAMPLE)


@pytest.fixture(scope="module")
def hopf_space(client):
    return client.surface_distances(client.weighted_quotient(1, 1).R, n=GRID, subsample=SUBSAMPLE)


class TestSurfaceDistances:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_tips_first(self, sphere_space):
        assert sphere_space.size == 2 + (GRID // SUBSAMPLE) ** 2
        assert np.array_equal(sphere_space.points[:2], [[0.0, 0.0], [np.pi, 0.0]])

    def test_round_sphere_tip_distance(self, sphere_space):
        assert sphere_space.dist[0, 1] == pytest.approx(np.pi, abs=1e-12)

    def test_hopf_tip_distance(self, hopf_space):
        assert hopf_space.dist[0, 1] == pytest.approx(np.pi / 2.0, abs=1e-12)

    def test_hopf_tip_distance_configured_grid(self, gh_grid):
        space = self._client.surface_distances(self._client.weighted_quotient(1, 1).R, n=gh_grid)
        assert space.dist[0, 1] == pytest.approx(np.pi / 2.0, abs=1e-12)

    def test_hopf_is_half_sphere(self, sphere_space, hopf_space):
        assert np.max(np.abs(hopf_space.dist - 0.5 * sphere_space.dist)) <= 1e-10

    def test_graph_overestimates_geodesics(self, sphere_space):
        exact = round_sphere_distances(sphere_space.points)
        deviation = sphere_space.dist - exact
        assert np.min(deviation) >= -1e-6
        assert np.max(deviation) <= 0.2

    def test_triangle_inequality(self, sphere_space, hopf_space):
        assert sphere_space.triangle_violation() <= 1e-12
        assert hopf_space.triangle_violation() <= 1e-12

    def test_table(self, hopf_space):
        table = hopf_space.table()
        assert len(table) == hopf_space.size * (hopf_space.size - 1) // 2
        assert list(table.columns) == ["i", "j", "distance"]

    def test_negative_profile_refused(self):
        with pytest.raises(InputValidationError):
            self._client.surface_distances(sine_profile(length=2.0 * np.pi), n=GRID)

    def test_metrication_floor(self):
        floor = self._client._gh_ops.metrication_floor(n=GRID, subsample=SUBSAMPLE)
        assert 0.0 < floor < 0.1


class TestDiscreteMetricSpace:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_sampled_triangle_inequality(self, rng):
        points = np.stack([rng.uniform(0.0, np.pi, 600), rng.uniform(0.0, 2.0 * np.pi, 600)], axis=-1)
        space = DiscreteMetricSpace(points=points, dist=round_sphere_distances(points), name="random_s2")
        assert space.triangle_violation(samples=20000, rng=rng) <= 1e-9

    def test_shape_mismatch(self):
        with pytest.raises(InputValidationError):
            DiscreteMetricSpace(points=np.zeros((3, 2)), dist=np.zeros((2, 2)))

    def test_asymmetric(self):
        dist = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(InputValidationError):
            DiscreteMetricSpace(points=np.zeros((2, 2)), dist=dist)

    def test_nonzero_diagonal(self):
        dist = np.array([[0.5, 1.0], [1.0, 0.0]])
        with pytest.raises(InputValidationError):
            DiscreteMetricSpace(points=np.zeros((2, 2)), dist=dist)


class TestGHUpperBound:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_identity_correspondence(self, sphere_space):
        assert self._client.gh_upper_bound(sphere_space, sphere_space) == 0.0

    def test_relabelled_space(self, sphere_space, rng):
        order = rng.permutation(sphere_space.size)
        relabelled = DiscreteMetricSpace(
            points=sphere_space.points[order],
            dist=sphere_space.dist[np.ix_(order, order)],
        )
        pairs = np.stack([order, np.arange(sphere_space.size)], axis=-1)
        assert self._client.gh_upper_bound(sphere_space, relabelled, pairs) == 0.0

    def test_against_exact_sphere(self, sphere_space):
        exact = DiscreteMetricSpace(points=sphere_space.points, dist=round_sphere_distances(sphere_space.points))
        bound = self._client.gh_upper_bound(sphere_space, exact)
        assert bound == pytest.approx(self._client._gh_ops.metrication_floor(n=GRID, subsample=SUBSAMPLE))

    def test_size_mismatch_needs_correspondence(self, sphere_space, hopf_space):
        small = DiscreteMetricSpace(points=hopf_space.points[:3], dist=hopf_space.dist[:3, :3])
        with pytest.raises(InputValidationError):
            self._client.gh_upper_bound(sphere_space, small)

    def test_partial_correspondence(self, sphere_space):
        pairs = np.array([[0, 0], [1, 1]])
        with pytest.raises(InputValidationError):
            self._client.gh_upper_bound(sphere_space, sphere_space, pairs)


class TestConvergenceStudy:
    @pytest.fixture(autouse=True)
    def setup(self, client):
        self._client = client

    def test_bounds_shrink_with_tau(self):
        report = self._client.convergence_study(2, 3, tau_ladder=[0.4, 0.3], n=GRID)
        assert [level.tau for level in report.levels] == [0.4, 0.3]
        assert report.metrication_floor > 0.0
        bounds = [level.upper_bound for level in report.levels]
        assert report.halving_ratio == pytest.approx(bounds[1] / bounds[0])
        assert report.monotone == (bounds[1] < bounds[0])
        for level in report.levels:
            assert level.upper_bound > 0.0
            assert level.max_distance_deviation == 2.0 * level.upper_bound
            assert level.min_curvature >= 1.01

    def test_default_ladder_halves(self, gh_grid):
        report = self._client.convergence_study(2, 3, tau_ladder=[0.4, 0.2, 0.1], n=gh_grid)
        bounds = [level.upper_bound for level in report.levels]
        assert all(b < a for a, b in zip(bounds, bounds[1:]))
        assert report.monotone
        assert bounds[-1] <= 0.5 * bounds[0]
        assert report.halved

    def test_single_level_not_halved(self):
        report = self._client.convergence_study(2, 3, tau_ladder=[0.4], n=GRID)
        assert report.monotone
        assert report.halving_ratio == 1.0
        assert not report.halved

    def test_empty_ladder_refused(self):
        with pytest.raises(InputValidationError):
            self._client.convergence_study(2, 3, tau_ladder=[], n=GRID)

    def test_ascending_ladder_refused(self):
        with pytest.raises(InputValidationError):
            self._client.convergence_study(2, 3, tau_ladder=[0.1, 0.2], n=GRID)
