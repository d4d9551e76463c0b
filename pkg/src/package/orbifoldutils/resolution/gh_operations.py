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
"""Discrete metric spaces and Gromov-Hausdorff upper bounds
   2024 Google
"""
# Standard library imports
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional
import logging
import toml
import pkgutil

# Third-party imports
import numpy as np
import pandas as pd
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

# Local imports
from .exceptions import InputValidationError
from .profiles import ProfileFunction
from .quotient_operations import WeightedQuotientProfile
from .reports import GHLevel, GHReport
from .utils import gauss_legendre, interior_grid

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())
# Logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(constants["LOGGING"]["RESOLUTION_LOGGER"])

# 8 neighbours and 16 chords of a grid node, as (row, column) offsets.
STENCIL = tuple(
    (di, dj)
    for di in range(-3, 4)
    for dj in range(-3, 4)
    if (di, dj) != (0, 0)
    and (max(abs(di), abs(dj)) == 1 or sorted((abs(di), abs(dj))) in ([1, 2], [1, 3]))
)


@dataclass(frozen=True)
class DiscreteMetricSpace:
    """Finite metric space: chart coordinates per point and the distance matrix."""

    points: np.ndarray
    dist: np.ndarray
    name: str = "space"

    def __post_init__(self):
        dist = np.asarray(self.dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] != len(self.points):
            raise InputValidationError(f"Distance matrix of {self.name} does not match its {len(self.points)} points.")
        if not np.array_equal(dist, dist.T):
            raise InputValidationError(f"Distance matrix of {self.name} is not symmetric.")
        if np.any(np.diag(dist) != 0.0):
            raise InputValidationError(f"Distance matrix of {self.name} has a nonzero diagonal.")

    @property
    def size(self):
        return len(self.points)

    def triangle_violation(self, samples=None, seed=None, rng=None):
        """Largest d(i, j) - d(i, k) - d(k, j) over all triples, or over sampled ones for large spaces."""
        dist = np.asarray(self.dist)
        if self.size <= constants["GH"]["EXHAUSTIVE_LIMIT"]:
            worst = -np.inf
            for k in range(self.size):
                worst = max(worst, float(np.max(dist - dist[:, k][:, None] - dist[k, :][None, :])))
            return worst
        if rng is None:
            rng = np.random.default_rng(seed)
        if samples is None:
            samples = constants["GH"]["SAMPLED_TRIPLES"]
        i, j, k = rng.integers(0, self.size, size=(3, samples))
        return float(np.max(dist[i, j] - dist[i, k] - dist[k, j]))

    def table(self):
        """Long table of (i, j, distance)."""
        i, j = np.triu_indices(self.size, k=1)
        return pd.DataFrame({"i": i, "j": j, "distance": self.dist[i, j]})


def round_sphere_distances(points):
    """Great circle distances between (theta, alpha) points of the unit sphere."""
    theta, alpha = points[:, 0], points[:, 1]
    cosine = np.cos(theta)[:, None] * np.cos(theta)[None, :] + np.sin(theta)[:, None] * np.sin(theta)[
        None, :
    ] * np.cos(alpha[:, None] - alpha[None, :])
    dist = np.arccos(np.clip(cosine, -1.0, 1.0))
    np.fill_diagonal(dist, 0.0)
    return 0.5 * (dist + dist.T)


class GHOperations:
    """Graph geodesics on surfaces of revolution and correspondence bounds."""

    def __init__(self, client):
        """Initialize with reference to main client."""
        self._client = client

    def _edges(self, profile: ProfileFunction, theta, n_alpha):
        """Edge list of the chord graph with lengths integrated along chart segments."""
        n_theta = len(theta)
        step = 2.0 * np.pi / n_alpha
        rows, cols = np.meshgrid(np.arange(n_theta), np.arange(n_alpha), indexing="ij")
        rows, cols = rows.ravel(), cols.ravel()
        nodes, weights = gauss_legendre(3, 0.0, 1.0)
        sources, targets, lengths = [], [], []
        for di, dj in STENCIL:
            other = rows + di
            live = (other >= 0) & (other < n_theta)
            start, end = rows[live], other[live]
            d_theta = theta[end] - theta[start]
            along = theta[start][:, None] + d_theta[:, None] * nodes[None, :]
            radius = np.asarray(profile.value(along))
            length = np.sum(weights * np.sqrt(d_theta[:, None] ** 2 + (radius * dj * step) ** 2), axis=1)
            sources.append(start * n_alpha + cols[live])
            targets.append(end * n_alpha + (cols[live] + dj) % n_alpha)
            lengths.append(length)
        return np.concatenate(sources), np.concatenate(targets), np.concatenate(lengths)

    def surface_distances(self, profile: ProfileFunction, n=None, n_alpha=None, subsample=None):
        """Graph geodesic distances on the surface d theta^2 + R(theta)^2 d alpha^2.

        Grid rows are cell centred in theta, so the tips at both ends of the
        profile domain are added as extra nodes joined radially to the first
        and last rows with their exact radial lengths.

        Args:
            profile (ProfileFunction): R, positive inside its domain.
            n (int, optional): Rows of the grid.
            n_alpha (int, optional): Columns of the grid, n by default.
            subsample (int, optional): Keep every subsample-th row and column
                in the returned space.

        Returns:
            DiscreteMetricSpace: Tips first, then the kept grid points.

        Raises:
            InputValidationError: If R is not positive or the graph is disconnected.
        """
        try:
            if n is None:
                n = constants["GH"]["GRID"]
            if n_alpha is None:
                n_alpha = n
            if subsample is None:
                subsample = constants["GH"]["SUBSAMPLE"]
            if n < constants["GH"]["MIN_GRID"]:
                logger.warning(f"Grid {n} is below {constants['GH']['MIN_GRID']}, graph distances are coarse.")
            lower, upper = profile.domain
            theta = interior_grid(lower, upper, n)
            alpha = 2.0 * np.pi * np.arange(n_alpha) / n_alpha
            if np.any(np.asarray(profile.value(theta)) <= 0.0):
                raise InputValidationError(f"Profile {profile.name} is not positive inside {profile.domain}.")
            sources, targets, lengths = self._edges(profile, theta, n_alpha)
            grid_nodes = n * n_alpha
            south, north = grid_nodes, grid_nodes + 1
            first = np.arange(n_alpha)
            last = (n - 1) * n_alpha + np.arange(n_alpha)
            sources = np.concatenate([sources, np.full(n_alpha, south), np.full(n_alpha, north)])
            targets = np.concatenate([targets, first, last])
            lengths = np.concatenate([lengths, np.full(n_alpha, theta[0] - lower), np.full(n_alpha, upper - theta[-1])])
            graph = coo_matrix((lengths, (sources, targets)), shape=(grid_nodes + 2, grid_nodes + 2)).tocsr()

            kept_rows = np.arange(0, n, subsample)
            kept_cols = np.arange(0, n_alpha, subsample)
            kept = (kept_rows[:, None] * n_alpha + kept_cols[None, :]).ravel()
            indices = np.concatenate([[south, north], kept])
            chunks = [c for c in np.array_split(indices, self._client._utils.thread_count()) if len(c)]

            def rows_from(chunk):
                return dijkstra(graph, directed=False, indices=chunk)[:, indices]

            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                dist = np.vstack(list(pool.map(rows_from, chunks)))
            if not np.all(np.isfinite(dist)):
                raise InputValidationError(f"Graph of {profile.name} on a {n}x{n_alpha} grid is disconnected.")
            dist = 0.5 * (dist + dist.T)
            np.fill_diagonal(dist, 0.0)
            coords = np.stack(
                [
                    np.concatenate([[lower, upper], np.repeat(theta[kept_rows], len(kept_cols))]),
                    np.concatenate([[0.0, 0.0], np.tile(alpha[kept_cols], len(kept_rows))]),
                ],
                axis=-1,
            )
            logger.info(f"Graph distances of {profile.name}: {len(indices)} points, diameter {np.max(dist)}.")
            return DiscreteMetricSpace(points=coords, dist=dist, name=f"graph[{profile.name},{n}]")
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e

    def gh_upper_bound(self, first: DiscreteMetricSpace, second: DiscreteMetricSpace, correspondence=None):
        """Half the distortion of a correspondence, an upper bound of the GH distance.

        Args:
            first (DiscreteMetricSpace): X.
            second (DiscreteMetricSpace): Y.
            correspondence (array-like, optional): (i, j) pairs; the index
                pairing of equally sized spaces by default.

        Returns:
            float: sup |d_X(i, i') - d_Y(j, j')| / 2 over pairs of pairs.

        Raises:
            InputValidationError: If the correspondence does not cover both spaces.
        """
        if correspondence is None:
            if first.size != second.size:
                raise InputValidationError(
                    f"Spaces of sizes {first.size} and {second.size} need an explicit correspondence."
                )
            correspondence = np.stack([np.arange(first.size)] * 2, axis=-1)
        pairs = np.asarray(correspondence, dtype=int)
        if set(pairs[:, 0]) != set(range(first.size)) or set(pairs[:, 1]) != set(range(second.size)):
            raise InputValidationError("Correspondence does not cover both point sets.")
        dx = first.dist[np.ix_(pairs[:, 0], pairs[:, 0])]
        dy = second.dist[np.ix_(pairs[:, 1], pairs[:, 1])]
        return 0.5 * float(np.max(np.abs(dx - dy)))

    def metrication_floor(self, n=None, subsample=None):
        """Half the largest graph distance error on the round sphere at the same grid."""
        sphere = ProfileFunction(
            domain=(0.0, np.pi),
            func=np.sin,
            derivatives=(np.cos, lambda x: -np.sin(x)),
            name="round_s2",
        )
        space = self.surface_distances(sphere, n=n, subsample=subsample)
        return 0.5 * float(np.max(np.abs(space.dist - round_sphere_distances(space.points))))

    def convergence_study(
        self,
        m_minus,
        m_plus,
        tau_ladder=None,
        delta_ladder=None,
        n=None,
        mode=None,
        floor: Optional[float] = None,
    ):
        """GH bounds between resolved surfaces and the unresolved weighted quotient.

        Every tau of the descending ladder is resolved with its first delta
        witness, and the resolved surface is compared with the quotient on
        the shared grid.

        Returns:
            GHReport: One level per tau, whether the bounds strictly decrease
                and the ratio of the last bound to the first.
        """
        try:
            if tau_ladder is None:
                tau_ladder = constants["GH"]["TAU_LADDER"]
            if not len(tau_ladder):
                raise InputValidationError("tau ladder is empty.")
            if list(tau_ladder) != sorted(tau_ladder, reverse=True):
                raise InputValidationError(f"tau ladder {tau_ladder} must be descending.")
            if n is None:
                n = constants["GH"]["GRID"]
            if mode is None:
                mode = self._client._client_options._weight_mode
            resolution_ops = self._client._resolution_ops
            quotient = WeightedQuotientProfile.build(m_minus, m_plus)
            base = self.surface_distances(quotient.tip_profile(mode), n=n)
            if floor is None:
                floor = self.metrication_floor(n=n)
            levels = []
            for tau in tau_ladder:
                witness, eta = resolution_ops.find_witness(quotient, tau, delta_ladder, mode=mode)
                resolved = resolution_ops.resolved_profile(quotient, eta, mode)
                space = self.surface_distances(resolved, n=n)
                bound = self.gh_upper_bound(space, base)
                levels.append(
                    GHLevel(
                        tau=tau,
                        delta=witness.delta,
                        grid=n,
                        upper_bound=bound,
                        max_distance_deviation=2.0 * bound,
                        min_curvature=witness.min_curvature,
                    )
                )
            bounds = [level.upper_bound for level in levels]
            monotone = all(b < a for a, b in zip(bounds, bounds[1:]))
            ratio = bounds[-1] / bounds[0] if bounds[0] > 0.0 else 1.0
            logger.info(f"GH study ({m_minus}, {m_plus}): bounds {bounds}, floor {floor}, monotone {monotone}, ratio {ratio}.")
            return GHReport(
                m_minus=m_minus,
                m_plus=m_plus,
                levels=levels,
                monotone=monotone,
                halving_ratio=ratio,
                halved=ratio <= 0.5,
                metrication_floor=floor,
            )
        except Exception as e:
            logger.error(f"Exception: {e}.")
            raise e
