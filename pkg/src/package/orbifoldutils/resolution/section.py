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
"""Geodesics of the constant curvature 1 section in the spherical chart
   2024 Google
"""
# Third-party imports
import numpy as np


def embed(s, t):
    """Point of S^2 with chart coordinates (s, t): (cos t cos s, cos t sin s, sin t)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    return np.stack((np.cos(t) * np.cos(s), np.cos(t) * np.sin(s), np.sin(t)), axis=-1)


def chart(x):
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x, axis=-1, keepdims=True)
    s = np.arctan2(x[..., 1], x[..., 0])
    t = np.arcsin(np.clip(x[..., 2], -1.0, 1.0))
    return s, t


def frame(s, t):
    """Unit tangent vectors along d_s and d_t at (s, t)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    e_s = np.stack((-np.sin(s), np.cos(s), np.zeros_like(s)), axis=-1)
    e_t = np.stack((-np.sin(t) * np.cos(s), -np.sin(t) * np.sin(s), np.cos(t)), axis=-1)
    return e_s, e_t


def exp(x, v):
    """Exponential map of the unit sphere at x applied to tangent vectors v."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    length = np.linalg.norm(v, axis=-1, keepdims=True)
    safe = np.where(length > 0.0, length, 1.0)
    return np.cos(length) * x + np.sin(length) * v / safe


def midpoint(a, b):
    """Geodesic midpoint of two chart points closer than pi."""
    xa = embed(*a)
    xb = embed(*b)
    return chart(xa + xb)


def distance(a, b):
    xa = embed(*a)
    xb = embed(*b)
    return np.arccos(np.clip(np.sum(xa * xb, axis=-1), -1.0, 1.0))


def second_difference(func, s, t, direction, step):
    """func(exp(+step u)) - 2 func(p) + func(exp(-step u)) for the unit direction u.

    direction holds (a, b) components on the (e_s, e_t) frame.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    x = embed(s, t)
    e_s, e_t = frame(s, t)
    a, b = direction
    norm = np.hypot(a, b)
    u = (a * e_s + b * e_t) / norm
    plus = chart(exp(x, step * u))
    minus = chart(exp(x, -step * u))
    return func(*plus) - 2.0 * func(s, t) + func(*minus)


def sample_ball(rng, rho, size, t_min=0.0):
    """Uniform chart samples of the half ball {r < rho, t >= t_min} around s = t = 0."""
    points = []
    needed = size
    while needed > 0:
        s = rng.uniform(0.0, rho, 2 * needed)
        t = rng.uniform(t_min, rho, 2 * needed)
        inside = np.cos(s) * np.cos(t) > np.cos(rho)
        points.append(np.stack((s[inside], t[inside]), axis=-1))
        needed -= int(np.count_nonzero(inside))
    return np.concatenate(points)[:size]
