"""Seeded synthetic inputs for experiments and tests."""
from __future__ import annotations

import math

import numpy as np

from .geometry import PointSet
from .maxmargin import LabeledPointSet


def random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    while True:
        u = rng.normal(size=d)
        n = np.linalg.norm(u)
        if n > 1e-8:
            return u / n


def separable_points(rng: np.random.Generator, n: int, d: int, margin: float = 0.2) -> PointSet:
    """Gaussian cloud pushed into the half-space ``<p, u> >= margin`` for a random ``u``.

    The origin is then at distance at least ``margin`` from the hull.
    """
    u = random_unit(rng, d)
    pts = rng.normal(size=(n, d)) + u * rng.uniform(0.5, 3.0)
    low = pts @ u < margin
    pts[low] += np.outer(margin - pts[low] @ u, u)
    return PointSet(pts)


def cone_points(rng: np.random.Generator, n: int, d: int, half_angle: float = math.pi / 4) -> PointSet:
    """Points within ``half_angle`` of a random axis, with random norms.

    With ``half_angle <= pi/4`` the angular diameter is at most pi/2.
    """
    axis = random_unit(rng, d)
    pts = np.empty((n, d))
    for i in range(n):
        if d == 1:
            direction = axis
        else:
            t = rng.normal(size=d)
            t -= (t @ axis) * axis
            t /= np.linalg.norm(t)
            phi = rng.uniform(0.0, half_angle)
            direction = math.cos(phi) * axis + math.sin(phi) * t
        pts[i] = direction * rng.lognormal(0.0, 0.5)
    return PointSet(pts)


def labeled_separable(rng: np.random.Generator, n: int, d: int, margin: float = 0.2) -> LabeledPointSet:
    """Labels from a random homogeneous separator, with every point at least ``margin`` from it."""
    w = random_unit(rng, d)
    pts = rng.normal(size=(n, d))
    labels = rng.choice([-1, 1], size=n)
    side = pts @ w
    # move each point onto its label's side, at distance >= margin
    shift = np.where(labels * side < margin, labels * margin - side, 0.0)
    pts += np.outer(shift, w)
    return LabeledPointSet(pts, labels)
