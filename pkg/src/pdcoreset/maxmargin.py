"""Homogeneous max-margin separation via polytope distance.

Flipping every negatively labeled point through the origin turns "find the
unit normal w maximizing min_i y_i <w, p_i>" into "find the point of the
reflected hull closest to the origin": the optimal normal is that point's
direction and the optimal margin is its norm.  An eps-approximate hull point
therefore yields a normal whose margin is within a factor (1 - eps).

Only separators through the origin are solved exactly.  :func:`lift` appends
a constant coordinate so that an affine separator becomes homogeneous in one
more dimension; the margin measured there is *not* the affine margin in the
original space.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import Mismatch, NotSeparable, OriginInsideHull
from .geometry import Certificate, ConvexCombination, PointSet, epsilon_of, witness_point
from .solver import SolverConfig, frank_wolfe


class SingleClassWarning(UserWarning):
    """All labels agree, so any separator is one-sided."""


class LabeledPointSet:
    """Points with labels in {-1, +1}, aligned by index."""

    __slots__ = ("points", "labels")

    def __init__(self, points, labels: Sequence[int]):
        points = points if isinstance(points, PointSet) else PointSet(points)
        labels = tuple(int(y) for y in labels)
        if len(labels) != len(points):
            raise ValueError(f"{len(labels)} labels for {len(points)} points")
        bad = [y for y in labels if y not in (-1, 1)]
        if bad:
            raise ValueError(f"labels must be -1 or +1, got {bad[0]}")
        self.points = points
        self.labels = labels

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def two_class(self) -> bool:
        return len(set(self.labels)) == 2

    def flipped(self) -> LabeledPointSet:
        return LabeledPointSet(self.points, [-y for y in self.labels])


@dataclass(frozen=True)
class MarginResult:
    normal: np.ndarray
    margin: float
    epsilon_used: float
    support_indices: tuple[int, ...]
    witness: ConvexCombination
    converged: bool
    iterations: int


def reduce_labeled(L: LabeledPointSet) -> PointSet:
    """Return ``{y_i * p_i}`` with indices preserved."""
    y = np.asarray(L.labels, dtype=np.float64)
    return PointSet(L.points.points * y[:, None])


def margin_of(normal, L: LabeledPointSet) -> float:
    """``min_i y_i <normal, p_i>`` evaluated on the raw labeled data."""
    y = np.asarray(L.labels, dtype=np.float64)
    return float(np.min(y * (L.points.points @ np.asarray(normal, dtype=np.float64))))


def solve_margin(L: LabeledPointSet, config: SolverConfig | None = None) -> MarginResult:
    """Approximate the max-margin homogeneous separator of ``L``.

    The reported margin is recomputed from the inputs with the returned
    normal; on a converged solve it is at least ``(1 - eps)`` times optimal.
    """
    config = config or SolverConfig()
    if not L.two_class:
        warnings.warn(
            "single-class input: every point lies on one side by construction",
            SingleClassWarning,
            stacklevel=2,
        )
    reduced = reduce_labeled(L)
    try:
        res = frank_wolfe(reduced, config)
    except OriginInsideHull as exc:
        raise NotSeparable(f"no homogeneous separator with positive margin: {exc}") from exc
    x = witness_point(res.witness)
    normal = x / np.linalg.norm(x)
    return MarginResult(
        normal=normal,
        margin=margin_of(normal, L),
        epsilon_used=config.epsilon_target,
        support_indices=res.coreset_indices,
        witness=res.witness,
        converged=res.converged,
        iterations=res.iterations,
    )


def margin_certificate(result: MarginResult, L: LabeledPointSet) -> Certificate:
    """Re-derive the approximation certificate of ``result`` against ``L``."""
    reduced = reduce_labeled(L)
    if result.witness.over != reduced:
        raise Mismatch("result was not computed from this labeled set")
    return epsilon_of(result.witness, reduced)


def lift(L: LabeledPointSet, rho: float = 1.0) -> LabeledPointSet:
    """Append the constant coordinate ``rho`` to every point."""
    if not rho > 0:
        raise ValueError(f"lift coordinate must be positive, got {rho}")
    pts = L.points.points
    lifted = np.hstack([pts, np.full((len(pts), 1), float(rho))])
    return LabeledPointSet(lifted, L.labels)


def affine_from_lifted(normal, rho: float = 1.0) -> tuple[np.ndarray, float]:
    """Split a lifted normal into ``(w, b)`` for the hyperplane ``<w, p> + b = 0``.

    ``w`` is not rescaled to unit length.
    """
    normal = np.asarray(normal, dtype=np.float64)
    return normal[:-1].copy(), float(normal[-1] * rho)
