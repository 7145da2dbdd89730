"""Point sets, convex combinations and the approximation certificate.

A point ``x`` in conv(P) is an eps-approximation of the polytope distance
when ``(1 - eps) * |x| <= <p, x> / |x|`` for every ``p`` in P.  The smallest
such eps for a given ``x`` is what :func:`epsilon_of` reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DegenerateOptimum, ZeroDirection, ZeroPoint

ZERO_NORM = 1e-300
WEIGHT_TOL = 1e-12
# raw weight sums further than this from 1 are rejected rather than rescaled
WEIGHT_ACCEPT_TOL = 1e-9
# round-off below zero in epsilon_hat is snapped to 0 when within this
EPS_ROUNDOFF = 1e-12


class PointSet:
    """Immutable, nonempty ``(n, d)`` array of points indexed ``0..n-1``."""

    __slots__ = ("_points",)

    def __init__(self, points):
        arr = np.array(points, dtype=np.float64, copy=True)
        if arr.ndim == 1 and arr.size > 0:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError(f"expected a nonempty (n, d) array of points, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("points must be finite")
        arr.flags.writeable = False
        self._points = arr

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __getitem__(self, i) -> np.ndarray:
        return self._points[i]

    def __iter__(self):
        return iter(self._points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self._points.shape == other._points.shape and bool(np.array_equal(self._points, other._points))

    def __hash__(self):
        return hash((self._points.shape, self._points.tobytes()))

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)}, dim={self.dim})"

    def subset(self, indices: Iterable[int]) -> PointSet:
        return PointSet(self._points[list(indices)])

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self._points, axis=1)

    @classmethod
    def concat(cls, *sets: PointSet) -> PointSet:
        return cls(np.vstack([s.points for s in sets]))


class ConvexCombination:
    """Sparse convex weights over the points of a :class:`PointSet`.

    Zero weights are dropped.  Negative weights, unknown indices and sums
    further than ``WEIGHT_ACCEPT_TOL`` from one raise ``ValueError``; sums
    within that band but off by more than ``WEIGHT_TOL`` are rescaled.
    """

    __slots__ = ("_weights", "_over")

    def __init__(self, weights: Mapping[int, float], over: PointSet):
        n = len(over)
        clean: dict[int, float] = {}
        for i, w in weights.items():
            i = int(i)
            w = float(w)
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range for {n} points")
            if not math.isfinite(w) or w < 0:
                raise ValueError(f"weight for index {i} must be finite and nonnegative, got {w}")
            if w > 0:
                clean[i] = clean.get(i, 0.0) + w
        if not clean:
            raise ValueError("convex combination needs at least one positive weight")
        total = math.fsum(clean.values())
        if abs(total - 1.0) > WEIGHT_ACCEPT_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1")
        if abs(total - 1.0) > WEIGHT_TOL:
            clean = {i: w / total for i, w in clean.items()}
        self._weights = dict(sorted(clean.items()))
        self._over = over

    @classmethod
    def vertex(cls, over: PointSet, index: int) -> ConvexCombination:
        return cls({index: 1.0}, over)

    @classmethod
    def uniform(cls, over: PointSet, indices: Iterable[int]) -> ConvexCombination:
        idx = sorted(set(int(i) for i in indices))
        return cls({i: 1.0 / len(idx) for i in idx}, over)

    @property
    def weights(self) -> dict[int, float]:
        return dict(self._weights)

    @property
    def over(self) -> PointSet:
        return self._over

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._weights)

    def weight_array(self) -> np.ndarray:
        w = np.zeros(len(self._over))
        for i, v in self._weights.items():
            w[i] = v
        return w

    def restricted(self) -> tuple[PointSet, ConvexCombination]:
        """The support as its own point set, with the same weights re-indexed."""
        sub = self._over.subset(self.support)
        return sub, ConvexCombination({k: w for k, w in enumerate(self._weights.values())}, sub)

    def __repr__(self) -> str:
        return f"ConvexCombination({self._weights!r})"


@dataclass(frozen=True)
class Certificate:
    epsilon_hat: float
    worst_index: int
    witness_norm: float


def combine(points: np.ndarray, indices: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """``sum_k weights[k] * points[indices[k]]`` in a fixed evaluation order.

    Both the solver loop and :func:`witness_point` go through here so that a
    stored combination reproduces the solver's iterate bit for bit.
    """
    return weights @ points[indices]


def witness_point(x: ConvexCombination) -> np.ndarray:
    idx = np.fromiter(x._weights.keys(), dtype=np.intp, count=len(x._weights))
    w = np.fromiter(x._weights.values(), dtype=np.float64, count=len(x._weights))
    return combine(x.over.points, idx, w)


def projection_length(p, x) -> float:
    """Signed length of the projection of ``p`` onto the direction of ``x``."""
    p = np.asarray(p, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    nx = float(np.linalg.norm(x))
    if nx < ZERO_NORM:
        raise ZeroDirection("cannot project onto a zero-length direction")
    return float(p @ x) / nx


def certificate_for_point(x, points: np.ndarray) -> Certificate:
    """Certificate of an explicit vector ``x`` against the rows of ``points``."""
    x = np.asarray(x, dtype=np.float64)
    nx = float(np.linalg.norm(x))
    if nx < ZERO_NORM:
        raise ZeroDirection("witness is the zero vector")
    proj = (points @ x) / nx
    j = int(np.argmin(proj))
    eps = 1.0 - float(proj[j]) / nx
    if -EPS_ROUNDOFF < eps < 0.0:
        eps = 0.0
    return Certificate(epsilon_hat=eps, worst_index=j, witness_norm=nx)


def epsilon_of(x: ConvexCombination, P: PointSet) -> Certificate:
    """Smallest eps for which the witness of ``x`` is an eps-approximation for ``P``.

    The witness is evaluated over ``x.over``; the projections range over
    ``P``.  These usually coincide, but measuring a coreset's witness against
    a larger universe is exactly how merge failures show up.
    """
    if x.over.dim != P.dim:
        raise ValueError(f"dimension mismatch: witness in R^{x.over.dim}, points in R^{P.dim}")
    return certificate_for_point(witness_point(x), P.points)


def angular_diameter(P: PointSet) -> float:
    """Largest angle (radians) between any two points seen from the origin."""
    pts = P.points
    norms = np.linalg.norm(pts, axis=1)
    if np.any(norms < ZERO_NORM):
        i = int(np.argmax(norms < ZERO_NORM))
        raise ZeroPoint(f"point {i} has zero norm")
    if len(P) == 1:
        return 0.0
    unit = pts / norms[:, None]
    best = 0.0
    for i in range(len(unit) - 1):
        rest = unit[i + 1:]
        # 2*atan2(|u - v|, |u + v|) keeps full precision near 0 and pi, where arccos does not
        ang = 2.0 * np.arctan2(np.linalg.norm(rest - unit[i], axis=1), np.linalg.norm(rest + unit[i], axis=1))
        best = max(best, float(ang.max()))
    return best


def diameter_squared(P: PointSet) -> float:
    pts = P.points
    best = 0.0
    for i in range(len(pts) - 1):
        diff = pts[i + 1:] - pts[i]
        best = max(best, float(np.max(np.einsum("ij,ij->i", diff, diff))))
    return best


def excentricity(P: PointSet, optimum_norm: float) -> float:
    """Squared hull diameter over squared optimum norm.

    The hull diameter is attained between two input points, so the pairwise
    maximum over ``P`` is exact.
    """
    if not optimum_norm > 0:
        raise DegenerateOptimum(f"optimum norm must be positive, got {optimum_norm}")
    return diameter_squared(P) / optimum_norm**2
