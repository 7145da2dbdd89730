"""Gilbert-style Frank-Wolfe for the polytope distance problem.

The solver looks for the point of conv(P) closest to the origin.  Each step
moves the iterate toward the input point with the smallest projection onto
the current direction, using an exact line search along that segment.  The
support of the final weights is the coreset.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IterationLimit, OriginInsideHull, TooManyPoints
from .geometry import (
    Certificate,
    ConvexCombination,
    PointSet,
    ZERO_NORM,
    certificate_for_point,
    combine,
    diameter_squared,
    epsilon_of,
)

ORIGIN_REL_TOL = 1e-9
RENORMALIZE_EVERY = 64
MAX_ORACLE_POINTS = 6


@dataclass(frozen=True)
class SolverConfig:
    """``max_iterations=None`` picks ``10 * ceil(2E/eps)`` (at least 1000), E from the start point."""

    epsilon_target: float = 0.01
    max_iterations: int | None = None
    tie_break: str = "lowest-index"

    def __post_init__(self):
        if not 0 < self.epsilon_target < 1:
            raise ValueError(f"epsilon_target must lie in (0, 1), got {self.epsilon_target}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.tie_break != "lowest-index":
            raise ValueError(f"unsupported tie_break rule {self.tie_break!r}")


@dataclass(frozen=True)
class SolveResult:
    witness: ConvexCombination
    coreset_indices: tuple[int, ...]
    certificate: Certificate
    iterations: int
    converged: bool
    norm_history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def norm(self) -> float:
        return self.certificate.witness_norm


def size_bound(excentricity_value: float, epsilon: float) -> int:
    """Greedy coreset size guarantee ``2 * ceil(2E / eps)``."""
    return 2 * math.ceil(2.0 * excentricity_value / epsilon)


def default_max_iterations(P: PointSet, epsilon: float, start_norm: float) -> int:
    e_est = diameter_squared(P) / start_norm**2
    return max(1000, 10 * math.ceil(2.0 * e_est / epsilon))


def frank_wolfe(P: PointSet, config: SolverConfig | None = None, *, strict: bool = False) -> SolveResult:
    """Approximate the min-norm point of conv(P) to ``config.epsilon_target``.

    Parameters
    ----------
    P : PointSet
        Input points.  The origin must lie strictly outside their hull.
    config : SolverConfig, optional
        Target accuracy and iteration cap.
    strict : bool
        Raise :class:`IterationLimit` instead of returning an unconverged
        result.

    Returns
    -------
    SolveResult
        ``converged`` is true iff the certificate meets the target; the
        certificate is exactly ``epsilon_of(witness, P)``.

    Raises
    ------
    OriginInsideHull
        When the iterate collapses toward the origin while some point still
        has a nonpositive projection.
    """
    config = config or SolverConfig()
    eps = config.epsilon_target
    pts = P.points
    n = len(P)
    norms = np.linalg.norm(pts, axis=1)
    scale = float(norms.max())
    if scale < ZERO_NORM:
        raise OriginInsideHull("all input points are the origin")
    floor = ORIGIN_REL_TOL * scale

    start = int(np.argmin(norms))
    if norms[start] <= floor:
        raise OriginInsideHull(f"input point {start} is (numerically) the origin")
    max_it = config.max_iterations or default_max_iterations(P, eps, float(norms[start]))

    w = np.zeros(n)
    w[start] = 1.0
    history = []
    k = 0
    while True:
        idx = np.flatnonzero(w)
        x = combine(pts, idx, w[idx])
        cert = certificate_for_point(x, pts)
        history.append(cert.witness_norm)
        if cert.epsilon_hat <= eps or k >= max_it:
            break
        j = cert.worst_index
        d = x - pts[j]
        dd = float(d @ d)
        if dd == 0.0:
            break
        lam = min(1.0, max(0.0, float(x @ d) / dd))
        if lam >= 1.0:
            w[:] = 0.0
            w[j] = 1.0
        else:
            w *= 1.0 - lam
            w[j] += lam
        k += 1
        if k % RENORMALIZE_EVERY == 0:
            w /= w.sum()
        if cert.epsilon_hat >= 1.0:
            # worst projection was <= 0: check whether the step hit the origin
            idx = np.flatnonzero(w)
            if float(np.linalg.norm(combine(pts, idx, w[idx]))) < floor:
                raise OriginInsideHull(
                    f"iterate collapsed to the origin after {k} steps; origin is in the hull"
                )

    idx = np.flatnonzero(w)
    witness = ConvexCombination(dict(zip(idx.tolist(), w[idx].tolist())), P)
    final = epsilon_of(witness, P)
    result = SolveResult(
        witness=witness,
        coreset_indices=witness.support,
        certificate=final,
        iterations=k,
        converged=final.epsilon_hat <= eps,
        norm_history=tuple(history),
    )
    if strict and not result.converged:
        raise IterationLimit(
            f"no {eps}-approximation after {k} iterations (epsilon_hat={final.epsilon_hat:.3g})",
            result,
        )
    return result


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto ``{w : w >= 0, sum(w) = 1}``."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / ks > 0)[0][-1]
    return np.maximum(v - css[rho] / (rho + 1), 0.0)


def _simplex_grid(n: int, resolution: int) -> np.ndarray:
    # stars and bars: every composition of `resolution` into n nonnegative parts
    rows = []
    for bars in itertools.combinations(range(resolution + n - 1), n - 1):
        edges = (-1,) + bars + (resolution + n - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(n)])
    return np.asarray(rows, dtype=np.float64) / resolution


def _polish(G: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Solve the KKT system on the detected support; keep it only if feasible and better."""
    support = np.flatnonzero(w > 0)
    k = len(support)
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = G[np.ix_(support, support)]
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
    if np.any(sol < 0) or not np.isclose(sol.sum(), 1.0, atol=1e-12):
        return w
    cand = np.zeros_like(w)
    cand[support] = sol / sol.sum()
    return cand if cand @ G @ cand <= w @ G @ w else w


def brute_force_distance(P: PointSet, resolution: int = 24) -> tuple[float, ConvexCombination]:
    """Reference min-norm point of conv(P) for tiny inputs (test oracle).

    Scans a regular grid on the weight simplex, then runs projected gradient
    descent from the best grid point until the step is below 1e-10, and
    finally re-solves the equality-constrained problem on the active support.
    No Frank-Wolfe machinery is involved.
    """
    n = len(P)
    if n > MAX_ORACLE_POINTS:
        raise TooManyPoints(f"oracle handles at most {MAX_ORACLE_POINTS} points, got {n}")
    if resolution < 10:
        raise ValueError(f"resolution must be >= 10, got {resolution}")
    pts = P.points
    if n == 1:
        return float(np.linalg.norm(pts[0])), ConvexCombination.vertex(P, 0)

    grid = _simplex_grid(n, resolution)
    vals = np.linalg.norm(grid @ pts, axis=1)
    w = grid[int(np.argmin(vals))].copy()

    G = pts @ pts.T
    lip = float(np.linalg.eigvalsh(G)[-1])
    if lip > 0:
        step = 1.0 / lip
        for _ in range(200_000):
            nxt = project_to_simplex(w - step * (G @ w))
            moved = float(np.linalg.norm(nxt - w))
            w = nxt
            if moved < 1e-10:
                break
    w = _polish(G, w)
    w[w < 0] = 0.0
    w /= w.sum()
    idx = np.flatnonzero(w)
    comb = ConvexCombination(dict(zip(idx.tolist(), w[idx].tolist())), P)
    return float(np.linalg.norm(w @ pts)), comb
