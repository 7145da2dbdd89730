"""Merging coresets and a left-fold streaming harness.

Two strategies are compared:

* ``min_norm`` keeps only the shortest point seen so far.  When the angular
  diameter of the data is at most pi/2 it is a ``(1 - cos(theta))``-coreset
  and merging two of them is just picking the shorter point.
* ``rerun`` re-solves on the union of the two retained sets.  Its claimed
  error is relative to that union only; the harness also measures the error
  against everything seen so far, which is where the two can disagree.

``full_recompute`` solves from scratch on the whole prefix and serves as a
baseline.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import WideAngle
from .geometry import (
    ConvexCombination,
    PointSet,
    angular_diameter,
    epsilon_of,
)
from .solver import SolverConfig, frank_wolfe

RIGHT_ANGLE = math.pi / 2
# absorbs arccos round-off for exactly orthogonal pairs
ANGLE_TOL = 1e-12
CONSISTENCY_TOL = 1e-12

STRATEGIES = ("min_norm", "rerun", "full_recompute")
_ALIASES = {"min-norm": "min_norm", "full": "full_recompute", "full-recompute": "full_recompute"}


def normalize_strategy(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in STRATEGIES:
        raise ValueError(f"unknown strategy {name!r}; expected one of {', '.join(STRATEGIES)}")
    return name


def _check_angle(theta: float, what: str) -> None:
    if theta > RIGHT_ANGLE + ANGLE_TOL:
        raise WideAngle(f"{what} {theta:.17g} exceeds pi/2")


@dataclass(frozen=True)
class MergeableCoreset:
    """Retained points plus a witness over them and the error they claim."""

    points: PointSet
    witness: ConvexCombination
    claimed_epsilon: float

    def __post_init__(self):
        if self.witness.over is not self.points and self.witness.over != self.points:
            raise ValueError("witness must be a combination over the retained points")
        own = epsilon_of(self.witness, self.points).epsilon_hat
        if own > self.claimed_epsilon + CONSISTENCY_TOL:
            raise ValueError(
                f"witness is only a {own!r}-approximation of its own points, claimed {self.claimed_epsilon!r}"
            )

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_singleton(self) -> bool:
        return len(self.points) == 1

    def witness_norm(self) -> float:
        return epsilon_of(self.witness, self.points).witness_norm


def _singleton(point: np.ndarray, claimed: float) -> MergeableCoreset:
    pts = PointSet(point.reshape(1, -1))
    return MergeableCoreset(pts, ConvexCombination.vertex(pts, 0), claimed)


def shortest_point_coreset(P: PointSet) -> MergeableCoreset:
    """Keep only the shortest point; valid while the angular diameter is <= pi/2."""
    theta = angular_diameter(P)
    _check_angle(theta, "angular diameter")
    i = int(np.argmin(P.norms()))
    return _singleton(P[i], 1.0 - math.cos(theta))


def merge_min_norm(a: MergeableCoreset, b: MergeableCoreset, theta_bound: float) -> MergeableCoreset:
    """Keep the shorter of two single-point coresets (``a`` wins ties).

    ``theta_bound`` must bound the angular diameter of everything the two
    coresets summarize; two retained points alone cannot tell.
    """
    if not (a.is_singleton and b.is_singleton):
        raise ValueError("min-norm merging takes two single-point coresets")
    _check_angle(theta_bound, "theta_bound")
    keep = a if np.linalg.norm(a.points[0]) <= np.linalg.norm(b.points[0]) else b
    return _singleton(keep.points[0], 1.0 - math.cos(theta_bound))


def solve_coreset(P: PointSet, config: SolverConfig) -> MergeableCoreset:
    """Frank-Wolfe coreset of ``P`` packaged as a mergeable value."""
    result = frank_wolfe(P, config)
    retained, witness = result.witness.restricted()
    return MergeableCoreset(retained, witness, result.certificate.epsilon_hat)


def merge_rerun(a: MergeableCoreset, b: MergeableCoreset, config: SolverConfig) -> MergeableCoreset:
    """Re-solve on the union of the retained points.

    The claimed error is measured against that union, not against the data
    the inputs were built from.
    """
    return solve_coreset(PointSet.concat(a.points, b.points), config)


@dataclass(frozen=True)
class StreamRecord:
    batch: int
    strategy: str
    retained_size: int
    measured_epsilon: float
    claimed_epsilon: float
    theta_prefix: float
    bound: float


FIELDS = tuple(StreamRecord.__dataclass_fields__)


@dataclass(frozen=True)
class StreamReport:
    strategy: str
    records: tuple[StreamRecord, ...]
    final: MergeableCoreset

    @property
    def final_measured_epsilon(self) -> float:
        return self.records[-1].measured_epsilon

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELDS)
        for rec in self.records:
            writer.writerow([_fmt(getattr(rec, f)) for f in FIELDS])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "records": [asdict(r) for r in self.records],
            "final_retained": self.final.points.points.tolist(),
            "final_witness": {str(i): w for i, w in self.final.witness.weights.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def stream_process(
    batches: Sequence[PointSet],
    strategy: str,
    config: SolverConfig | None = None,
    theta_bound: float | None = None,
) -> StreamReport:
    """Fold ``batches`` left to right into one coreset, measuring as we go.

    After each batch the current witness is scored against the full prefix
    seen so far.  The prefix is kept for that measurement only; no strategy
    reads it except ``full_recompute``.  For ``min_norm`` the merge angle is
    ``theta_bound`` when given, otherwise the prefix's own angular diameter.
    """
    strategy = normalize_strategy(strategy)
    config = config or SolverConfig()
    if not batches:
        raise ValueError("need at least one batch")

    records = []
    current = None
    prefix = None
    for k, batch in enumerate(batches):
        prefix = batch if prefix is None else PointSet.concat(prefix, batch)
        theta = angular_diameter(prefix)
        if strategy == "min_norm":
            merge_angle = theta if theta_bound is None else theta_bound
            local = shortest_point_coreset(batch)
            if current is None:
                _check_angle(merge_angle, "theta_bound")
                current = _singleton(local.points[0], 1.0 - math.cos(merge_angle))
            else:
                current = merge_min_norm(current, local, merge_angle)
        elif strategy == "rerun":
            local = solve_coreset(batch, config)
            current = local if current is None else merge_rerun(current, local, config)
        else:
            current = solve_coreset(prefix, config)
        measured = epsilon_of(current.witness, prefix).epsilon_hat
        records.append(
            StreamRecord(
                batch=k,
                strategy=strategy,
                retained_size=len(current),
                measured_epsilon=measured,
                claimed_epsilon=current.claimed_epsilon,
                theta_prefix=theta,
                bound=1.0 - math.cos(theta),
            )
        )
    return StreamReport(strategy, tuple(records), current)


def split_batches(P: PointSet, batch_size: int) -> list[PointSet]:
    if batch_size < 1:
        raise ValueError(f"batch size must be >= 1, got {batch_size}")
    return [P.subset(range(i, min(i + batch_size, len(P)))) for i in range(0, len(P), batch_size)]
