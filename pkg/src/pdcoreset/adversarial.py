"""Three-point planar instances on which merged coresets lose accuracy.

Both constructions put ``p1`` on the positive x-axis, ``p2`` at angle
``theta/2`` and ``p3`` at angle ``theta``.  The data is split as
``P1 = {p2, p3}`` and ``P2 = {p1}``; the per-part coresets are ``{p2}`` and
``{p1}`` and the merged coreset is ``{p1}``.

* ``T2``: all three points on the unit circle.  Every partial coreset is a
  ``(1 - cos(theta/2))``-coreset, yet ``{p1}`` is only a
  ``(1 - cos(theta))``-coreset of the whole set.
* ``T3``: each point is the foot of the previous one's normal line, so every
  partial coreset is exact (error 0), yet ``{p1}`` is only a
  ``(1 - cos(theta)) / (1 + cos(theta))``-coreset of the whole set.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadTheta, MalformedInstance
from .geometry import ConvexCombination, PointSet, epsilon_of, projection_length
from .solver import brute_force_distance

CLAUSE_TOL = 1e-12
NORM_REL_TOL = 1e-12
ANGLE_TOL = 1e-10

P1_PART = (1, 2)
P2_PART = (0,)
S1 = (1,)
S2 = (0,)
S_MERGED = (0,)


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not (0.0 < theta <= math.pi / 2):
        raise BadTheta(f"theta must lie in (0, pi/2], got {theta!r}")
    return theta


def t2_bound(theta: float) -> float:
    return 1.0 - math.cos(theta)


def t3_bound(theta: float) -> float:
    c = math.cos(theta)
    return (1.0 - c) / (1.0 + c)


@dataclass(frozen=True)
class AdversarialInstance:
    points: PointSet
    partition: tuple[tuple[int, ...], tuple[int, ...]]
    s1: tuple[int, ...]
    s2: tuple[int, ...]
    s: tuple[int, ...]
    theorem: str
    theta: float
    expected_small_eps: float
    expected_final_eps_lower_bound: float

    def sidecar(self) -> dict:
        """Everything but the coordinates, for the JSON file next to the CSV."""
        return {
            "theorem": self.theorem,
            "theta": self.theta,
            "partition": {"P1": list(self.partition[0]), "P2": list(self.partition[1])},
            "S1": list(self.s1),
            "S2": list(self.s2),
            "S": list(self.s),
            "expected_small_eps": self.expected_small_eps,
            "expected_final_eps_lower_bound": self.expected_final_eps_lower_bound,
        }

    @classmethod
    def from_sidecar(cls, points: PointSet, meta: dict | str) -> AdversarialInstance:
        if isinstance(meta, str):
            meta = json.loads(meta)
        try:
            return cls(
                points=points,
                partition=(tuple(meta["partition"]["P1"]), tuple(meta["partition"]["P2"])),
                s1=tuple(meta["S1"]),
                s2=tuple(meta["S2"]),
                s=tuple(meta["S"]),
                theorem=meta["theorem"],
                theta=float(meta["theta"]),
                expected_small_eps=float(meta["expected_small_eps"]),
                expected_final_eps_lower_bound=float(meta["expected_final_eps_lower_bound"]),
            )
        except (KeyError, TypeError) as exc:
            raise MalformedInstance(f"bad sidecar: {exc}") from exc


def _instance(points, theorem, theta, small, final) -> AdversarialInstance:
    return AdversarialInstance(
        points=PointSet(points),
        partition=(P1_PART, P2_PART),
        s1=S1,
        s2=S2,
        s=S_MERGED,
        theorem=theorem,
        theta=theta,
        expected_small_eps=small,
        expected_final_eps_lower_bound=final,
    )


def theorem2_instance(theta: float) -> AdversarialInstance:
    """Three unit vectors at angles 0, theta/2 and theta."""
    theta = _check_theta(theta)
    half = theta / 2
    pts = [
        [1.0, 0.0],
        [math.cos(half), math.sin(half)],
        [math.cos(theta), math.sin(theta)],
    ]
    return _instance(pts, "T2", theta, 1.0 - math.cos(half), t2_bound(theta))


def theorem3_instance(theta: float) -> AdversarialInstance:
    """``p2`` projects onto ``p1`` with length |p1|, ``p3`` onto ``p2`` with length |p2|."""
    theta = _check_theta(theta)
    half = theta / 2
    r3 = 1.0 / math.cos(half) ** 2
    pts = [
        [1.0, 0.0],
        [1.0, math.tan(half)],
        [r3 * math.cos(theta), r3 * math.sin(theta)],
    ]
    return _instance(pts, "T3", theta, 0.0, t3_bound(theta))


def make_instance(theorem, theta: float) -> AdversarialInstance:
    key = str(theorem).upper().lstrip("T")
    if key == "2":
        return theorem2_instance(theta)
    if key == "3":
        return theorem3_instance(theta)
    raise ValueError(f"theorem must be 2 or 3, got {theorem!r}")


@dataclass
class ClauseReport:
    theorem: str
    theta: float
    clauses: dict[int, bool]
    epsilons: dict[int, float]
    bound: float
    bound_attained: bool
    construction_ok: bool
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(self.clauses.values())

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "theta": self.theta,
            "clauses": {str(k): v for k, v in sorted(self.clauses.items())},
            "epsilons": {str(k): v for k, v in sorted(self.epsilons.items())},
            "bound": self.bound,
            "bound_attained": self.bound_attained,
            "construction_ok": self.construction_ok,
            "degenerate": self.degenerate,
            "notes": list(self.notes),
            "all_passed": self.all_passed,
        }


def _angle(u, v) -> float:
    c = float(u @ v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(min(1.0, max(-1.0, c)))


def _check_structure(inst: AdversarialInstance) -> None:
    n = len(inst.points)
    if inst.theorem not in ("T2", "T3"):
        raise MalformedInstance(f"unknown theorem tag {inst.theorem!r}")
    p1, p2 = (set(part) for part in inst.partition)
    if p1 & p2 or p1 | p2 != set(range(n)):
        raise MalformedInstance("partition must split all point indices into two disjoint parts")
    for name, sub, within in (("S1", inst.s1, p1), ("S2", inst.s2, p2), ("S", inst.s, set(inst.s1) | set(inst.s2))):
        if not sub or not set(sub) <= within:
            raise MalformedInstance(f"{name} must be a nonempty subset of its parent set")


def _construction_issues(inst: AdversarialInstance) -> list[str]:
    """Geometric invariants of the two constructions; empty when they hold."""
    pts = inst.points.points
    if pts.shape != (3, 2):
        return [f"expected three planar points, got shape {pts.shape}"]
    p1, p2, p3 = pts
    issues = []
    half = inst.theta / 2
    for name, got, want in (
        ("angle(p1, p2)", _angle(p1, p2), half),
        ("angle(p2, p3)", _angle(p2, p3), half),
        ("angle(p1, p3)", _angle(p1, p3), inst.theta),
    ):
        if abs(got - want) > ANGLE_TOL:
            issues.append(f"{name} = {got!r}, expected {want!r}")
    n1, n2, n3 = np.linalg.norm(pts, axis=1)
    if inst.theorem == "T2":
        if abs(n2 - n1) > NORM_REL_TOL * n1 or abs(n3 - n1) > NORM_REL_TOL * n1:
            issues.append("points do not share a common norm")
    else:
        if abs(projection_length(p2, p1) - n1) > NORM_REL_TOL * n1:
            issues.append("projection of p2 onto p1 differs from |p1|")
        if abs(projection_length(p3, p2) - n2) > NORM_REL_TOL * n2:
            issues.append("projection of p3 onto p2 differs from |p2|")
    return issues


def _best_witness(P: PointSet, subset: tuple[int, ...]) -> ConvexCombination:
    if len(subset) == 1:
        return ConvexCombination.vertex(P, subset[0])
    sub = P.subset(subset)
    _, comb = brute_force_distance(sub)
    return ConvexCombination({subset[i]: w for i, w in comb.weights.items()}, P)


def verify_instance(inst: AdversarialInstance) -> ClauseReport:
    """Measure each clause's error and compare with the construction's claims.

    Clauses (1)-(3) check the partial coresets against their parts; clause
    (4) requires the merged coreset's error over the full set to equal the
    lower bound exactly (to 1e-12), since these constructions attain it.
    Structural problems raise :class:`MalformedInstance`; failed geometric
    invariants are reported through ``construction_ok`` and ``notes``.
    """
    _check_structure(inst)
    P = inst.points
    part1, part2 = inst.partition
    merged_universe = tuple(sorted(set(inst.s1) | set(inst.s2)))

    def eps(subset, universe):
        return epsilon_of(_best_witness(P, subset), P.subset(universe)).epsilon_hat

    epsilons = {
        1: eps(inst.s1, part1),
        2: eps(inst.s2, part2),
        3: eps(inst.s, merged_universe),
        4: eps(inst.s, tuple(range(len(P)))),
    }
    small = inst.expected_small_eps
    if inst.theorem == "T3":
        clauses = {i: abs(epsilons[i]) <= CLAUSE_TOL for i in (1, 2, 3)}
    else:
        clauses = {i: epsilons[i] <= small + CLAUSE_TOL for i in (1, 2, 3)}
    bound = inst.expected_final_eps_lower_bound
    gap = epsilons[4] - bound
    attained = abs(gap) <= CLAUSE_TOL
    clauses[4] = attained

    notes = _construction_issues(inst)
    construction_ok = not notes
    if gap < -CLAUSE_TOL:
        notes.append(f"bound not attained: measured {epsilons[4]!r} < {bound!r}")
    elif gap > CLAUSE_TOL:
        notes.append(f"bound exceeded: measured {epsilons[4]!r} > {bound!r}")
    degenerate = inst.theorem == "T3" and inst.theta == math.pi / 2
    if degenerate:
        notes.append("degenerate certificate: merged witness is orthogonal to p3")
    return ClauseReport(
        theorem=inst.theorem,
        theta=inst.theta,
        clauses=clauses,
        epsilons=epsilons,
        bound=bound,
        bound_attained=attained,
        construction_ok=construction_ok,
        degenerate=degenerate,
        notes=notes,
    )

