"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 invalid parameter or input file,
3 infeasible geometry (origin in hull, not separable, angle too wide),
4 iteration limit reached without convergence, 5 adversarial clause check
failed.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import datasets
from .adversarial import make_instance, verify_instance
from .errors import BadTheta, CoresetError, IterationLimit, OriginInsideHull, ParseError, WideAngle
from .geometry import diameter_squared, witness_point
from .io import read_labeled, read_points, write_labeled, write_points
from .maxmargin import affine_from_lifted, lift, margin_certificate, solve_margin
from .merge import stream_process, split_batches
from .solver import SolverConfig, frank_wolfe, size_bound

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARAM = 2
EXIT_GEOMETRY = 3
EXIT_ITERATIONS = 4
EXIT_UNVERIFIED = 5

_PI_EXPR = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


class UsageError(Exception):
    pass


class BadParameter(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_angle(text: str) -> float:
    """Accept plain radians or ``pi``, ``pi/3``, ``2*pi/5``-style expressions."""
    m = _PI_EXPR.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _floats(arr) -> list:
    return [float(v) for v in np.asarray(arr).ravel()]


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> SolverConfig:
    try:
        return SolverConfig(epsilon_target=args.epsilon, max_iterations=args.max_iterations)
    except ValueError as exc:
        raise BadParameter(str(exc)) from exc


def cmd_distance(args) -> int:
    P = read_points(args.input)
    config = _config(args)
    res = frank_wolfe(P, config)
    e_proxy = diameter_squared(P) / res.norm**2
    bound = size_bound(e_proxy, config.epsilon_target)
    size = len(res.coreset_indices)
    report = {
        "witness": _floats(witness_point(res.witness)),
        "norm": res.norm,
        "epsilon_hat": res.certificate.epsilon_hat,
        "epsilon_target": config.epsilon_target,
        "worst_index": res.certificate.worst_index,
        "coreset_indices": list(res.coreset_indices),
        "weights": {str(i): w for i, w in res.witness.weights.items()},
        "iterations": res.iterations,
        "converged": res.converged,
        "size_bound": {
            "excentricity_proxy": e_proxy,
            "bound": bound,
            "size": size,
            "ok": size <= max(1, bound),
        },
    }
    _emit(_dump(report), args.output)
    return EXIT_OK if res.converged else EXIT_ITERATIONS


def cmd_adversarial(args) -> int:
    inst = make_instance(args.theorem, args.theta)
    report = verify_instance(inst)
    if args.instance_prefix:
        prefix = Path(args.instance_prefix)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        prefix.with_suffix(".csv").write_text(write_points(inst.points))
        prefix.with_suffix(".json").write_text(_dump(inst.sidecar()))
    out = {
        "instance": {"points": inst.points.points.tolist(), **inst.sidecar()},
        "report": report.to_dict(),
    }
    _emit(_dump(out), args.output)
    return EXIT_OK if report.all_passed else EXIT_UNVERIFIED


def cmd_stream(args) -> int:
    P = read_points(args.input)
    if args.batch_size < 1:
        raise BadParameter(f"--batch-size must be >= 1, got {args.batch_size}")
    report = stream_process(split_batches(P, args.batch_size), args.strategy, _config(args), args.theta_bound)
    _emit(report.to_json() if args.format == "json" else report.to_csv(), args.output)
    return EXIT_OK


def cmd_margin(args) -> int:
    L = read_labeled(args.input)
    config = _config(args)
    solved_on = L if args.lift is None else lift(L, args.lift)
    res = solve_margin(solved_on, config)
    cert = margin_certificate(res, solved_on)
    report = {
        "normal": _floats(res.normal),
        "margin": res.margin,
        "support_indices": list(res.support_indices),
        "epsilon_hat": cert.epsilon_hat,
        "epsilon_target": config.epsilon_target,
        "converged": res.converged,
        "iterations": res.iterations,
        "two_class": L.two_class,
    }
    if args.lift is not None:
        w, b = affine_from_lifted(res.normal, args.lift)
        report["lift"] = {
            "rho": args.lift,
            "w": _floats(w),
            "b": b,
            "note": "margin is measured in the lifted space, not the exact affine margin",
        }
    _emit(_dump(report), args.output)
    return EXIT_OK if res.converged else EXIT_ITERATIONS


def cmd_generate(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.n < 1 or args.dim < 1:
        raise BadParameter("--n and --dim must be positive")
    if args.kind == "separable":
        text = write_points(datasets.separable_points(rng, args.n, args.dim))
    elif args.kind == "cone":
        text = write_points(datasets.cone_points(rng, args.n, args.dim))
    else:
        text = write_labeled(datasets.labeled_separable(rng, args.n, args.dim))
    _emit(text, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdcoreset", description="Polytope distance coresets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, solver=True):
        p.add_argument("--output", help="write the report here instead of stdout")
        if solver:
            p.add_argument("--epsilon", type=float, default=0.01)
            p.add_argument("--max-iterations", type=int, default=None)

    p = sub.add_parser("distance", help="min-norm point of the hull of a point CSV")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("adversarial", help="build and verify a merge-hardness instance")
    p.add_argument("--theorem", choices=["2", "3"], required=True)
    p.add_argument("--theta", type=parse_angle, required=True, help="radians, or e.g. pi/3")
    p.add_argument("--instance-prefix", help="also write PREFIX.csv and PREFIX.json")
    common(p, solver=False)
    p.set_defaults(func=cmd_adversarial)

    p = sub.add_parser("stream", help="merge-and-reduce over consecutive batches of a point CSV")
    p.add_argument("input")
    p.add_argument("--batch-size", type=int, required=True)
    p.add_argument("--strategy", choices=["min-norm", "rerun", "full"], default="rerun")
    p.add_argument("--theta-bound", type=parse_angle, default=None, help="fixed merge angle for min-norm")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    common(p)
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("margin", help="homogeneous max-margin separator of a labeled CSV")
    p.add_argument("input")
    p.add_argument("--lift", type=float, default=None, metavar="RHO", help="append constant coordinate RHO")
    common(p)
    p.set_defaults(func=cmd_margin)

    p = sub.add_parser("generate", help="write a seeded synthetic point CSV")
    p.add_argument("--kind", choices=["separable", "cone", "labeled"], default="separable")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    common(p, solver=False)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (OriginInsideHull, WideAngle) as exc:
        print(f"infeasible geometry: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except IterationLimit as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ITERATIONS
    except (BadParameter, ParseError, BadTheta, CoresetError, ValueError, OSError) as exc:
        print(f"invalid parameter: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
