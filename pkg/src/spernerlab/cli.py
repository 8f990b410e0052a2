"""Command-line driver: ``spernerlab {solve,check,gen,bench,adversary}``.

Exit codes: 0 success, 2 promise violation, 3 parse/input error,
4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from spernerlab.adversary import adversary_bounds, snake_gamma, snake_inputs, snake_problem
from spernerlab.bench import fit_exponent, run_bench, to_csv
from spernerlab.chains import Ring, check_conservation, simplex_flow
from spernerlab.complex import (
    NotOrientable,
    NotPseudoManifold,
    OrientedSimplex,
    PseudoManifold,
    make_simplex,
    manifold_from_json,
)
from spernerlab.instances import (
    SnakeOracle,
    grid_coords,
    labeling_cb,
    random_manifold_2d,
    regular_promise_violations,
    regular_subdivision,
    snake_reduce,
)
from spernerlab.oracle import LabelingOracle
from spernerlab.separation import BFS_LEVEL, EXACT, TooLargeForExact, grid_line
from spernerlab.solver import (
    InternalInconsistency,
    PromiseViolation,
    SpmInstance,
    brute_force,
    interior_budget,
    solve_ospm,
    solve_spm,
    spm_case,
)

EXIT_OK, EXIT_PROMISE, EXIT_PARSE, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors share exit code 3 with unreadable input instead of argparse's 2
    def error(self, message: str):
        raise InputError(f"{self.prog}: {message}")


@dataclass
class Loaded:
    manifold: PseudoManifold
    labels: dict[int, int]
    coords: dict[int, tuple[int, int]] | None = None
    family: str = "file"
    m: int | None = None
    b: str | None = None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def read_labels(path: str) -> dict[int, int]:
    data = json.loads(Path(path).read_text())
    block = data["labels"] if "labels" in data else data
    return {int(k): int(v) for k, v in block.items()}


def load_instance(args) -> Loaded:
    try:
        if args.file:
            data = json.loads(Path(args.file).read_text())
            manifold = manifold_from_json(data)
            if args.labels:
                labels = read_labels(args.labels)
            elif "labels" in data:
                labels = {int(k): int(v) for k, v in data["labels"].items()}
            else:
                raise InputError("no labels given (use --labels)")
            coords = None
            if "coords" in data:
                coords = {int(k): (int(p[0]), int(p[1])) for k, p in data["coords"].items()}
            return Loaded(manifold, labels, coords)
        if args.family in ("regular2spm", "snake"):
            if args.m is None:
                raise InputError(f"--family {args.family} needs --m")
            b = args.b or ""
            manifold = regular_subdivision(args.m)
            labels = read_labels(args.labels) if args.labels else labeling_cb(b, args.m)
            return Loaded(manifold, labels, grid_coords(args.m), args.family, args.m, b)
        if args.family == "random":
            manifold, labels = random_manifold_2d(args.seed, args.size)
            return Loaded(manifold, labels, family="random")
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read instance: {exc}") from exc
    except (NotPseudoManifold, NotOrientable) as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError("give --file or --family")


def _strategy(name: str | None, loaded: Loaded):
    name = name or ("gridline" if loaded.coords else "bfslevel")
    if name == "gridline":
        if not loaded.coords:
            raise InputError("gridline needs grid coordinates")
        return name, grid_line(loaded.coords)
    return name, {"exact": EXACT, "bfslevel": BFS_LEVEL}[name]


def _facet_json(facet, coords) -> dict:
    out = {"vertices": list(facet)}
    if coords:
        out["points"] = [list(coords[v]) for v in facet]
    return out


def cmd_solve(args) -> int:
    loaded = load_instance(args)
    m = loaded.manifold
    name, strategy = _strategy(args.strategy, loaded)
    start = make_simplex(int(v) for v in args.start.split(",")) if args.start else m.facets[0]

    if loaded.family == "snake":
        return _solve_snake(args, loaded, name, strategy)

    oracle = LabelingOracle(loaded.labels)
    inst = SpmInstance(m, start, oracle, oriented=args.oriented)
    solver = solve_ospm if args.oriented else solve_spm
    result = solver(inst, strategy)
    report = {
        "family": loaded.family,
        "strategy": name,
        "solution": _facet_json(result.facet, loaded.coords),
        "flow": result.flow_value,
        "queries_total": result.queries,
        "queries_boundary": result.boundary_queries,
        "queries_interior": result.interior_queries,
        "rounds": len(result.rounds),
    }
    if loaded.coords:
        report["solution"]["corner"] = [min(loaded.coords[v][k] for v in result.facet) for k in (0, 1)]
    if name == "exact":
        try:
            report["interior_budget"] = interior_budget(m, strategy.cap)
        except TooLargeForExact:
            report["interior_budget"] = None
    print(_dump(report))
    return EXIT_OK


def _solve_snake(args, loaded: Loaded, name: str, strategy) -> int:
    snake = SnakeOracle(loaded.b, loaded.m)
    oracle, beta = snake_reduce(snake)
    m = loaded.manifold
    result = solve_spm(SpmInstance(m, m.facets[0], oracle), strategy)
    answer = beta(result.facet)
    report = {
        "family": "snake",
        "strategy": name,
        "answer": list(answer),
        "expected": list(snake.answer()),
        "sperner_queries": result.queries,
        "snake_queries": snake.count,
        "solution": _facet_json(result.facet, loaded.coords),
    }
    print(_dump(report))
    if tuple(answer) != snake.answer():
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_check(args) -> int:
    loaded = load_instance(args)
    m, labels = loaded.manifold, loaded.labels
    missing = sorted(m.vertices - labels.keys())
    if missing:
        raise InputError(f"vertex {missing[0]} has no label")
    report: dict = {"family": loaded.family, "facets": len(m.facets), "vertices": len(m.vertices), "valid": True}
    code = EXIT_OK

    lhs, rhs = check_conservation(m, labels)
    report["conservation"] = {"interior_flow": lhs, "boundary_flow": rhs, "holds": lhs == rhs}
    if lhs != rhs:
        code = EXIT_INTERNAL

    oriented = bool(args.oriented)
    start = make_simplex(int(v) for v in args.start.split(",")) if args.start else m.facets[0]
    if loaded.family in ("regular2spm", "snake"):
        violations = regular_promise_violations(labels, loaded.m)
        report["promise"] = {"kind": "regular2spm", "holds": not violations, "violations": violations}
    else:
        case = spm_case(m, labels, start, oriented)
        report["promise"] = {"kind": "ospm" if oriented else "spm", "holds": case is not None, "case": case}
    if not report["promise"]["holds"] and code == EXIT_OK:
        code = EXIT_PROMISE

    fully = sorted(f for f in m.facets if simplex_flow(OrientedSimplex(f), labels) != 0)
    report["fully_labeled"] = len(fully)
    report["unique"] = len(fully) == 1
    if m.oriented:
        report["sources"] = len(brute_force(m, labels, 1, Ring.Z))
        report["sinks"] = len(brute_force(m, labels, -1, Ring.Z))
    print(_dump(report))
    return code


def cmd_gen(args) -> int:
    loaded = load_instance(args)
    out = loaded.manifold.to_json()
    out["labels"] = {str(v): loaded.labels[v] for v in sorted(loaded.labels)}
    if loaded.coords:
        out["coords"] = {str(v): list(p) for v, p in sorted(loaded.coords.items())}
    if loaded.family == "snake":
        out["oracle"] = {"rule": "snake", "m": loaded.m, "b": loaded.b}
    text = _dump(out)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.family != "regular2spm":
        raise InputError("bench supports --family regular2spm")
    rows = run_bench(args.m, args.samples, args.strategy, args.seed, args.jobs, timing=not args.no_timing)
    text = to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    fit = fit_exponent(rows)
    summary = {
        "exponent": fit.exponent,
        "worst_interior": {str(m): q for m, q in fit.worst.items()},
        "mean_interior": {str(m): round(q, 3) for m, q in fit.mean.items()},
        "boundary_queries": {str(r.m): r.queries_total - r.queries_interior for r in rows},
    }
    print(_dump(summary), file=sys.stderr)
    return EXIT_OK


def cmd_adversary(args) -> int:
    if args.family != "snake":
        raise InputError("adversary supports --family snake")
    gamma = snake_gamma(args.m)
    problem = snake_problem(args.m)
    rep = adversary_bounds(problem, gamma)
    names = snake_inputs(args.m)
    coords = grid_coords(args.m)

    def witness(w):
        x, y, k = w
        return {"x": names[x], "y": names[y], "point": list(coords[k])}

    print(
        _dump(
            {
                "family": "snake",
                "m": args.m,
                "inputs": len(names),
                "sigma_min": rep.sigma_min,
                "sigma_max": rep.sigma_max,
                "rqc_bound": rep.rqc_float,
                "rqc_bound_exact": str(rep.rqc),
                "qqc_bound": rep.qqc,
                "qqc_bound_squared_exact": str(rep.qqc_squared),
                "rqc_witness": witness(rep.witness_rqc),
                "qqc_witness": witness(rep.witness_qqc),
            }
        )
    )
    return EXIT_OK


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["regular2spm", "snake", "random"])
    p.add_argument("--m", type=int)
    p.add_argument("--b", default="")
    p.add_argument("--file")
    p.add_argument("--labels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=20)
    p.add_argument("--start", help="start facet as comma-separated vertex ids")
    p.add_argument("--oriented", action="store_true", help="solve or audit the oriented problem")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spernerlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance through the query-counting oracle")
    _add_instance_args(p)
    p.add_argument("--strategy", choices=["exact", "gridline", "bfslevel"])
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="audit an instance by reading every label")
    _add_instance_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write an instance as JSON")
    _add_instance_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="query-count scaling on REGULAR 2-SPM")
    p.add_argument("--family", default="regular2spm")
    p.add_argument("--m", type=int, nargs="+", required=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--strategy", choices=["exact", "gridline", "bfslevel"], default="gridline")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--no-timing", action="store_true", help="leave wall_time_ms empty so rows are reproducible")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("adversary", help="weighted adversary bounds for SNAKE")
    p.add_argument("--family", default="snake")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_adversary)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PromiseViolation as exc:
        print(f"promise violation: {exc}", file=sys.stderr)
        return EXIT_PROMISE
    except (InternalInconsistency, AssertionError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
