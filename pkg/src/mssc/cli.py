"""``mssc`` command line.

Exit codes: 0 success, 2 unparsable input or bad arguments, 3 instance too
large for an exhaustive method, 4 LP solver did not reach an optimum.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import experiment as ex
from .exact import SizeGuardError, setcover_reduce
from .io import ParseError, format_instance, parse_instance, parse_setcover, read_text
from .lp import SolverError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_GUARD = 3
EXIT_SOLVER = 4


class UsageError(ValueError):
    pass


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_gen(args) -> int:
    try:
        inst = ex.generate_instance(args.n, args.T, args.r, args.dist, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    comment = f"gen n={args.n} T={args.T} r={args.r} dist={args.dist} seed={args.seed}"
    _write(format_instance(inst, comment), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    parse_instance(read_text(args.file))
    print("ok")
    return EXIT_OK


def _cell(x) -> str:
    if x is None:
        return ""
    return repr(float(x)) if isinstance(x, float) else str(x)


def cmd_solve(args) -> int:
    inst = parse_instance(read_text(args.file))
    out = ex.run_algorithm(inst, args.algo, args.seed)
    report = {"n": inst.n, "T": inst.T, "r": inst.r_bound, **out.as_dict()}
    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["algo", "n", "T", "r", "seed", "covering", "moving", "total", "lp_objective"])
        w.writerow([_cell(x) for x in (
            out.algo, inst.n, inst.T, inst.r_bound, out.seed,
            out.total_covering, out.total_moving, out.total, out.lp_objective,
        )])
    else:
        print(json.dumps(report, sort_keys=True))
    return EXIT_OK


def _sizes(text: str) -> list[tuple[int, int]]:
    sizes = []
    for item in text.split(","):
        try:
            n, T = item.lower().split("x")
            sizes.append((int(n), int(T)))
        except ValueError:
            raise UsageError(f"bad size {item!r}, expected NxT like 4x3") from None
    return sizes


def _seeds(text: str) -> list[int]:
    """``5`` means seeds 0..4; ``3,8,9`` lists them; ``10:20`` is a range."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi)))
        if "," in text:
            return [int(s) for s in text.split(",")]
        return list(range(int(text)))
    except ValueError:
        raise UsageError(f"bad seed list {text!r}") from None


def cmd_experiment(args) -> int:
    algos = [a for a in args.algos.split(",") if a]
    bad = [a for a in algos if a not in ex.ALGORITHMS]
    if bad:
        raise UsageError(f"unknown algorithms {bad}; choose from {', '.join(ex.ALGORITHMS)}")
    cfg = ex.ExperimentConfig(
        sizes=_sizes(args.sizes),
        trials=args.trials,
        seeds=_seeds(args.seeds),
        algorithms=algos,
        r=args.r,
        distribution=args.dist,
        base_seed=args.base_seed,
    )
    rows = ex.run_experiment(cfg)
    ex.write_csv_atomic(args.output, ex.CSV_HEADER, [row.cells() for row in rows])
    if args.summary:
        ex.write_csv_atomic(args.summary, ex.SUMMARY_HEADER, ex.summarize(rows))
    return EXIT_OK


def cmd_reduce(args) -> int:
    sc = parse_setcover(read_text(args.file))
    inst = setcover_reduce(sc, args.dummies)
    d = inst.n - sc.n_elements
    comment = f"reduced from set cover: {d} dummies (ids 0..{d - 1}), element k has id {d}+k-1"
    _write(format_instance(inst, comment), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mssc", description="Multistage min-sum set cover toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--T", type=int, required=True)
    g.add_argument("--r", type=int, required=True, help="request size (maximum size for mixed)")
    g.add_argument("--dist", choices=ex.DISTRIBUTIONS, default="uniform-r")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="parse and validate an instance file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", help="solve an instance with one algorithm")
    s.add_argument("file", help="instance file, or - for stdin")
    s.add_argument("--algo", choices=ex.ALGORITHMS, required=True)
    s.add_argument("--seed", type=int, default=0, help="seed for --algo rand")
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--csv", action="store_true", help="one-row CSV report")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("experiment", help="run a batch and write a CSV")
    e.add_argument("--sizes", required=True, help="comma-separated NxT, e.g. 4x3,5x4")
    e.add_argument("--trials", type=int, default=1, help="instances per size")
    e.add_argument("--seeds", default="1", help="rand seeds: count, list or lo:hi")
    e.add_argument("--algos", default="greedy,rand", help="comma-separated algorithms")
    e.add_argument("--r", type=int, default=2)
    e.add_argument("--dist", choices=ex.DISTRIBUTIONS, default="uniform-r")
    e.add_argument("--base-seed", type=int, default=0, help="seed for instance generation")
    e.add_argument("-o", "--output", required=True)
    e.add_argument("--summary", help="also write per-group mean/stderr CSV here")
    e.set_defaults(func=cmd_experiment)

    r = sub.add_parser("reduce", help="build an instance from a set-cover file")
    r.add_argument("file")
    r.add_argument("--dummies", type=int, help="number of padding elements")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"mssc: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizeGuardError as exc:
        print(f"mssc: too large: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except SolverError as exc:
        print(f"mssc: solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"mssc: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
