"""Command-line interface.

Subcommands: ``solve`` (instance file -> certified-by-construction
allocation file), ``verify`` (certify any allocation; exits 1 on envy),
``gen`` (seeded instance generation) and ``bench`` (batch solve+certify over
a seed range with summary statistics).

Exit codes: 0 success, 1 domain failure (an allocation failed
certification), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from . import io
from .core import deviation, utility
from .errors import RedistrictError
from .generate import GenConfig, generate_instance
from .solver import solve
from .verifier import brute_force_check, check_1ref

__all__ = ["main", "entry"]


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--students", type=int, required=True, help="number of students")
    p.add_argument("--schools", type=int, required=True, help="number of schools")
    p.add_argument("--edge-prob", type=float, default=0.0,
                   help="probability of each extra accessibility edge (default 0)")
    p.add_argument("--max-value", type=int, default=1000, help="school values drawn from [0, V]")
    p.add_argument("--split", default="equal", help="group split: equal | ratio:p | exact:n1")


def _config(args, seed: int) -> GenConfig:
    return GenConfig(
        seed=seed,
        num_students=args.students,
        num_schools=args.schools,
        extra_edge_prob=args.edge_prob,
        max_value=args.max_value,
        group_split=args.split,
    )


def _cmd_solve(args) -> int:
    inst = io.read_instance(args.instance)
    result = solve(inst)
    io.write_allocation(args.output, inst, result.allocation, result.path_taken.value)
    alloc = result.allocation
    print(
        f"path: {result.path_taken.value}  "
        f"u1={utility(inst, alloc, 1)} u2={utility(inst, alloc, 2)} "
        f"deviation={deviation(inst, alloc)}"
    )
    return 0


def _cmd_verify(args) -> int:
    inst = io.read_instance(args.instance)
    alloc = io.read_allocation(args.allocation, inst)
    report = brute_force_check(inst, alloc) if args.brute_force else check_1ref(inst, alloc)
    print(report.summary())
    return 0 if report.is_1ref else 1


def _cmd_gen(args) -> int:
    inst = generate_instance(_config(args, args.seed))
    io.write_instance(args.output, inst)
    print(f"wrote {args.output}: {inst!r}")
    return 0


def _parse_seed_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise RedistrictError(f"seed range must look like A..B, got {text!r}")
    return range(int(lo), int(hi) + 1)


def _bench_one(payload) -> tuple[str, int, bool]:
    args_dict, seed = payload
    cfg = GenConfig(seed=seed, **args_dict)
    inst = generate_instance(cfg)
    result = solve(inst)
    ok = check_1ref(inst, result.allocation).is_1ref
    return result.path_taken.value, result.adjust_iterations, ok


def _cmd_bench(args) -> int:
    seeds = _parse_seed_range(args.seeds)
    args_dict = dict(
        num_students=args.students,
        num_schools=args.schools,
        extra_edge_prob=args.edge_prob,
        max_value=args.max_value,
        group_split=args.split,
    )
    payloads = [(args_dict, seed) for seed in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, payloads, chunksize=64))
    else:
        rows = [_bench_one(p) for p in payloads]

    path_counts: dict[str, int] = {}
    max_iters = 0
    certified = 0
    for path, iters, ok in rows:
        path_counts[path] = path_counts.get(path, 0) + 1
        max_iters = max(max_iters, iters)
        certified += ok

    print(f"seeds: {len(rows)}  students={args.students} schools={args.schools} "
          f"edge_prob={args.edge_prob} split={args.split}")
    print(f"{'path':<16}{'count':>8}{'share':>9}")
    for path, count in sorted(path_counts.items()):
        print(f"{path:<16}{count:>8}{count / len(rows):>9.1%}")
    print(f"max adjust iterations: {max_iters} (bound {args.schools // 2})")
    rate = certified / len(rows)
    print(f"verifier pass rate: {rate:.2%}")
    return 0 if certified == len(rows) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="redistrict",
        description="Envy-free school redistricting between two groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a 1-relaxed envy-free allocation")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("verify", help="certify an allocation; exit 1 on envy")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-a", "--allocation", required=True)
    p.add_argument("--brute-force", action="store_true",
                   help="use the enumeration oracle instead of the flow certifier")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--seed", type=int, required=True)
    _add_gen_flags(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("bench", help="solve and certify a range of seeds")
    p.add_argument("--seeds", required=True, help="inclusive seed range A..B")
    _add_gen_flags(p)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.set_defaults(fn=_cmd_bench)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        return args.fn(args)
    except RedistrictError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
