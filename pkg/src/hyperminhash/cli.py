"""Command-line interface: ``hyperminhash <command> ...``.

Exit codes: 0 success, 1 other error, 2 usage, 3 I/O error,
4 incompatible sketches, 5 malformed sketch file, 6 undefined estimate
(both sketches empty), 7 verification failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import __version__
from .collisions import (
    collision_bound,
    expected_collisions_approx,
    expected_collisions_exact,
)
from .errors import (
    EmptySketchError,
    HyperMinHashError,
    IncompatibleSketchError,
    SketchFileError,
)
from .estimators import estimate_cardinality, intersection, jaccard
from .experiments import (
    DEFAULT_CARDINALITIES,
    DEFAULT_MAX_ITEMS,
    run_collision_trials,
    run_similarity_sweep,
    write_csv,
)
from .serialization import read_sketch, write_sketch
from .sketch import HmhSketch, SketchParams, union

SEED_ENV = "HYPERMINHASH_SEED"
EXIT_IO = 3
EXIT_INCOMPATIBLE = 4
EXIT_BAD_FILE = 5
EXIT_EMPTY = 6
EXIT_VERIFY_FAILED = 7

_BATCH = 1 << 16


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw, 0) if raw else 0


def _params(args) -> SketchParams:
    return SketchParams(p=args.p, q=args.q, r=args.r, seed=args.seed)


def _open_input(path):
    if path == "-":
        return sys.stdin.buffer
    return open(path, "rb")


def cmd_sketch(args) -> int:
    sk = HmhSketch(_params(args))
    count = 0
    fh = _open_input(args.input)
    try:
        batch = []
        for line in fh:
            batch.append(line[:-1] if line.endswith(b"\n") else line)
            if len(batch) >= _BATCH:
                sk.update(batch)
                count += len(batch)
                batch.clear()
        sk.update(batch)
        count += len(batch)
    finally:
        if fh is not sys.stdin.buffer:
            fh.close()
    write_sketch(args.output, sk)
    print(f"items={count} distinct_estimate={estimate_cardinality(sk):.6g} output={args.output}")
    return 0


def cmd_union(args) -> int:
    out = read_sketch(args.a)
    for path in args.rest:
        out = union(out, read_sketch(path))
    write_sketch(args.output, out)
    print(f"distinct_estimate={estimate_cardinality(out):.6g} output={args.output}")
    return 0


def cmd_card(args) -> int:
    print(repr(estimate_cardinality(read_sketch(args.a))))
    return 0


def cmd_jaccard(args) -> int:
    res = jaccard(read_sketch(args.a), read_sketch(args.b), args.correction)
    print(
        f"jaccard={res.estimate!r} matched={res.matched} occupied={res.occupied} "
        f"expected_collisions={res.correction!r} correction={res.correction_method}"
    )
    return 0


def cmd_intersect(args) -> int:
    print(repr(intersection(read_sketch(args.a), read_sketch(args.b), args.correction)))
    return 0


def cmd_expected_collisions(args) -> int:
    params = SketchParams(p=args.p, q=args.q, r=args.r)
    n, m = max(args.n, args.m), min(args.n, args.m)
    if args.approx:
        e = expected_collisions_approx(n, m, params)
    else:
        e = expected_collisions_exact(n, m, params)
    print(f"expected_collisions={e!r} bound={collision_bound(n, params)!r}")
    return 0


def cmd_sweep(args) -> int:
    rows = run_similarity_sweep(
        cardinalities=args.cardinalities,
        trials=args.trials,
        true_jaccard=float(Fraction(args.jaccard)),
        seed=args.seed,
        max_items=args.max_items,
    )
    _emit_csv(rows, args.output)
    return 0


def cmd_verify(args) -> int:
    s = run_collision_trials(_params(args), args.n, args.m, args.trials, args.seed)
    _emit_csv([s], args.output)
    return 0 if s.passed else EXIT_VERIFY_FAILED


def _emit_csv(records, path) -> None:
    if path in (None, "-"):
        write_csv(records, sys.stdout)
    else:
        with open(path, "w", newline="") as fh:
            write_csv(records, fh)


def _add_pqr(sp, p=12, q=6, r=10, seed=True):
    sp.add_argument("-p", type=int, default=p, help=f"log2 of bucket count (default {p})")
    sp.add_argument("-q", type=int, default=q, help=f"exponent cap is 2**q (default {q})")
    sp.add_argument("-r", type=int, default=r, help=f"mantissa bits (default {r})")
    if seed:
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=default_seed())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperminhash", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sketch", help="sketch a newline-delimited item stream")
    sp.add_argument("input", help="input file, or - for stdin")
    sp.add_argument("-o", "--output", required=True)
    _add_pqr(sp)
    sp.set_defaults(func=cmd_sketch)

    sp = sub.add_parser("union", help="merge sketch files")
    sp.add_argument("a")
    sp.add_argument("rest", nargs="+")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_union)

    sp = sub.add_parser("card", help="estimate distinct count")
    sp.add_argument("a")
    sp.set_defaults(func=cmd_card)

    for name, func, helptext in (
        ("jaccard", cmd_jaccard, "estimate the Jaccard index"),
        ("intersect", cmd_intersect, "estimate the intersection size"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("a")
        sp.add_argument("b")
        sp.add_argument(
            "--correction", choices=["none", "exact", "approx"], default="none"
        )
        sp.set_defaults(func=func)

    sp = sub.add_parser("expected-collisions", help="expected collisions of disjoint sets")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-m", type=int, required=True)
    _add_pqr(sp, seed=False)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--approx", action="store_true")
    sp.set_defaults(func=cmd_expected_collisions)

    sp = sub.add_parser("sweep", help="Jaccard accuracy sweep, CSV output")
    sp.add_argument(
        "--cardinalities",
        type=lambda s: [int(x, 0) for x in s.split(",")],
        default=list(DEFAULT_CARDINALITIES),
        help="comma-separated set sizes",
    )
    sp.add_argument("--trials", type=int, default=30)
    sp.add_argument("--jaccard", default="1/3", help="true Jaccard index, e.g. 1/3")
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=default_seed())
    sp.add_argument("--max-items", type=int, default=DEFAULT_MAX_ITEMS)
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify-collisions", help="Monte-Carlo check of the collision model")
    _add_pqr(sp, p=4, q=4, r=3)
    sp.add_argument("-n", type=int, default=1000)
    sp.add_argument("-m", type=int, default=1000)
    sp.add_argument("--trials", type=int, default=2000)
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IncompatibleSketchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except SketchFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FILE
    except EmptySketchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except HyperMinHashError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
