"""Command-line interface: ``linext <command> ...``.

Exit codes: 0 success, 2 unreadable or invalid input, 3 shape or strategy
mismatch, 4 size limit exceeded, 5 infeasible build target.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import errors
from ._bits import to_mask
from .counting import STRATEGIES, CountOptions, count
from .enumeration import enumerate_backtracking, enumerate_modular, enumerate_pivots
from .io import (
    digraph_to_doc,
    dumps,
    load_json,
    parse_network,
    parse_partition,
    parse_poset,
    parse_reverse,
)
from .modular import (
    ModularPartition,
    _module_mask_ok,
    classify_quotient,
    find_inconsistent_pairs,
    find_modular_partition,
    is_poset_partition,
    joined_structure_for,
    normalize_blocks,
    quotient_graph,
    the_ones_resolution,
)
from .netbuild import assemble_network, verify_network
from .poset import incomparability_graph
from .tournament import verify_three_way

log = logging.getLogger("linext")

EXIT_PARSE, EXIT_SHAPE, EXIT_LIMIT, EXIT_INFEASIBLE = 2, 3, 4, 5
ENUM_CAP = 100_000

_EXIT_FOR = (
    ((errors.SizeError,), EXIT_LIMIT),
    ((errors.InfeasibleError,), EXIT_INFEASIBLE),
    ((errors.ParseError, errors.RangeError, errors.CycleError, errors.PartitionError,
      errors.EmptySetError, errors.NotPermutationError), EXIT_PARSE),
)


def _exit_code(exc: errors.LinextError) -> int:
    for kinds, code in _EXIT_FOR:
        if isinstance(exc, kinds):
            return code
    if isinstance(exc, errors.MismatchError):
        return 1
    return EXIT_SHAPE


def _options(args, partition=None) -> CountOptions:
    return CountOptions(
        strategy=getattr(args, "strategy", "auto"),
        partition=partition,
        brute_limit=args.brute_limit,
        dp_limit=args.dp_limit,
        workers=args.threads,
    )


def cmd_count(args) -> int:
    P = parse_poset(load_json(args.poset))
    partition = parse_partition(load_json(args.partition)) if args.partition else None
    report = count(P, _options(args, partition))
    print(dumps(report.to_dict()))
    return 0


def _emit(ext, fmt):
    if fmt == "jsonl":
        return dumps({"order": list(ext)})
    return " ".join(map(str, ext))


def cmd_enumerate(args) -> int:
    P = parse_poset(load_json(args.poset))
    blocks = parse_partition(load_json(args.partition)) if args.partition else None
    if args.limit is None:
        total = count(P, _options(args)).count
        if total > args.cap:
            raise errors.SizeError(f"{total} extensions exceed the cap {args.cap}; pass --limit")
    if args.method == "backtracking":
        stream = enumerate_backtracking(P, limit=max(P.n, 1))
    elif blocks is None:
        raise errors.ShapeError(f"--method {args.method} needs --partition")
    elif args.method == "modular":
        stream = enumerate_modular(P, blocks)
    else:
        js = joined_structure_for(P, blocks)
        if js is None:
            raise errors.ShapeError("partition has no joined numbering")
        stream = enumerate_pivots(js)
    emitted = 0
    out = sys.stdout
    for ext in stream:
        if args.limit is not None and emitted >= args.limit:
            break
        out.write(_emit(ext, args.format) + "\n")
        emitted += 1
    print(f"total {emitted}", file=sys.stderr)
    return 0


def cmd_skeleton(args) -> int:
    P = parse_poset(load_json(args.poset))
    IG = incomparability_graph(P)
    if args.partition:
        part = ModularPartition(tuple(parse_partition(load_json(args.partition))), IG)
    else:
        part = find_modular_partition(IG)
        if part is None:
            raise errors.ShapeError("no nontrivial modular partition found")
    Q = quotient_graph(IG, part.blocks)
    cls = classify_quotient(Q)
    print(dumps({
        "blocks": part.as_lists(),
        "edges": [list(e) for e in sorted(Q.edges)],
        "shape": cls.shape.value,
        "witness": list(cls.witness),
    }))
    return 0


def cmd_verify(args) -> int:
    P = parse_poset(load_json(args.poset))
    blocks = normalize_blocks(parse_partition(load_json(args.partition)), P.n)
    IG = incomparability_graph(P)
    graph_modular = all(_module_mask_ok(IG, to_mask(b)) for b in blocks)
    report = {"graph_modular": graph_modular, "poset_modular": False, "inconsistent_pairs": None, "resolution": None}
    if graph_modular:
        report["poset_modular"] = is_poset_partition(P, blocks)
        report["inconsistent_pairs"] = [list(p) for p in find_inconsistent_pairs(P, blocks)]
        js = joined_structure_for(P, blocks)
        if js is not None:
            try:
                report["resolution"] = the_ones_resolution(P, js).value
            except errors.ResolutionError:
                report["resolution"] = None
    print(dumps(report))
    return 0


def cmd_equiv(args) -> int:
    R = parse_reverse(load_json(args.reverse))
    print(dumps(verify_three_way(R).to_dict()))
    return 0


def cmd_build(args) -> int:
    spec = parse_network(load_json(args.spec))
    G, blocks = assemble_network(spec, workers=args.threads)
    achieved = verify_network(G, blocks)
    doc = digraph_to_doc(G)
    doc["blocks"] = [sorted(b) for b in blocks]
    doc["achieved"] = [str(c) for c in achieved]
    text = dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linext", description="Linear extensions of posets with modular structure.")
    parser.add_argument("--threads", type=int, default=None, help="worker processes for pivot sums and searches")
    parser.add_argument("--brute-limit", type=int, default=10)
    parser.add_argument("--dp-limit", type=int, default=20)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count linear extensions")
    p.add_argument("poset")
    p.add_argument("--partition")
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", help="list linear extensions")
    p.add_argument("poset")
    p.add_argument("--limit", type=int)
    p.add_argument("--cap", type=int, default=ENUM_CAP)
    p.add_argument("--format", choices=("lines", "jsonl"), default="lines")
    p.add_argument("--method", choices=("backtracking", "modular", "pivots"), default="backtracking")
    p.add_argument("--partition")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("skeleton", help="modular partition and skeleton shape")
    p.add_argument("poset")
    p.add_argument("--partition")
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("verify", help="check a partition against the poset")
    p.add_argument("poset")
    p.add_argument("partition")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equiv", help="three-way count for a reverse-edge set")
    p.add_argument("reverse")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("build", help="assemble a network from a spec")
    p.add_argument("spec")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except errors.LinextError as exc:
        print(f"error: {exc}", file=sys.stderr)
        nearest = getattr(exc, "nearest", None)
        if nearest:
            print(f"hint: nearest achievable counts {', '.join(map(str, nearest))}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
