"""Counting linear extensions.

Everything here is exact integer arithmetic. ``le_bruteforce`` and ``le_dp``
are the oracles; the closed formulas take module sizes and module counts and
sum over pivot tuples; :func:`count` picks a route automatically.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Optional, Sequence

import numpy as np

from ._bits import full_mask, iter_bits, to_mask
from .errors import (
    ArityError,
    ConditionError,
    DomainError,
    NotModularError,
    ShapeError,
    SizeError,
)
from .modular import (
    JoinedStructure,
    ModularPartition,
    Shape,
    _as_partition,
    _require_cg_modular,
    classify_quotient,
    find_joined_numbering,
    find_modular_partition,
    is_poset_partition,
    normalize_blocks,
    quotient_graph,
    quotient_poset,
    renumber_blocks,
    reorient,
)
from .poset import Poset, chain, hasse_covers, incomparability_graph, lexicographic_sum

log = logging.getLogger(__name__)

BRUTE_LIMIT = 10
DP_LIMIT = 20
DP_MAX_STATES = 5_000_000


def binomial(a: int, b: int) -> int:
    """Binomial coefficient with ``binom(-1, 0) = 1`` and ``binom(a, b) = 0``
    for ``0 <= a < b``."""
    if b < 0 or a < -1:
        raise DomainError(f"binom({a}, {b}) is undefined")
    if a == -1:
        if b == 0:
            return 1
        raise DomainError(f"binom(-1, {b}) is undefined")
    return math.comb(a, b)


def multinomial(sizes: Sequence[int]) -> int:
    total, out = 0, 1
    for m in sizes:
        total += m
        out *= math.comb(total, m)
    return out


# -- oracles ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _position_table(n: int) -> np.ndarray:
    # column r is a bijection element -> position; row e - 1 holds element e
    table = np.array(list(permutations(range(n))), dtype=np.int8).reshape(-1, n)
    return np.ascontiguousarray(table.T)


def le_bruteforce(P: Poset, limit: int = BRUTE_LIMIT) -> int:
    """Count permutations of ``1..n`` that respect every relation of ``P``."""
    if P.n > limit:
        raise SizeError(f"brute force limited to n <= {limit}, got {P.n}")
    if P.n <= 1:
        return 1
    table = _position_table(P.n)
    keep = np.ones(table.shape[1], dtype=bool)
    # checking covers is enough: the relation is their transitive closure
    for a, b in hasse_covers(P):
        keep &= table[a - 1] < table[b - 1]
    return int(keep.sum())


def le_dp(P: Poset, limit: int = DP_LIMIT, max_states: int = DP_MAX_STATES) -> int:
    """Count maximal chains in the lattice of downsets, level by level."""
    if P.n > limit:
        raise SizeError(f"downset DP limited to n <= {limit}, got {P.n}")
    downs = [P.down(x) for x in P.elements]
    layer = {0: 1}
    states = 1
    for _ in range(P.n):
        nxt: dict[int, int] = {}
        for ideal, ways in layer.items():
            for x, below in enumerate(downs, 1):
                bit = 1 << x
                if not ideal & bit and below & ~ideal == 0:
                    key = ideal | bit
                    nxt[key] = nxt.get(key, 0) + ways
        states += len(nxt)
        if states > max_states:
            raise SizeError(f"more than {max_states} downsets")
        layer = nxt
    return sum(layer.values())


# -- series / parallel ----------------------------------------------------------


def _check_arity(counts, sizes):
    if len(counts) != len(sizes):
        raise ArityError("counts and sizes differ in length")


def le_series(counts: Sequence[int], sizes: Sequence[int]) -> int:
    """Ordinal (series) sum: the parts are stacked, so counts multiply."""
    _check_arity(counts, sizes)
    return math.prod(counts)


def le_parallel(counts: Sequence[int], sizes: Sequence[int]) -> int:
    """Disjoint (parallel) sum: counts multiply, times the interleavings."""
    _check_arity(counts, sizes)
    return multinomial(sizes) * math.prod(counts)


# -- closed formulas --------------------------------------------------------------


def le_star(P: Poset, blocks, module_counts: Optional[Sequence[int]] = None) -> int:
    """Star skeleton with centre ``blocks[0]``: ``binom(n, m_1) * prod LE(M_s)``."""
    part = _as_partition(incomparability_graph(P), blocks)
    Q = quotient_graph(part.graph, part.blocks)
    k = len(part.blocks)
    if k < 2 or Q.neighbors(1) != full_mask(k) & ~2 or len(Q.edges) != k - 1:
        raise ShapeError("skeleton is not a star centred on the first block")
    if module_counts is None:
        module_counts = [_count_subposet(P, b) for b in part.blocks]
    return binomial(P.n, len(part.blocks[0])) * math.prod(module_counts)


def _check_sizes(module_counts, module_sizes):
    if len(module_counts) != len(module_sizes):
        raise ArityError("counts and sizes differ in length")


def le_path(module_counts: Sequence[int], module_sizes: Sequence[int]) -> int:
    """Path skeleton ``M_1 - M_2 - ... - M_N``.

    Sums over ``0 <= i_x <= m_x`` for ``x < N`` with ``i_N = m_N``, using
    ``m_0 = i_0 = 0`` and ``i_{N+1} = 0`` at the ends.
    """
    _check_sizes(module_counts, module_sizes)
    N = len(module_sizes)
    if N < 1 or any(m < 1 for m in module_sizes):
        raise ShapeError("path needs at least one non-empty module")
    m = [0] + list(module_sizes) + [0]
    total = 0
    for free in product(*(range(mx + 1) for mx in module_sizes[:-1])):
        i = [0] + list(free) + [module_sizes[-1], 0]
        term = 1
        for d in range(N + 1):
            term *= binomial(m[d] - i[d] + i[d + 1] - 1, m[d] - i[d])
            if not term:
                break
        total += term
    return math.prod(module_counts) * total


def _odd_even(module_sizes, need_even):
    size = len(module_sizes)
    if size < 3 or size % 2 != 1:
        raise ShapeError("need 2D+1 modules with D >= 1")
    if any(m < 1 for m in module_sizes[0::2]):
        raise ShapeError("odd modules must be non-empty")
    if need_even and any(m < 1 for m in module_sizes[1::2]):
        raise ShapeError("even modules must be non-empty")
    return (size - 1) // 2


def le_necklace(module_counts: Sequence[int], module_sizes: Sequence[int]) -> int:
    """Necklace of 3-cliques glued at the odd modules."""
    _check_sizes(module_counts, module_sizes)
    D = _odd_even(module_sizes, need_even=True)
    m = [0] + list(module_sizes)
    total = 0
    for free in product(*(range(m[2 * d - 1] + 1) for d in range(1, D + 1))):
        i = {2 * d - 1: v for d, v in enumerate(free, 1)}
        i[2 * D + 1] = m[2 * D + 1]
        term = 1
        for d in range(1, D + 1):
            lo, ev, hi = 2 * d - 1, 2 * d, 2 * d + 1
            term *= binomial(m[ev] + m[lo] + i[hi] - i[lo] - 1, m[lo] - i[lo])
            term *= binomial(m[ev] + i[hi], m[ev])
            if not term:
                break
        total += term
    return math.prod(module_counts) * total


def le_tree(module_counts: Sequence[int], module_sizes: Sequence[int]) -> int:
    """Full binary tree (caterpillar) with leaves at the even modules and ``M_{2D+1}``."""
    _check_sizes(module_counts, module_sizes)
    D = _odd_even(module_sizes, need_even=True)
    m = [0] + list(module_sizes)
    total = 0
    for free in product(*(range(m[2 * d - 1] + 1) for d in range(1, D + 1))):
        i = {2 * d - 1: v for d, v in enumerate(free, 1)}
        i[2 * D + 1] = m[2 * D + 1]
        term = 1
        for d in range(1, D + 1):
            lo, ev, hi = 2 * d - 1, 2 * d, 2 * d + 1
            term *= binomial(m[ev] + m[lo] + i[hi] - i[lo] - 1, m[lo] - i[lo])
            if not term:
                break
        total += term
    return math.prod(module_counts) * total


def pivot_summand(sizes: Sequence[int], incomparable: Sequence[bool], pivots: Sequence[int]) -> int:
    """One term of the joined sum.

    ``pivots`` lists ``i_1, i_3, ..., i_{2D-1}``; ``i_{2D+1}`` is fixed to
    ``m_{2D+1}``.
    """
    D = (len(sizes) - 1) // 2
    m = [0] + list(sizes)
    i = {2 * d - 1: v for d, v in enumerate(pivots, 1)}
    i[2 * D + 1] = m[2 * D + 1]
    term = 1
    for d in range(1, D + 1):
        lo, ev, hi = 2 * d - 1, 2 * d, 2 * d + 1
        term *= binomial(m[ev] + m[lo] + i[hi] - i[lo] - 1, m[lo] - i[lo])
        if incomparable[d - 1]:
            term *= binomial(m[ev] + i[hi], m[ev])
        if not term:
            return 0
    return term


def pivot_tuples(sizes: Sequence[int]):
    """Pivot tuples ``(i_1, ..., i_{2D-1})`` in odometer order."""
    D = (len(sizes) - 1) // 2
    return product(*(range(sizes[2 * d - 2] + 1) for d in range(1, D + 1)))


def _pivot_chunk(args):
    sizes, incomparable, first = args
    rest = pivot_tuples(sizes[2:]) if len(sizes) > 3 else [()]
    return sum(pivot_summand(sizes, incomparable, (first,) + t) for t in rest)


def joined_sum(sizes: Sequence[int], incomparable: Sequence[bool], workers: Optional[int] = None) -> int:
    """The pivot sum of the joined formula, without the module factors."""
    D = (len(sizes) - 1) // 2
    if len(incomparable) != D:
        raise ArityError("need one incomparability flag per even module")
    if workers and workers > 1 and D >= 1:
        jobs = [(tuple(sizes), tuple(incomparable), v) for v in range(sizes[0] + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_pivot_chunk, jobs))
    return sum(pivot_summand(sizes, incomparable, t) for t in pivot_tuples(sizes))


def joined_sum_transfer(sizes: Sequence[int], incomparable: Sequence[bool]) -> int:
    """Same value as :func:`joined_sum`, summing one pivot at a time."""
    D = (len(sizes) - 1) // 2
    m = [0] + list(sizes)
    # weight[v] = total over earlier pivots with i_{2d-1} = v
    weight = {v: 1 for v in range(m[1] + 1)}
    for d in range(1, D + 1):
        lo, ev, hi = 2 * d - 1, 2 * d, 2 * d + 1
        targets = [m[hi]] if d == D else range(m[hi] + 1)
        nxt = {}
        for t in targets:
            acc = 0
            for v, w in weight.items():
                f = binomial(m[ev] + m[lo] + t - v - 1, m[lo] - v)
                if incomparable[d - 1]:
                    f *= binomial(m[ev] + t, m[ev])
                acc += w * f
            nxt[t] = acc
        weight = nxt
    return sum(weight.values())


def le_joined(js: JoinedStructure, module_counts: Sequence[Optional[int]], workers: Optional[int] = None) -> int:
    """Joined skeleton: ``prod LE(M_s)`` times the pivot sum.

    ``module_counts`` is aligned with ``js.modules``; entries for empty even
    slots are ignored.
    """
    if len(module_counts) != len(js.modules):
        raise ArityError("one count per module slot")
    if any(not m for m in js.modules[0::2]):
        raise ConditionError("odd modules must be non-empty")
    factor = math.prod(c for c, mod in zip(module_counts, js.modules) if mod)
    return factor * joined_sum(js.sizes, js.incomparable, workers)


# -- modular recursion ---------------------------------------------------------


def chain_quotient(P: Poset, blocks) -> Poset:
    """Replace every (poset-modular) block by a chain of the same size."""
    blocks = normalize_blocks(blocks.blocks if isinstance(blocks, ModularPartition) else blocks, P.n)
    if not is_poset_partition(P, blocks):
        raise NotModularError("blocks are not a poset partition")
    S = quotient_poset(P, blocks)
    return lexicographic_sum(S, [chain(len(b)) for b in blocks])


def le_chain_quotient(S: Poset, sizes: Sequence[int], max_states: int = DP_MAX_STATES) -> int:
    """LE of the chain quotient, with states = how far each chain is used up."""
    k = S.n
    preds = [list(iter_bits(S.down(s))) for s in S.elements]
    layer = {tuple([0] * k): 1}
    states = 1
    for _ in range(sum(sizes)):
        nxt: dict[tuple, int] = {}
        for used, ways in layer.items():
            for s in range(k):
                if used[s] < sizes[s] and all(used[p - 1] == sizes[p - 1] for p in preds[s]):
                    key = used[:s] + (used[s] + 1,) + used[s + 1:]
                    nxt[key] = nxt.get(key, 0) + ways
        states += len(nxt)
        if states > max_states:
            raise SizeError(f"more than {max_states} chain-quotient states")
        layer = nxt
    return sum(layer.values())


def _poset_partition(P: Poset, blocks) -> tuple[Poset, tuple]:
    """Same-count poset in which ``blocks`` (renumbered) are poset-modular."""
    blocks = _require_cg_modular(P, blocks)
    if is_poset_partition(P, blocks):
        return P, blocks
    ordered = renumber_blocks(P, blocks)
    return reorient(P, ordered), ordered


def le_modular(P: Poset, blocks, strategy: str = "auto", options: Optional["CountOptions"] = None) -> int:
    """``LE(P_M) * prod LE(M_i)``.

    Blocks that are modular in the comparability graph but not in the poset
    are first reoriented into a poset with the same incomparability graph.
    """
    Q, ordered = _poset_partition(P, blocks)
    opts = options or CountOptions()
    sub = CountOptions(strategy=strategy, brute_limit=opts.brute_limit, dp_limit=opts.dp_limit,
                       max_states=opts.max_states)
    S = quotient_poset(Q, ordered)
    factor = le_chain_quotient(S, [len(b) for b in ordered], opts.max_states)
    return factor * math.prod(_count_subposet(Q, b, sub) for b in ordered)


# -- dispatcher ---------------------------------------------------------------------

STRATEGIES = ("auto", "path", "necklace", "tree", "joined", "star", "modular", "dp", "brute")

_SHAPE_STRATEGY = {
    Shape.STAR: "star",
    Shape.PATH: "path",
    Shape.NECKLACE3: "necklace",
    Shape.FULL_BINARY_TREE: "tree",
    Shape.JOINED: "joined",
}
_MODE_SHAPE = {
    "path": Shape.PATH,
    "necklace": Shape.NECKLACE3,
    "tree": Shape.FULL_BINARY_TREE,
    "joined": Shape.JOINED,
}


@dataclass
class CountOptions:
    strategy: str = "auto"
    partition: Optional[Sequence[Sequence[int]]] = None
    brute_limit: int = BRUTE_LIMIT
    dp_limit: int = DP_LIMIT
    max_states: int = DP_MAX_STATES
    workers: Optional[int] = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass
class CountReport:
    count: int
    strategy: str
    partition: list[list[int]] = field(default_factory=list)
    skeleton_shape: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "count": str(self.count),
            "strategy": self.strategy,
            "partition": self.partition,
            "skeleton_shape": self.skeleton_shape,
        }


def _count_subposet(P: Poset, block, options: Optional[CountOptions] = None) -> int:
    sub, _ = P.restrict(block)
    opts = options or CountOptions()
    inner = CountOptions(brute_limit=opts.brute_limit, dp_limit=opts.dp_limit, max_states=opts.max_states)
    return count(sub, inner).count


def _apply_formula(P: Poset, blocks, kind: str, opts: CountOptions) -> tuple[int, str]:
    """Evaluate a closed formula on an incomparability-graph partition."""
    IG = incomparability_graph(P)
    part = _as_partition(IG, blocks)
    Q = quotient_graph(IG, part.blocks)
    cls = classify_quotient(Q)

    def counts_for(idx):
        return [_count_subposet(P, part.blocks[i - 1], opts) if i else 1 for i in idx]

    if kind == "star":
        if cls.shape != Shape.STAR:
            raise ShapeError(f"skeleton is {cls.shape.value}, not a star")
        ordered = [part.blocks[i - 1] for i in cls.witness]
        return le_star(P, ordered, counts_for(cls.witness)), Shape.STAR.value
    if kind == "path":
        mode_slots = find_joined_numbering(Q, "path")
        if mode_slots is None:
            raise ShapeError("skeleton is not a path")
        order = mode_slots[0::2]
        return le_path(counts_for(order), [len(part.blocks[i - 1]) for i in order]), Shape.PATH.value
    slots = find_joined_numbering(Q, kind)
    if slots is None or len(slots) < 3:
        raise ShapeError(f"skeleton has no {kind} numbering")
    js = JoinedStructure.from_partition(P, part.blocks, slots)
    counts = counts_for(slots)
    if kind == "necklace":
        value = le_necklace(counts, js.sizes)
    elif kind == "tree":
        value = le_tree(counts, js.sizes)
    else:
        value = le_joined(js, counts, opts.workers)
    return value, _MODE_SHAPE[kind].value


def count(P: Poset, options: Optional[CountOptions] = None) -> CountReport:
    """Count linear extensions, choosing a route automatically.

    Order of attempts: chains and singletons directly; a user or searched
    partition of the incomparability graph with a closed formula for its
    skeleton shape; the modular recursion; finally the downset DP.
    """
    opts = options or CountOptions()
    strategy = opts.strategy
    n = P.n
    if strategy == "brute":
        return CountReport(le_bruteforce(P, opts.brute_limit), "bruteforce")
    if strategy == "dp":
        return CountReport(le_dp(P, opts.dp_limit, opts.max_states), "dp")

    IG = incomparability_graph(P)
    if opts.partition is not None:
        part = ModularPartition(tuple(opts.partition), IG)
    elif strategy == "auto" and (n <= 1 or not IG.edges):
        return CountReport(1, "path", [list(P.elements)] if n else [], Shape.PATH.value)
    else:
        part = find_modular_partition(IG)

    if part is None:
        if strategy != "auto":
            raise ShapeError(f"no nontrivial partition found for strategy {strategy!r}")
        return CountReport(le_dp(P, opts.dp_limit, opts.max_states), "dp")

    shape = skeleton_shape = classify_quotient(quotient_graph(IG, part.blocks)).shape
    layout = part.as_lists()
    if strategy == "modular":
        return CountReport(le_modular(P, part.blocks, options=opts), "modular", layout, shape.value)
    if strategy != "auto":
        value, shape_name = _apply_formula(P, part.blocks, strategy, opts)
        return CountReport(value, strategy, layout, shape_name)

    if skeleton_shape in _SHAPE_STRATEGY:
        kind = _SHAPE_STRATEGY[skeleton_shape]
        value, shape_name = _apply_formula(P, part.blocks, kind, opts)
        return CountReport(value, kind, layout, shape_name)
    if len(part.blocks) < n:
        try:
            return CountReport(le_modular(P, part.blocks, options=opts), "modular", layout, shape.value)
        except SizeError:
            log.debug("modular recursion over budget; falling back to DP")
    return CountReport(le_dp(P, opts.dp_limit, opts.max_states), "dp", layout, shape.value)
