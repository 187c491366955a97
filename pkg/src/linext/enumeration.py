"""Generating linear extensions explicitly.

An extension is a tuple listing the elements from bottom to top. All
enumerators are lazy generators with a deterministic order.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Optional, Sequence

from ._bits import iter_bits
from .counting import pivot_tuples
from .errors import ConditionError, NotModularError, NotPermutationError, SizeError
from .modular import JoinedStructure, ModularPartition, is_poset_partition, normalize_blocks, quotient_poset
from .poset import Poset

ENUM_LIMIT = 16

Extension = tuple[int, ...]


def is_linear_extension(P: Poset, order: Sequence[int]) -> bool:
    if sorted(order) != list(P.elements):
        raise NotPermutationError(f"{list(order)} is not a permutation of 1..{P.n}")
    seen = 0
    for x in order:
        if P.down(x) & ~seen:
            return False
        seen |= 1 << x
    return True


def enumerate_backtracking(P: Poset, limit: int = ENUM_LIMIT) -> Iterator[Extension]:
    """All extensions in lexicographic order, by repeatedly taking a minimal element."""
    if P.n > limit:
        raise SizeError(f"enumeration limited to n <= {limit}, got {P.n}")
    n = P.n
    downs = [0] + [P.down(x) for x in P.elements]
    order: list[int] = []

    def rec(placed):
        if len(order) == n:
            yield tuple(order)
            return
        for x in range(1, n + 1):
            if not placed >> x & 1 and not downs[x] & ~placed:
                order.append(x)
                yield from rec(placed | 1 << x)
                order.pop()

    return rec(0)


def _materialize(P: Poset, block, stream) -> list[Extension]:
    if stream is None:
        sub, labels = P.restrict(block)
        return [tuple(labels[i - 1] for i in ext) for ext in enumerate_backtracking(sub)]
    return [tuple(ext) for ext in stream]


def _fill(pattern: Sequence[int], exts: Sequence[Extension]) -> Extension:
    # pattern[k] is the block used at position k; take its elements in order
    cursor = [0] * len(exts)
    out = []
    for b in pattern:
        out.append(exts[b][cursor[b]])
        cursor[b] += 1
    return tuple(out)


def _quotient_patterns(S: Poset, sizes: Sequence[int]) -> Iterator[tuple[int, ...]]:
    k = S.n
    preds = [[p - 1 for p in iter_bits(S.down(s))] for s in S.elements]
    used = [0] * k
    pattern: list[int] = []
    total = sum(sizes)

    def rec():
        if len(pattern) == total:
            yield tuple(pattern)
            return
        for s in range(k):
            if used[s] < sizes[s] and all(used[p] == sizes[p] for p in preds[s]):
                used[s] += 1
                pattern.append(s)
                yield from rec()
                pattern.pop()
                used[s] -= 1

    return rec()


def enumerate_modular(P: Poset, blocks, module_streams: Optional[Sequence[Iterable]] = None) -> Iterator[Extension]:
    """Compose an extension of the chain quotient with one extension per block."""
    raw = blocks.blocks if isinstance(blocks, ModularPartition) else blocks
    blocks = normalize_blocks(raw, P.n)
    if not is_poset_partition(P, blocks):
        raise NotModularError("blocks are not a poset partition; reorient first")
    streams = module_streams or [None] * len(blocks)
    exts = [_materialize(P, b, s) for b, s in zip(blocks, streams)]
    S = quotient_poset(P, blocks)
    sizes = [len(b) for b in blocks]
    for pattern in _quotient_patterns(S, sizes):
        for choice in product(*exts):
            yield _fill(pattern, choice)


# -- pivots ----------------------------------------------------------------------


def _check_canonical(js: JoinedStructure) -> Poset:
    P = js.poset
    if P is None:
        raise ConditionError("joined structure carries no poset")
    if not is_poset_partition(P, js.nonempty_blocks()):
        raise ConditionError("modules must be poset-modular")
    reps = [min(m) for m in js.modules if m]
    for r, x in enumerate(reps):
        if any(P.less(y, x) for y in reps[r + 1:]):
            raise ConditionError("comparable modules must be ordered by index")
    return P


def _interval_patterns(m_lo: int, rest_lo: int, m_ev: int, incomparable: bool, take_hi: int):
    """Placements within one interval, as tuples of 'lo', 'ev', 'hi' labels.

    ``rest_lo`` elements of the lower odd module avoid the first position;
    the even module then interleaves freely with ``take_hi`` elements of the
    upper odd module when incomparable, otherwise precedes them.
    """
    size = rest_lo + m_ev + take_hi
    for lo_pos in combinations(range(1, size), rest_lo):
        lo_set = set(lo_pos)
        free = [p for p in range(size) if p not in lo_set]
        if incomparable:
            ev_choices = combinations(free, m_ev)
        else:
            ev_choices = [tuple(free[:m_ev])]
        for ev_pos in ev_choices:
            ev_set = set(ev_pos)
            yield tuple("lo" if p in lo_set else "ev" if p in ev_set else "hi" for p in range(size))


def _pivot_patterns(js: JoinedStructure, pivots: Sequence[int]) -> Iterator[tuple[int, ...]]:
    D = js.D
    m = js.sizes
    i = list(pivots) + [m[2 * D]]
    head = (0,) * i[0]

    def rec(d, acc):
        if d > D:
            yield acc
            return
        lo, ev, hi = 2 * d - 2, 2 * d - 1, 2 * d  # 0-based slots of M_{2d-1}, M_{2d}, M_{2d+1}
        rest = m[lo] - i[d - 1]
        label = {"lo": lo, "ev": ev, "hi": hi}
        for local in _interval_patterns(m[lo], rest, m[ev], js.incomparable[d - 1], i[d]):
            yield from rec(d + 1, acc + tuple(label[t] for t in local))

    return rec(1, head)


def enumerate_pivots(js: JoinedStructure, module_extension_streams: Optional[Sequence[Iterable]] = None) -> Iterator[Extension]:
    """Extensions via pivot tuples and interval placements.

    The structure's poset must have its modules poset-modular with comparable
    modules ordered by index. Streams are aligned with ``js.modules``; pass
    ``None`` to enumerate a module by backtracking.
    """
    P = _check_canonical(js)
    streams = module_extension_streams or [None] * len(js.modules)
    if len(streams) != len(js.modules):
        raise ConditionError("one stream per module slot")
    exts = [_materialize(P, mod, s) if mod else [()] for mod, s in zip(js.modules, streams)]
    for pivots in pivot_tuples(js.sizes):
        for pattern in _pivot_patterns(js, pivots):
            for choice in product(*exts):
                yield _fill(pattern, choice)


def recover_pivots(js: JoinedStructure, order: Sequence[int]) -> tuple[int, ...]:
    """``(i_1, i_3, ..., i_{2D+1})`` read off an extension.

    ``i_r`` is the number of elements of ``M_r`` placed before the first
    element of any later module.
    """
    slot = {}
    for r, mod in enumerate(js.modules):
        for x in mod:
            slot[x] = r
    out = []
    for r in range(0, len(js.modules), 2):
        count = 0
        for x in order:
            s = slot[x]
            if s > r:
                break
            if s == r:
                count += 1
        out.append(count)
    return tuple(out)
