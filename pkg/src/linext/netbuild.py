"""Digraphs with prescribed directed-clique counts per module.

Each module of size ``n`` gets a reverse-edge set ``R`` with ``C_n(R)`` equal
to its target; the modules are then wired together along a skeleton digraph.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .counting import le_dp
from .errors import InfeasibleError, PartitionError, RangeError
from .modular import normalize_blocks
from .tournament import (
    Digraph,
    ReverseEdgeSet,
    count_transitive_subtournaments,
    poset_from_reverse_edges,
    reverse_edge_digraph,
)

log = logging.getLogger(__name__)

SEARCH_BUDGET = 2_000_000


@dataclass(frozen=True)
class ModuleSpec:
    size: int
    target: Optional[int] = None
    reverse: Optional[ReverseEdgeSet] = None

    def __post_init__(self):
        if self.size < 1:
            raise RangeError("module size must be positive")
        if (self.target is None) == (self.reverse is None):
            raise ValueError("give exactly one of target or reverse")
        if self.target is not None and not 1 <= self.target <= math.factorial(self.size):
            raise InfeasibleError(f"target {self.target} outside 1..{self.size}!")
        if self.reverse is not None and self.reverse.n != self.size:
            raise RangeError("reverse set size differs from module size")


@dataclass(frozen=True)
class NetworkSpec:
    skeleton: Digraph
    modules: tuple[ModuleSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "modules", tuple(self.modules))
        if len(self.modules) != self.skeleton.n:
            raise PartitionError("one module per skeleton vertex")
        if any((b, a) in self.skeleton.arcs for a, b in self.skeleton.arcs):
            raise RangeError("skeleton may not contain reciprocal arcs")


def _candidates(n: int):
    pool = [(i, j) for j, i in combinations(range(1, n + 1), 2)]
    pool.sort()
    for size in range(len(pool) + 1):
        for chosen in combinations(pool, size):
            yield chosen


def _count_of(n: int, chosen) -> int:
    return le_dp(poset_from_reverse_edges(ReverseEdgeSet(n, frozenset(chosen))))


def _scan_size(args):
    n, size, target = args
    pool = sorted((i, j) for j, i in combinations(range(1, n + 1), 2))
    seen = set()
    for chosen in combinations(pool, size):
        c = _count_of(n, chosen)
        if c == target:
            return chosen, seen
        seen.add(c)
    return None, seen


def search_reverse_set(n: int, target: int, budget: int = SEARCH_BUDGET, workers: Optional[int] = None) -> ReverseEdgeSet:
    """First ``R`` (by size, then lexicographic) with ``C_n(R) = target``.

    ``C_n(R)`` is evaluated as the linear extension count of ``P_n(R)``.
    """
    if n < 0:
        raise RangeError("n must be non-negative")
    if not 1 <= target <= math.factorial(n):
        raise InfeasibleError(f"target {target} outside 1..{n}!")
    pairs = n * (n - 1) // 2
    achieved: set[int] = set()
    if workers and workers > 1:
        jobs = [(n, size, target) for size in range(pairs + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for found, seen in pool.map(_scan_size, jobs):
                if found is not None:
                    return ReverseEdgeSet(n, frozenset(found))
                achieved |= seen
    else:
        for tried, chosen in enumerate(_candidates(n)):
            if tried >= budget:
                log.warning("search budget of %d candidates exhausted", budget)
                break
            c = _count_of(n, chosen)
            if c == target:
                return ReverseEdgeSet(n, frozenset(chosen))
            achieved.add(c)
    nearest = tuple(sorted(achieved, key=lambda c: (abs(c - target), c))[:3])
    raise InfeasibleError(f"no reverse set on {n} vertices reaches {target}", nearest=nearest)


def resolve_module(spec: ModuleSpec, workers: Optional[int] = None) -> ReverseEdgeSet:
    if spec.reverse is not None:
        return spec.reverse
    return search_reverse_set(spec.size, spec.target, workers=workers)


def assemble_network(spec: NetworkSpec, workers: Optional[int] = None) -> tuple[Digraph, tuple[frozenset[int], ...]]:
    """Blocks numbered consecutively; ``A_{n_k}(R_k)`` inside block ``k`` and
    every arc from block ``k`` to block ``l`` for each skeleton arc ``k -> l``."""
    offsets = [0]
    for m in spec.modules:
        offsets.append(offsets[-1] + m.size)
    blocks = tuple(frozenset(range(offsets[k] + 1, offsets[k + 1] + 1)) for k in range(len(spec.modules)))
    arcs = set()
    for k, m in enumerate(spec.modules):
        inner = reverse_edge_digraph(resolve_module(m, workers))
        arcs.update((a + offsets[k], b + offsets[k]) for a, b in inner.arcs)
    for k, l in spec.skeleton.arcs:
        arcs.update((a, b) for a in blocks[k - 1] for b in blocks[l - 1])
    return Digraph(offsets[-1], frozenset(arcs)), blocks


def verify_network(G: Digraph, blocks: Sequence) -> list[int]:
    blocks = normalize_blocks(blocks, G.n)
    return [count_transitive_subtournaments(G.induced(b)) for b in blocks]


def is_digraph_module(G: Digraph, block) -> bool:
    """Every outside vertex sends arcs to all of ``block`` or none, and likewise receives."""
    block = set(block)
    for v in range(1, G.n + 1):
        if v in block:
            continue
        outs = {b for b in block if (v, b) in G.arcs}
        ins = {b for b in block if (b, v) in G.arcs}
        if outs not in (set(), block) or ins not in (set(), block):
            return False
    return True
