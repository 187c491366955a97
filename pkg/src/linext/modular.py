"""Modular partitions of graphs and posets.

Blocks are numbered by their position: ``blocks[0]`` is ``M_1``. Functions
that report block numbers (``find_inconsistent_pairs``, skeleton witnesses)
use these 1-based numbers.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from ._bits import full_mask, iter_bits, popcount, to_mask
from .errors import (
    ConditionError,
    EmptySetError,
    NotModularError,
    NotTransitivelyOrientableError,
    PartitionError,
    ResolutionError,
)
from .poset import (
    Poset,
    UndirectedGraph,
    comparability_graph,
    graph_complement,
    incomparability_graph,
)

log = logging.getLogger(__name__)

Blocks = tuple[frozenset[int], ...]


class Shape(str, Enum):
    STAR = "Star"
    PATH = "Path"
    NECKLACE3 = "Necklace3"
    FULL_BINARY_TREE = "FullBinaryTree"
    JOINED = "Joined"
    OTHER = "Other"


KNOWN_SHAPES = (Shape.STAR, Shape.PATH, Shape.NECKLACE3, Shape.FULL_BINARY_TREE, Shape.JOINED)


class Resolution(str, Enum):
    AS_IS = "AsIs"
    MERGE_LAST_TWO = "MergeLastTwo"
    MERGE_AROUND_MIDDLE = "MergeAroundMiddle"


def normalize_blocks(blocks: Iterable[Iterable[int]], n: int) -> Blocks:
    """Validate that ``blocks`` partition ``1..n`` and freeze them."""
    out = tuple(frozenset(int(x) for x in b) for b in blocks)
    seen = 0
    for b in out:
        if not b:
            raise PartitionError("empty block")
        mask = to_mask(b)
        if any(x < 1 or x > n for x in b):
            raise PartitionError(f"block {sorted(b)} leaves 1..{n}")
        if mask & seen:
            raise PartitionError("blocks overlap")
        seen |= mask
    if seen != full_mask(n):
        raise PartitionError("blocks do not cover the ground set")
    return out


def _module_mask_ok(G: UndirectedGraph, mask: int) -> bool:
    outside = full_mask(G.n) & ~mask
    for v in iter_bits(outside):
        hit = G.neighbors(v) & mask
        if hit and hit != mask:
            return False
    return True


def is_module(G: UndirectedGraph, S: Iterable[int]) -> bool:
    """True iff every vertex outside ``S`` sees all of ``S`` or none of it."""
    S = set(S)
    if not S:
        raise EmptySetError("a module is non-empty")
    if any(v < 1 or v > G.n for v in S):
        raise PartitionError("set leaves the vertex range")
    return _module_mask_ok(G, to_mask(S))


@dataclass(frozen=True)
class ModularPartition:
    """Ordered blocks, each a module of ``graph``; validated on construction."""

    blocks: Blocks
    graph: UndirectedGraph = field(repr=False)

    def __post_init__(self):
        blocks = normalize_blocks(self.blocks, self.graph.n)
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if not _module_mask_ok(self.graph, to_mask(b)):
                raise NotModularError(f"block {sorted(b)} is not a module")

    def __len__(self):
        return len(self.blocks)

    def as_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]


@dataclass(frozen=True)
class Classification:
    shape: Shape
    witness: tuple


@dataclass(frozen=True)
class Skeleton:
    """Quotient graph on block numbers ``1..k`` plus its shape."""

    quotient: UndirectedGraph
    block_sizes: tuple[int, ...]
    shape: Shape
    witness: tuple = ()


def _as_partition(G: UndirectedGraph, blocks) -> ModularPartition:
    if isinstance(blocks, ModularPartition) and blocks.graph == G:
        return blocks
    raw = blocks.blocks if isinstance(blocks, ModularPartition) else blocks
    return ModularPartition(raw, G)


def quotient_graph(G: UndirectedGraph, blocks: Blocks) -> UndirectedGraph:
    reps = [min(b) for b in blocks]
    k = len(blocks)
    edges = [
        (i, j)
        for i in range(1, k + 1)
        for j in range(i + 1, k + 1)
        if G.adjacent(reps[i - 1], reps[j - 1])
    ]
    return UndirectedGraph(k, edges)


def skeleton_of(G: UndirectedGraph, blocks) -> Skeleton:
    part = _as_partition(G, blocks)
    Q = quotient_graph(G, part.blocks)
    cls = classify_quotient(Q)
    return Skeleton(Q, tuple(len(b) for b in part.blocks), cls.shape, cls.witness)


# -- shape recognition ---------------------------------------------------------


def _star_center(Q: UndirectedGraph) -> Optional[int]:
    k = Q.n
    if k < 2 or len(Q.edges) != k - 1:
        return None
    full = full_mask(k)
    for c in Q.vertices:
        if Q.neighbors(c) == full & ~(1 << c):
            return c
    return None


def _path_order(Q: UndirectedGraph) -> Optional[tuple[int, ...]]:
    k = Q.n
    if k == 0 or len(Q.edges) != k - 1:
        return None
    if k == 1:
        return (1,)
    degs = [popcount(Q.neighbors(v)) for v in Q.vertices]
    if max(degs) > 2:
        return None
    ends = [v for v in Q.vertices if degs[v - 1] == 1]
    if len(ends) != 2:
        return None
    order = [ends[0]]
    prev = 0
    while len(order) < k:
        nxt = Q.neighbors(order[-1]) & ~(1 << prev if prev else 0)
        if not nxt:
            return None
        prev = order[-1]
        order.append(next(iter_bits(nxt)))
    return tuple(order)


_MODES = ("path", "necklace", "tree", "joined")


def find_joined_numbering(Q: UndirectedGraph, mode: str = "joined") -> Optional[tuple]:
    """Search for a numbering of the quotient ``Q`` in joined form.

    Returns a tuple of length ``2D + 1`` of block numbers, with ``None`` in
    even slots that are empty, or ``None`` when no numbering exists.

    ``mode`` restricts the even slots: ``"path"`` (all empty), ``"necklace"``
    (all present and adjacent to both neighbours), ``"tree"`` (all present and
    adjacent only to the preceding odd slot) or ``"joined"`` (no restriction).
    Candidates are tried in ascending block order, an empty even slot first, so
    the result is deterministic.
    """
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode!r}")
    k = Q.n
    if k == 0:
        return None
    full = full_mask(k)
    adj = Q.neighbors

    def even_choices(o, used):
        if mode in ("path", "joined"):
            yield None
        if mode == "path":
            return
        for e in iter_bits(adj(o) & ~used):
            yield e

    def dfs(slots, used, back):
        # back: neighbours of the current odd vertex already accounted for
        o = slots[-1]
        if used == full:
            if adj(o) == back:
                yield tuple(slots)
            return
        for e in even_choices(o, used):
            used_e = used | (1 << e if e else 0)
            for w in iter_bits(adj(o) & ~used_e):
                expected = back | (1 << w) | (1 << e if e else 0)
                if adj(o) != expected:
                    continue
                nxt_back = 1 << o
                if e is not None:
                    e_nb = adj(e)
                    if e_nb & ~((1 << o) | (1 << w)):
                        continue
                    joined_e = bool(e_nb >> w & 1)
                    if mode == "necklace" and not joined_e:
                        continue
                    if mode == "tree" and joined_e:
                        continue
                    if joined_e:
                        nxt_back |= 1 << e
                yield from dfs(slots + [e, w], used_e | 1 << w, nxt_back)

    for start in Q.vertices:
        for found in dfs([start], 1 << start, 0):
            return found
    return None


def classify_quotient(Q: UndirectedGraph) -> Classification:
    """Most specific shape of ``Q``: Star > Path > Necklace3 > FullBinaryTree > Joined."""
    c = _star_center(Q)
    if c is not None:
        leaves = tuple(v for v in Q.vertices if v != c)
        return Classification(Shape.STAR, (c,) + leaves)
    order = _path_order(Q)
    if order is not None:
        return Classification(Shape.PATH, order)
    for mode, shape in (
        ("necklace", Shape.NECKLACE3),
        ("tree", Shape.FULL_BINARY_TREE),
        ("joined", Shape.JOINED),
    ):
        slots = find_joined_numbering(Q, mode)
        if slots is not None:
            return Classification(shape, slots)
    return Classification(Shape.OTHER, ())


def classify_skeleton(sk: Skeleton) -> Classification:
    return classify_quotient(sk.quotient)


# -- poset partitions -----------------------------------------------------------


def is_poset_partition(P: Poset, blocks) -> bool:
    """Every outside element is above, below or incomparable to a whole block."""
    blocks = normalize_blocks(blocks.blocks if isinstance(blocks, ModularPartition) else blocks, P.n)
    full = full_mask(P.n)
    for b in blocks:
        mask = to_mask(b)
        for x in iter_bits(full & ~mask):
            for rel in (P.up(x) & mask, P.down(x) & mask):
                if rel and rel != mask:
                    return False
    return True


def _require_cg_modular(P: Poset, blocks) -> Blocks:
    raw = blocks.blocks if isinstance(blocks, ModularPartition) else blocks
    blocks = normalize_blocks(raw, P.n)
    CG = comparability_graph(P)
    for b in blocks:
        if not _module_mask_ok(CG, to_mask(b)):
            raise NotModularError(f"block {sorted(b)} is not a module of the comparability graph")
    return blocks


def find_inconsistent_pairs(P: Poset, blocks) -> list[tuple[int, int]]:
    """Block-number pairs ``(i, j)``, i < j, related in both directions."""
    blocks = _require_cg_modular(P, blocks)
    masks = [to_mask(b) for b in blocks]
    pairs = []
    for i, mi in enumerate(masks):
        ups = downs = 0
        for x in iter_bits(mi):
            ups |= P.up(x)
            downs |= P.down(x)
        for j in range(i + 1, len(masks)):
            if ups & masks[j] and downs & masks[j]:
                pairs.append((i + 1, j + 1))
    return pairs


def coarsen_by_inconsistency(P: Poset, blocks) -> ModularPartition:
    """Merge blocks along inconsistently comparable pairs until none remain.

    The result is a modular partition of the comparability graph with no
    inconsistent pair. A single block means every merge collapsed, which
    happens when the comparability skeleton has a dominating vertex.
    """
    current = list(_require_cg_modular(P, blocks))
    while True:
        pairs = find_inconsistent_pairs(P, current)
        if not pairs:
            break
        parent = list(range(len(current)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in pairs:
            ri, rj = find(i - 1), find(j - 1)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
        merged: dict[int, set[int]] = {}
        for idx, b in enumerate(current):
            merged.setdefault(find(idx), set()).update(b)
        current = [frozenset(merged[r]) for r in sorted(merged)]
    if len(current) == 1 and len(blocks) > 1:
        log.debug("inconsistency classes collapsed to one block (dominating vertex case)")
    return ModularPartition(tuple(current), comparability_graph(P))


def quotient_poset(P: Poset, blocks: Blocks) -> Poset:
    """``P/M`` on block numbers; blocks must be poset-modular."""
    reps = [min(b) for b in blocks]
    k = len(blocks)
    gens = [
        (i, j)
        for i in range(1, k + 1)
        for j in range(1, k + 1)
        if i != j and P.less(reps[i - 1], reps[j - 1])
    ]
    return Poset(k, gens)


def renumber_blocks(P: Poset, blocks) -> Blocks:
    """Reorder CG-modular blocks so the index order orients the quotient transitively.

    The order between block representatives is a transitive orientation of the
    comparability skeleton; blocks are listed in a topological order of it,
    ties broken by smallest original position.
    """
    blocks = _require_cg_modular(P, blocks)
    reps = [min(b) for b in blocks]
    k = len(blocks)
    indeg = [0] * k
    succ = [[] for _ in range(k)]
    for i in range(k):
        for j in range(k):
            if i != j and P.less(reps[i], reps[j]):
                succ[i].append(j)
                indeg[j] += 1
    heap = [i for i in range(k) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    return tuple(blocks[i] for i in order)


def reorient(P: Poset, blocks) -> Poset:
    """Poset with the same incomparability graph in which the blocks are
    poset-modular and comparable blocks are ordered by their index.

    Raises :class:`NotTransitivelyOrientableError` when orienting the
    comparability skeleton by block index is not transitive; use
    :func:`renumber_blocks` first in that case.
    """
    IG = incomparability_graph(P)
    part = _as_partition(IG, blocks)
    blocks = part.blocks
    k = len(blocks)
    reps = [min(b) for b in blocks]
    comp = [[False] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            if i != j and not IG.adjacent(reps[i], reps[j]):
                comp[i][j] = True
    for i in range(k):
        for j in range(i + 1, k):
            if not comp[i][j]:
                continue
            for l in range(j + 1, k):
                if comp[j][l] and not comp[i][l]:
                    raise NotTransitivelyOrientableError(
                        f"blocks {i + 1} < {j + 1} < {l + 1} break transitivity"
                    )
    up = [0] * (P.n + 1)
    masks = [to_mask(b) for b in blocks]
    above = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            if comp[i][j]:
                above[i] |= masks[j]
    for i, b in enumerate(blocks):
        for x in b:
            up[x] = (P.up(x) & masks[i]) | above[i]
    return Poset._from_rows(up)


# -- joined structures ---------------------------------------------------------


@dataclass(frozen=True)
class JoinedStructure:
    """Modules ``M_1 .. M_{2D+1}`` in joined form.

    ``modules`` has odd length; the entries at even positions (``M_2``,
    ``M_4``, ...) may be empty placeholders. ``incomparable[d - 1]`` records
    whether ``M_{2d}`` is present and incomparable to ``M_{2d+1}``.
    """

    modules: tuple[frozenset[int], ...]
    incomparable: tuple[bool, ...]
    poset: Optional[Poset] = field(default=None, repr=False, compare=False)

    @property
    def D(self) -> int:
        return (len(self.modules) - 1) // 2

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.modules)

    def module(self, r: int) -> frozenset[int]:
        """``M_r`` with the 1-based numbering."""
        return self.modules[r - 1]

    def nonempty_blocks(self) -> Blocks:
        return tuple(m for m in self.modules if m)

    @classmethod
    def from_poset(cls, P: Poset, slots: Sequence[Optional[Iterable[int]]]) -> "JoinedStructure":
        """Validate ``slots`` (``None`` or empty for absent even modules)
        against the incomparability graph of ``P``."""
        mods = tuple(frozenset(s) if s else frozenset() for s in slots)
        if len(mods) % 2 != 1 or len(mods) < 3:
            raise ConditionError("need 2D+1 module slots with D >= 1")
        D = (len(mods) - 1) // 2
        for r, m in enumerate(mods, 1):
            if r % 2 == 1 and not m:
                raise ConditionError(f"odd module M_{r} is empty")
        try:
            normalize_blocks([m for m in mods if m], P.n)
        except PartitionError as exc:
            raise ConditionError(str(exc)) from exc
        IG = incomparability_graph(P)
        for m in mods:
            if m and not _module_mask_ok(IG, to_mask(m)):
                raise ConditionError(f"{sorted(m)} is not a module of the incomparability graph")

        def adj(r, s):
            a, b = mods[r - 1], mods[s - 1]
            return bool(a and b and IG.adjacent(min(a), min(b)))

        allowed = set()
        for kk in range(1, D + 1):
            lo, ev, hi = 2 * kk - 1, 2 * kk, 2 * kk + 1
            if not adj(lo, hi):
                raise ConditionError(f"M_{lo} and M_{hi} must be incomparable")
            allowed.add((lo, hi))
            if mods[ev - 1]:
                if not adj(lo, ev):
                    raise ConditionError(f"M_{lo} and M_{ev} must be incomparable")
                allowed.update({(lo, ev), (ev, hi)})
        size = len(mods)
        for r in range(1, size + 1):
            for s in range(r + 1, size + 1):
                if adj(r, s) and (r, s) not in allowed:
                    raise ConditionError(f"M_{r} and M_{s} must be comparable")
        flags = tuple(bool(mods[2 * d - 1]) and adj(2 * d, 2 * d + 1) for d in range(1, D + 1))
        return cls(mods, flags, P)

    @classmethod
    def from_partition(cls, P: Poset, blocks, numbering: Sequence[Optional[int]]) -> "JoinedStructure":
        """Build from blocks and a slot numbering of block numbers (1-based)."""
        raw = blocks.blocks if isinstance(blocks, ModularPartition) else blocks
        raw = normalize_blocks(raw, P.n)
        return cls.from_poset(P, [raw[i - 1] if i else None for i in numbering])


def joined_structure_for(P: Poset, blocks, mode: str = "joined") -> Optional[JoinedStructure]:
    """Joined numbering of an incomparability-graph partition, if one exists."""
    IG = incomparability_graph(P)
    part = _as_partition(IG, blocks)
    numbering = find_joined_numbering(quotient_graph(IG, part.blocks), mode)
    if numbering is None or len(numbering) < 3:
        return None
    return JoinedStructure.from_partition(P, part.blocks, numbering)


def the_ones_resolution(P: Poset, js: JoinedStructure) -> Resolution:
    """Which merge turns a joined incomparability partition into a poset partition."""
    js = JoinedStructure.from_poset(P, js.modules)
    mods = js.modules
    D = js.D
    if is_poset_partition(P, js.nonempty_blocks()):
        return Resolution.AS_IS
    merged = [m for m in mods[: 2 * D - 1] if m] + [mods[2 * D - 1] | mods[2 * D]]
    if is_poset_partition(P, merged):
        return Resolution.MERGE_LAST_TWO
    if D == 2:
        outer = mods[0] | mods[1] | mods[3] | mods[4]
        if is_poset_partition(P, [outer, mods[2]]):
            return Resolution.MERGE_AROUND_MIDDLE
    raise ResolutionError("no merge case yields a poset partition")


# -- partition search ----------------------------------------------------------


def _minimal_module(G: UndirectedGraph, seed: int) -> int:
    full = full_mask(G.n)
    mod = seed
    changed = True
    while changed:
        changed = False
        for v in iter_bits(full & ~mod):
            hit = G.neighbors(v) & mod
            if hit and hit != mod:
                mod |= 1 << v
                changed = True
    return mod


def maximal_strong_modules(G: UndirectedGraph) -> list[int]:
    """Top level of the modular decomposition, as bitsets (naive search)."""
    n = G.n
    if n <= 1:
        return [full_mask(n)] if n else []
    comps = G.components()
    if len(comps) > 1:
        return comps
    co = graph_complement(G).components()
    if len(co) > 1:
        return co
    full = full_mask(n)
    parts, seen = [], 0
    for v in G.vertices:
        if seen >> v & 1:
            continue
        mod = 1 << v
        for u in G.vertices:
            if u != v:
                m = _minimal_module(G, (1 << u) | (1 << v))
                if m != full:
                    mod |= m
        parts.append(mod)
        seen |= mod
    return parts


def _twin_classes(G: UndirectedGraph) -> list[int]:
    n = G.n
    groups: dict[tuple, int] = {}
    for v in G.vertices:
        open_nb = G.neighbors(v)
        groups.setdefault(("o", open_nb), 0)
        groups[("o", open_nb)] |= 1 << v
    classes = []
    assigned = 0
    for mask in groups.values():
        if popcount(mask) > 1:
            classes.append(mask)
            assigned |= mask
    closed: dict[int, int] = {}
    for v in iter_bits(full_mask(n) & ~assigned):
        key = G.neighbors(v) | 1 << v
        closed[key] = closed.get(key, 0) | 1 << v
    classes.extend(closed.values())
    return sorted(classes, key=lambda m: (m & -m))


def _star_refinements(G: UndirectedGraph, co_components: list[int]) -> list[list[int]]:
    full = full_mask(G.n)
    out = []
    for c in co_components:
        leaves = G.components(full & ~c)
        out.append([c] + leaves)
    out.sort(key=len, reverse=True)
    return out


def _as_blocks(masks: list[int]) -> Blocks:
    ordered = sorted(masks, key=lambda m: (m & -m))
    return tuple(frozenset(iter_bits(m)) for m in ordered)


def find_modular_partition(G: UndirectedGraph, max_blocks: Optional[int] = None) -> Optional[ModularPartition]:
    """Naive search for a nontrivial modular partition of ``G``.

    Candidates, in order: star-shaped splits of a disconnected complement,
    the top level of the modular decomposition, twin classes, and the
    all-singleton partition. The first candidate whose skeleton has a known
    shape wins; otherwise the top level is returned when it has more than one
    block. Returns ``None`` when nothing nontrivial is found.
    """
    n = G.n
    if n <= 1:
        return None
    top = maximal_strong_modules(G)
    candidates: list[list[int]] = []
    co = graph_complement(G).components()
    if len(co) > 1:
        candidates.extend(_star_refinements(G, co))
    candidates.append(top)
    candidates.append(_twin_classes(G))
    candidates.append([1 << v for v in G.vertices])

    def fits(masks):
        return 1 < len(masks) and (max_blocks is None or len(masks) <= max_blocks)

    seen = set()
    for masks in candidates:
        key = frozenset(masks)
        if key in seen or not fits(masks):
            continue
        seen.add(key)
        blocks = _as_blocks(masks)
        shape = classify_quotient(quotient_graph(G, blocks)).shape
        if shape in KNOWN_SHAPES:
            return ModularPartition(blocks, G)
    if fits(top):
        return ModularPartition(_as_blocks(top), G)
    return None
