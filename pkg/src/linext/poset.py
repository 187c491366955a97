"""Finite posets on ``1..n`` and their associated undirected graphs.

A :class:`Poset` stores its strict order transitively closed, as one
successor bitset per element. Values are immutable once constructed.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from ._bits import full_mask, iter_bits, to_mask
from .errors import ArityError, CycleError, RangeError

Pair = tuple[int, int]


def _check_pairs(n: int, pairs: Iterable[Pair]) -> list[Pair]:
    out = []
    for pair in pairs:
        a, b = (int(x) for x in pair)
        if not (1 <= a <= n and 1 <= b <= n):
            raise RangeError(f"pair {(a, b)} outside 1..{n}")
        out.append((a, b))
    return out


class Poset:
    """Strict partial order on the elements ``1..n``.

    ``Poset(n, gens)`` takes generating pairs ``(a, b)`` meaning ``a < b`` and
    stores their transitive closure. A generator set with a directed cycle
    (including a loop ``(a, a)``) raises :class:`CycleError`.
    """

    __slots__ = ("_n", "_up", "_down", "_lt")

    def __init__(self, n: int, gens: Iterable[Pair] = ()):
        if n < 0:
            raise RangeError("n must be non-negative")
        up = [0] * (n + 1)
        for a, b in _check_pairs(n, gens):
            up[a] |= 1 << b
        # Warshall closure over bit rows
        for k in range(1, n + 1):
            bk = 1 << k
            row = up[k]
            for i in range(1, n + 1):
                if up[i] & bk:
                    up[i] |= row
        for i in range(1, n + 1):
            if up[i] >> i & 1:
                raise CycleError(f"relations induce a cycle through {i}")
        down = [0] * (n + 1)
        for i in range(1, n + 1):
            for j in iter_bits(up[i]):
                down[j] |= 1 << i
        self._n = n
        self._up = tuple(up)
        self._down = tuple(down)
        self._lt = None

    @classmethod
    def _from_rows(cls, up: Sequence[int]) -> "Poset":
        # trusted path for rows already known to be closed and acyclic
        self = cls.__new__(cls)
        n = len(up) - 1
        down = [0] * (n + 1)
        for i in range(1, n + 1):
            for j in iter_bits(up[i]):
                down[j] |= 1 << i
        self._n = n
        self._up = tuple(up)
        self._down = tuple(down)
        self._lt = None
        return self

    @property
    def n(self) -> int:
        return self._n

    @property
    def elements(self) -> range:
        return range(1, self._n + 1)

    @property
    def lt(self) -> frozenset[Pair]:
        if self._lt is None:
            self._lt = frozenset(
                (a, b) for a in self.elements for b in iter_bits(self._up[a])
            )
        return self._lt

    def up(self, a: int) -> int:
        """Bitset of elements strictly above ``a``."""
        return self._up[a]

    def down(self, a: int) -> int:
        """Bitset of elements strictly below ``a``."""
        return self._down[a]

    def less(self, a: int, b: int) -> bool:
        return bool(self._up[a] >> b & 1)

    def comparable(self, a: int, b: int) -> bool:
        return a == b or bool((self._up[a] | self._down[a]) >> b & 1)

    def is_chain(self) -> bool:
        full = full_mask(self._n)
        return all(
            (self._up[a] | self._down[a] | 1 << a) == full for a in self.elements
        )

    def is_antichain(self) -> bool:
        return not any(self._up)

    def restrict(self, elements: Iterable[int]) -> tuple["Poset", tuple[int, ...]]:
        """Induced subposet, relabelled ``1..k`` in increasing element order.

        Returns the subposet and the original labels, so ``labels[i - 1]`` is
        the element that became ``i``.
        """
        labels = tuple(sorted(set(elements)))
        index = {e: i for i, e in enumerate(labels, 1)}
        mask = to_mask(labels)
        up = [0] * (len(labels) + 1)
        for e, i in index.items():
            for f in iter_bits(self._up[e] & mask):
                up[i] |= 1 << index[f]
        return Poset._from_rows(up), labels

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Rename element ``e`` to ``perm[e - 1]``."""
        if sorted(perm) != list(self.elements):
            raise RangeError("relabelling must be a permutation of 1..n")
        return Poset(self._n, ((perm[a - 1], perm[b - 1]) for a, b in self.lt))

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self._n == other._n and self._up == other._up

    def __hash__(self):
        return hash((self._n, self._up))

    def __repr__(self):
        covers = sorted(hasse_covers(self))
        return f"Poset({self._n}, {covers})"


class UndirectedGraph:
    """Simple undirected graph on ``1..n``; edges stored as ``(a, b)``, a < b."""

    __slots__ = ("_n", "_adj", "_edges")

    def __init__(self, n: int, edges: Iterable[Pair] = ()):
        adj = [0] * (n + 1)
        for a, b in _check_pairs(n, edges):
            if a == b:
                raise RangeError(f"loop at {a}")
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        self._n = n
        self._adj = tuple(adj)
        self._edges = None

    @classmethod
    def _from_adj(cls, adj: Sequence[int]) -> "UndirectedGraph":
        self = cls.__new__(cls)
        self._n = len(adj) - 1
        self._adj = tuple(adj)
        self._edges = None
        return self

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertices(self) -> range:
        return range(1, self._n + 1)

    @property
    def edges(self) -> frozenset[Pair]:
        if self._edges is None:
            self._edges = frozenset(
                (a, b) for a in self.vertices for b in iter_bits(self._adj[a]) if a < b
            )
        return self._edges

    def neighbors(self, v: int) -> int:
        """Bitset of neighbours of ``v``."""
        return self._adj[v]

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self._adj[a] >> b & 1)

    def induced(self, vertices: Iterable[int]) -> tuple["UndirectedGraph", tuple[int, ...]]:
        labels = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(labels, 1)}
        mask = to_mask(labels)
        adj = [0] * (len(labels) + 1)
        for v, i in index.items():
            for w in iter_bits(self._adj[v] & mask):
                adj[i] |= 1 << index[w]
        return UndirectedGraph._from_adj(adj), labels

    def components(self, within: int | None = None) -> list[int]:
        """Connected components (as bitsets) of the subgraph induced on ``within``."""
        remaining = full_mask(self._n) if within is None else within
        comps = []
        while remaining:
            seed = remaining & -remaining
            comp = frontier = seed
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self._adj[v]
                nxt &= remaining & ~comp
                comp |= nxt
                frontier = nxt
            comps.append(comp)
            remaining &= ~comp
        return comps

    def __eq__(self, other):
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj

    def __hash__(self):
        return hash((self._n, self._adj))

    def __repr__(self):
        return f"UndirectedGraph({self._n}, {sorted(self.edges)})"


def poset_from_relations(n: int, gens: Iterable[Pair]) -> Poset:
    return Poset(n, gens)


def chain(n: int) -> Poset:
    return Poset(n, ((i, i + 1) for i in range(1, n)))


def antichain(n: int) -> Poset:
    return Poset(n)


def comparability_graph(P: Poset) -> UndirectedGraph:
    return UndirectedGraph._from_adj(
        [0] + [P.up(a) | P.down(a) for a in P.elements]
    )


def incomparability_graph(P: Poset) -> UndirectedGraph:
    full = full_mask(P.n)
    return UndirectedGraph._from_adj(
        [0] + [full & ~(P.up(a) | P.down(a) | 1 << a) for a in P.elements]
    )


def graph_complement(G: UndirectedGraph) -> UndirectedGraph:
    full = full_mask(G.n)
    return UndirectedGraph._from_adj(
        [0] + [full & ~(G.neighbors(v) | 1 << v) for v in G.vertices]
    )


def hasse_covers(P: Poset) -> set[Pair]:
    """Covering pairs ``(a, b)``: ``a < b`` with nothing strictly between."""
    covers = set()
    for a in P.elements:
        above = P.up(a)
        between = 0
        for c in iter_bits(above):
            between |= P.up(c)
        for b in iter_bits(above & ~between):
            covers.add((a, b))
    return covers


def lexicographic_sum(S: Poset, parts: Sequence[Poset]) -> Poset:
    """Substitute ``parts[s - 1]`` for each element ``s`` of ``S``.

    The ground set is relabelled consecutively, part by part in index order.
    """
    if len(parts) != S.n:
        raise ArityError(f"need {S.n} parts, got {len(parts)}")
    offsets = [0]
    for part in parts:
        offsets.append(offsets[-1] + part.n)
    gens = []
    for s, part in enumerate(parts, 1):
        off = offsets[s - 1]
        gens.extend((a + off, b + off) for a, b in part.lt)
        for t in iter_bits(S.up(s)):
            lo, hi = offsets[t - 1], offsets[t]
            # one representative pair per element suffices once closed
            for x in range(off + 1, offsets[s] + 1):
                gens.extend((x, y) for y in range(lo + 1, hi + 1))
    return Poset(offsets[-1], gens)


def disjoint_sum(*parts: Poset) -> Poset:
    return lexicographic_sum(antichain(len(parts)), parts)


def ordinal_sum(*parts: Poset) -> Poset:
    return lexicographic_sum(chain(len(parts)), parts)


def dual(P: Poset) -> Poset:
    return Poset._from_rows([0] + [P.down(a) for a in P.elements])


def product_poset(P: Poset, Q: Poset) -> Poset:
    """Cartesian product with the pointwise order; ``(p, q)`` gets label
    ``(p - 1) * Q.n + q``."""
    def label(p, q):
        return (p - 1) * Q.n + q

    gens = []
    for p in P.elements:
        for q in Q.elements:
            gens.extend((label(p, q), label(p2, q)) for p2 in iter_bits(P.up(p)))
            gens.extend((label(p, q), label(p, q2)) for q2 in iter_bits(Q.up(q)))
    return Poset(P.n * Q.n, gens)


def unordered_pairs(n: int):
    return combinations(range(1, n + 1), 2)
