"""Reverse-edge digraphs, transitive tournaments and inversion sets.

For a set ``R`` of descending pairs ``(i, j)``, ``i > j``, three counts agree:
linear extensions of ``P_n(R)``, transitive tournaments inside ``A_n(R)``, and
permutations whose inversions all lie in ``R``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .counting import count
from .errors import (
    CyclicError,
    MismatchError,
    NotPermutationError,
    NotTournamentError,
    RangeError,
    SizeError,
)
from .poset import Poset

PERM_LIMIT = 10
RECIPROCAL_LIMIT = 24

Pair = tuple[int, int]


def check_permutation(seq: Sequence[int]) -> tuple[int, ...]:
    seq = tuple(int(x) for x in seq)
    if sorted(seq) != list(range(1, len(seq) + 1)):
        raise NotPermutationError(f"{list(seq)} is not a permutation of 1..{len(seq)}")
    return seq


@dataclass(frozen=True)
class ReverseEdgeSet:
    """Descending pairs ``(i, j)`` with ``n >= i > j >= 1``."""

    n: int
    pairs: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise RangeError("n must be non-negative")
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        for i, j in pairs:
            if not (1 <= j < i <= self.n):
                raise RangeError(f"reverse pair {(i, j)} must satisfy n >= i > j >= 1")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def full(cls, n: int) -> "ReverseEdgeSet":
        return cls(n, frozenset((i, j) for j, i in combinations(range(1, n + 1), 2)))


@dataclass(frozen=True)
class Digraph:
    """Loop-free digraph on ``1..n``; reciprocal pairs allowed."""

    n: int
    arcs: frozenset

    def __post_init__(self):
        arcs = frozenset((int(a), int(b)) for a, b in self.arcs)
        for a, b in arcs:
            if a == b:
                raise RangeError(f"loop at {a}")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise RangeError(f"arc {(a, b)} outside 1..{self.n}")
        object.__setattr__(self, "arcs", arcs)

    def induced(self, vertices: Iterable[int]) -> "Digraph":
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels, 1)}
        arcs = {(index[a], index[b]) for a, b in self.arcs if a in index and b in index}
        return Digraph(len(labels), frozenset(arcs))

    def out_neighbors(self, v: int) -> set[int]:
        return {b for a, b in self.arcs if a == v}

    def in_neighbors(self, v: int) -> set[int]:
        return {a for a, b in self.arcs if b == v}


def inversion_set(p: Sequence[int]) -> set[Pair]:
    p = check_permutation(p)
    return {(p[a], p[b]) for a, b in combinations(range(len(p)), 2) if p[a] > p[b]}


def count_inversion_constrained(R: ReverseEdgeSet, limit: int = PERM_LIMIT) -> int:
    if R.n > limit:
        raise SizeError(f"permutation filter limited to n <= {limit}")
    allowed = R.pairs
    return sum(1 for p in permutations(range(1, R.n + 1)) if inversion_set(p) <= allowed)


def transitive_tournament(n: int) -> Digraph:
    return Digraph(n, frozenset(combinations(range(1, n + 1), 2)))


def reverse_edge_digraph(R: ReverseEdgeSet) -> Digraph:
    """``A_n(R)``: the transitive tournament plus the reverse arcs in ``R``."""
    return Digraph(R.n, transitive_tournament(R.n).arcs | R.pairs)


def complement_digraph(G: Digraph) -> Digraph:
    everything = {(a, b) for a in range(1, G.n + 1) for b in range(1, G.n + 1) if a != b}
    return Digraph(G.n, frozenset(everything - G.arcs))


def is_acyclic(G: Digraph) -> bool:
    """Kahn's algorithm: peel off vertices of in-degree zero."""
    indeg = [0] * (G.n + 1)
    succ: list[list[int]] = [[] for _ in range(G.n + 1)]
    for a, b in G.arcs:
        indeg[b] += 1
        succ[a].append(b)
    stack = [v for v in range(1, G.n + 1) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == G.n


def is_transitive(G: Digraph) -> bool:
    arcs = G.arcs
    return all((a, c) in arcs for a, b in arcs for b2, c in arcs if b == b2 and a != c)


def is_tournament(G: Digraph) -> bool:
    return all(((a, b) in G.arcs) != ((b, a) in G.arcs) for a, b in combinations(range(1, G.n + 1), 2))


def _acyclic_rows(n: int, succ: list[int]) -> bool:
    # succ[v] is a bitset of out-neighbours
    indeg = [0] * (n + 1)
    for v in range(1, n + 1):
        s = succ[v]
        while s:
            low = s & -s
            indeg[low.bit_length() - 1] += 1
            s ^= low
    stack = [v for v in range(1, n + 1) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        s = succ[v]
        while s:
            low = s & -s
            w = low.bit_length() - 1
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
            s ^= low
    return seen == n


def count_transitive_subtournaments(G: Digraph, limit: int = RECIPROCAL_LIMIT) -> int:
    """Number of ways to keep one arc per vertex pair so the result is acyclic.

    Single arcs are forced. Each reciprocal pair is decided by depth-first
    search, pruning as soon as the forced arcs plus the choices made so far
    contain a directed cycle.
    """
    n = G.n
    forced = [0] * (n + 1)
    reciprocal = []
    for a, b in combinations(range(1, n + 1), 2):
        ab, ba = (a, b) in G.arcs, (b, a) in G.arcs
        if ab and ba:
            reciprocal.append((a, b))
        elif ab:
            forced[a] |= 1 << b
        elif ba:
            forced[b] |= 1 << a
        else:
            return 0
    if len(reciprocal) > limit:
        raise SizeError(f"{len(reciprocal)} reciprocal pairs exceed the limit {limit}")
    if not _acyclic_rows(n, forced):
        return 0

    def rec(k, succ):
        if k == len(reciprocal):
            return 1
        a, b = reciprocal[k]
        total = 0
        for x, y in ((a, b), (b, a)):
            succ[x] |= 1 << y
            if _acyclic_rows(n, succ):
                total += rec(k + 1, succ)
            succ[x] &= ~(1 << y)
        return total

    return rec(0, list(forced))


def poset_from_reverse_edges(R: ReverseEdgeSet) -> Poset:
    """``P_n(R)``: closure of ``i < j`` over pairs ``i < j`` with ``(j, i)`` not reversed."""
    gens = [(i, j) for i, j in combinations(range(1, R.n + 1), 2) if (j, i) not in R.pairs]
    return Poset(R.n, gens)


def hamiltonian_permutation(T: Digraph) -> tuple[int, ...]:
    """The unique Hamiltonian path of an acyclic tournament.

    In a transitive tournament the out-degrees are ``n-1, ..., 0``, so the
    path lists vertices by decreasing out-degree.
    """
    if not is_tournament(T):
        raise NotTournamentError("exactly one arc per vertex pair is required")
    if not is_acyclic(T):
        raise CyclicError("tournament contains a directed cycle")
    outdeg = {v: 0 for v in range(1, T.n + 1)}
    for a, _ in T.arcs:
        outdeg[a] += 1
    return tuple(sorted(outdeg, key=lambda v: -outdeg[v]))


def tournament_from_permutation(p: Sequence[int]) -> Digraph:
    p = check_permutation(p)
    return Digraph(len(p), frozenset((p[a], p[b]) for a, b in combinations(range(len(p)), 2)))


@dataclass(frozen=True)
class ThreeWayReport:
    n: int
    linear_extensions: int
    tournaments: int
    permutations: int

    @property
    def value(self) -> int:
        return self.linear_extensions

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "linear_extensions": str(self.linear_extensions),
            "transitive_tournaments": str(self.tournaments),
            "permutations": str(self.permutations),
            "equal": self.linear_extensions == self.tournaments == self.permutations,
        }


def verify_three_way(R: ReverseEdgeSet, perm_limit: int = PERM_LIMIT) -> ThreeWayReport:
    le = count(poset_from_reverse_edges(R)).count
    tt = count_transitive_subtournaments(reverse_edge_digraph(R))
    pc = count_inversion_constrained(R, perm_limit)
    report = ThreeWayReport(R.n, le, tt, pc)
    if not le == tt == pc:
        raise MismatchError(f"counts disagree: LE={le}, tournaments={tt}, permutations={pc}")
    return report
