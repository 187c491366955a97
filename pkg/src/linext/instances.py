"""Constructors for structured posets, used by tests, examples and the CLI.

Builders return the poset together with its blocks so callers can check
formulas against oracles. Random builders take a ``random.Random``.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .modular import JoinedStructure
from .poset import (
    Poset,
    UndirectedGraph,
    antichain,
    chain,
    comparability_graph,
    disjoint_sum,
    lexicographic_sum,
    ordinal_sum,
)


def random_poset(n: int, rng: random.Random, density: Optional[float] = None) -> Poset:
    """Random order from a random DAG on a shuffled labelling."""
    if n <= 1:
        return Poset(n)
    p = rng.random() if density is None else density
    labels = list(range(1, n + 1))
    rng.shuffle(labels)
    gens = [
        (labels[i], labels[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Poset(n, gens)


def random_relabel(P: Poset, blocks, rng: random.Random):
    perm = list(P.elements)
    rng.shuffle(perm)
    moved = [frozenset(perm[x - 1] for x in b) if b else b for b in blocks]
    return P.relabel(perm), moved


def _offsets(parts):
    out, total = [], 0
    for p in parts:
        out.append(frozenset(range(total + 1, total + p.n + 1)))
        total += p.n
    return out


def joined_poset(module_posets: Sequence[Optional[Poset]], incomparable: Sequence[bool]) -> tuple[Poset, JoinedStructure]:
    """Lexicographic sum realising a joined skeleton.

    ``module_posets`` has ``2D + 1`` entries; even positions may be ``None``
    (absent). ``incomparable[d - 1]`` says whether ``M_{2d}`` is incomparable
    to ``M_{2d+1}``. Comparable modules are ordered by index.
    """
    size = len(module_posets)
    D = (size - 1) // 2
    present = [r for r in range(1, size + 1) if module_posets[r - 1] is not None and module_posets[r - 1].n > 0]
    free = set()
    for d in range(1, D + 1):
        lo, ev, hi = 2 * d - 1, 2 * d, 2 * d + 1
        free.add((lo, hi))
        if ev in present:
            free.add((lo, ev))
            if incomparable[d - 1]:
                free.add((ev, hi))
    index = {r: k for k, r in enumerate(present, 1)}
    gens = [(index[r], index[s]) for r in present for s in present if r < s and (r, s) not in free]
    S = Poset(len(present), gens)
    parts = [module_posets[r - 1] for r in present]
    P = lexicographic_sum(S, parts)
    placed = dict(zip(present, _offsets(parts)))
    slots = [placed.get(r) for r in range(1, size + 1)]
    return P, JoinedStructure.from_poset(P, slots)


def path_poset(module_posets: Sequence[Poset]):
    mods: list[Optional[Poset]] = []
    for k, p in enumerate(module_posets):
        if k:
            mods.append(None)
        mods.append(p)
    if len(mods) == 1:
        return module_posets[0], None
    return joined_poset(mods, [False] * (len(module_posets) - 1))


def necklace_poset(module_posets: Sequence[Poset]):
    D = (len(module_posets) - 1) // 2
    return joined_poset(module_posets, [True] * D)


def tree_poset(module_posets: Sequence[Poset]):
    D = (len(module_posets) - 1) // 2
    return joined_poset(module_posets, [False] * D)


def star_poset(center: Poset, leaves: Sequence[Poset]) -> tuple[Poset, list[frozenset[int]]]:
    """``center`` incomparable to the ordinal sum of ``leaves``; centre block first."""
    P = disjoint_sum(center, ordinal_sum(*leaves))
    blocks = _offsets([center] + list(leaves))
    return P, blocks


def random_module(size: int, rng: random.Random) -> Poset:
    pick = rng.random()
    if pick < 0.25:
        return chain(size)
    if pick < 0.5:
        return antichain(size)
    return random_poset(size, rng)


def random_sizes(parts: int, total_max: int, rng: random.Random, allow_zero: Sequence[bool] = ()) -> Optional[list[int]]:
    """Random positive sizes (zero allowed where flagged) with sum at most ``total_max``."""
    sizes = [0 if (k < len(allow_zero) and allow_zero[k]) else 1 for k in range(parts)]
    if sum(sizes) > total_max:
        return None
    budget = rng.randint(sum(sizes), total_max)
    while sum(sizes) < budget:
        sizes[rng.randrange(parts)] += 1
    return sizes


# -- transitive orientations ---------------------------------------------------


def transitive_orientations(G: UndirectedGraph):
    """Every poset whose comparability graph is ``G``.

    Orienting ``a -> b`` forces ``a -> c`` for each neighbour ``c`` of ``a``
    not adjacent to ``b``, and ``c -> b`` for each neighbour ``c`` of ``b``
    not adjacent to ``a``; the search branches on one edge at a time and
    propagates these forced choices.
    """
    edges = sorted(G.edges)
    adj = {v: {w for w in G.vertices if G.adjacent(v, w)} for v in G.vertices}

    def propagate(orient, a, b):
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            key = (min(x, y), max(x, y))
            if key in orient:
                if orient[key] != (x, y):
                    return False
                continue
            orient[key] = (x, y)
            for c in adj[x] - adj[y] - {y}:
                stack.append((x, c))
            for c in adj[y] - adj[x] - {x}:
                stack.append((c, y))
        return True

    def rec(k, orient):
        while k < len(edges) and edges[k] in orient:
            k += 1
        if k == len(edges):
            try:
                P = Poset(G.n, orient.values())
            except ValueError:
                return
            if comparability_graph(P) == G:
                yield P
            return
        a, b = edges[k]
        for x, y in ((a, b), (b, a)):
            trial = dict(orient)
            if propagate(trial, x, y):
                yield from rec(k + 1, trial)

    return rec(0, {})


# -- figure instances ------------------------------------------------------------


def figure2_star():
    """Star-shaped example; the centre block {11..14} is incomparable to the rest."""
    rel = [(1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (5, 6)]
    rel += [(6, x) for x in (7, 8, 9)] + [(x, 10) for x in (7, 8, 9)]
    rel += [(11, 12), (11, 13), (12, 14), (13, 14)]
    P = Poset(14, rel)
    blocks = [frozenset({11, 12, 13, 14}), frozenset({1, 2, 3, 4}), frozenset({5, 6}), frozenset({7, 8, 9, 10})]
    return P, blocks


def figure3a_path():
    rel = [(6, 4), (6, 5), (4, 2), (5, 2), (5, 3), (4, 3), (2, 1), (3, 1),
           (9, 8), (10, 8), (8, 7), (4, 8), (5, 8), (9, 1), (10, 1)]
    P = Poset(10, rel)
    blocks = [frozenset(b) for b in ({4, 5, 6}, {9, 10}, {2, 3}, {7, 8}, {1})]
    return P, blocks


def figure3b_necklace():
    rel = [(a, b) for a in (1, 2, 3) for b in (8, 9, 10, 11)]
    rel += [(a, b) for a in range(4, 10) for b in (12, 13, 14)]
    P = Poset(14, rel)
    slots = [frozenset(b) for b in ({1, 2}, {3}, {4, 5, 6, 7}, {8, 9}, {10, 11}, {12, 13}, {14})]
    return P, slots


def figure3c_tree():
    rel = [(1, 2), (2, 4), (4, 5), (5, 9), (5, 10), (3, 6), (3, 7), (3, 8), (3, 4)]
    P = Poset(10, rel)
    slots = [frozenset(b) for b in ({1, 2}, {3}, {6, 7, 8}, {4, 5}, {9, 10})]
    return P, slots


FIGURE6_REVERSE = frozenset({(2, 1), (3, 1), (3, 2), (4, 3), (5, 3)})
