"""Deterministic random instances with known block structure."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from linext.counting import le_bruteforce, le_dp, le_joined, le_necklace, le_path, le_star, le_tree
from linext.instances import joined_poset, random_module, random_relabel, random_sizes, star_poset
from linext.modular import JoinedStructure
from linext.poset import Poset

SHAPES = ("star", "path", "necklace", "tree", "joined")


@dataclass
class Instance:
    shape: str
    P: Poset
    blocks: list  # slot order; empty frozensets mark absent even modules
    js: Optional[JoinedStructure]

    def module_counts(self, oracle=le_bruteforce):
        out = []
        for b in self.blocks:
            if not b:
                out.append(1)
                continue
            sub, _ = self.P.restrict(b)
            out.append(oracle(sub))
        return out

    def formula(self, oracle=le_bruteforce) -> int:
        counts = self.module_counts(oracle)
        sizes = [len(b) for b in self.blocks]
        if self.shape == "star":
            return le_star(self.P, self.blocks, counts)
        if self.shape == "path":
            odd = [k for k in range(0, len(sizes), 2)]
            return le_path([counts[k] for k in odd], [sizes[k] for k in odd])
        if self.shape == "necklace":
            return le_necklace(counts, sizes)
        if self.shape == "tree":
            return le_tree(counts, sizes)
        return le_joined(self.js, counts)


def _evens(shape, D, rng):
    """Per even slot: None (absent), True (incomparable to the next odd), False (comparable)."""
    if shape == "path":
        return [None] * D
    if shape == "necklace":
        return [True] * D
    if shape == "tree":
        return [False] * D
    return [rng.choice((None, True, False)) for _ in range(D)]


def make_instance(shape: str, n_max: int, rng: random.Random, n_min: int = 1) -> Instance:
    while True:
        inst = _try(shape, n_max, rng)
        if inst is not None and inst.P.n >= n_min:
            return inst


def _try(shape, n_max, rng):
    if shape == "star":
        leaves = rng.randint(1, min(3, n_max - 1))
        sizes = random_sizes(leaves + 1, n_max, rng)
        center = random_module(sizes[0], rng)
        P, blocks = star_poset(center, [random_module(s, rng) for s in sizes[1:]])
        P, blocks = random_relabel(P, blocks, rng)
        return Instance(shape, P, blocks, None)
    D_max = (n_max - 1) // 2 if shape in ("necklace", "tree") else n_max - 1
    if D_max < 1:
        return None
    D = rng.randint(1, min(D_max, 4))
    evens = _evens(shape, D, rng)
    allow_zero = [k % 2 == 1 and evens[k // 2] is None for k in range(2 * D + 1)]
    sizes = random_sizes(2 * D + 1, n_max, rng, allow_zero)
    if sizes is None:
        return None
    mods = []
    for k, s in enumerate(sizes):
        if k % 2 == 1 and evens[k // 2] is None:
            mods.append(None)
        else:
            mods.append(random_module(max(s, 1), rng))
    flags = [bool(e) for e in evens]
    P, js = joined_poset(mods, flags)
    P, slots = random_relabel(P, [m if m else frozenset() for m in js.modules], rng)
    js = JoinedStructure.from_poset(P, slots)
    return Instance(shape, P, list(slots), js)


def corpus(shape: str, count: int, n_max: int, seed: int, n_min: int = 1):
    rng = random.Random(f"{shape}-{seed}")
    return [make_instance(shape, n_max, rng, n_min) for _ in range(count)]


__all__ = ["Instance", "SHAPES", "corpus", "make_instance", "le_bruteforce", "le_dp"]
