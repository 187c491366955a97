import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linext.errors import (
    ConditionError,
    EmptySetError,
    NotModularError,
    NotTransitivelyOrientableError,
    PartitionError,
)
from linext.instances import (
    figure2_star,
    figure3a_path,
    figure3b_necklace,
    figure3c_tree,
    joined_poset,
    random_poset,
)
from linext.modular import (
    JoinedStructure,
    ModularPartition,
    Resolution,
    Shape,
    classify_quotient,
    coarsen_by_inconsistency,
    find_inconsistent_pairs,
    find_joined_numbering,
    find_modular_partition,
    is_module,
    is_poset_partition,
    maximal_strong_modules,
    renumber_blocks,
    reorient,
    skeleton_of,
    the_ones_resolution,
)
from linext.poset import Poset, UndirectedGraph, antichain, chain, comparability_graph, incomparability_graph


def path_graph(k):
    return UndirectedGraph(k, [(i, i + 1) for i in range(1, k)])


def test_is_module_basic():
    G = path_graph(3)
    assert is_module(G, [1, 3])
    assert not is_module(G, [1, 2])
    assert is_module(G, [2])
    with pytest.raises(EmptySetError):
        is_module(G, [])


def test_partition_validation():
    G = path_graph(3)
    with pytest.raises(PartitionError):
        ModularPartition(((1,), (1, 2, 3)), G)
    with pytest.raises(PartitionError):
        ModularPartition(((1,), (2,)), G)
    with pytest.raises(NotModularError):
        ModularPartition(((1, 2), (3,)), G)


@pytest.mark.parametrize(
    "edges,k,shape",
    [
        ([(1, 2), (1, 3), (1, 4)], 4, Shape.STAR),
        ([(1, 2)], 2, Shape.STAR),
        ([(1, 2), (2, 3), (3, 4)], 4, Shape.PATH),
        ([(1, 2), (1, 3), (2, 3)], 3, Shape.NECKLACE3),
        ([(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)], 5, Shape.NECKLACE3),
        ([(1, 2), (1, 3), (3, 4), (3, 5)], 5, Shape.FULL_BINARY_TREE),
        ([(1, 2), (1, 3), (2, 3), (3, 4), (3, 5)], 5, Shape.JOINED),
        ([(1, 2), (2, 3), (3, 4), (4, 1)], 4, Shape.OTHER),
    ],
)
def test_classify(edges, k, shape):
    assert classify_quotient(UndirectedGraph(k, edges)).shape == shape


def test_joined_numbering_is_valid():
    G = UndirectedGraph(5, [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5)])
    slots = find_joined_numbering(G, "joined")
    assert slots is not None and len(slots) == 5
    assert find_joined_numbering(G, "tree") is None
    assert find_joined_numbering(G, "necklace") is None


def test_figures_have_expected_shapes():
    for build, shape in (
        (figure2_star, Shape.STAR),
        (figure3a_path, Shape.PATH),
    ):
        P, blocks = build()
        assert skeleton_of(incomparability_graph(P), blocks).shape == shape
    P, slots = figure3b_necklace()
    assert skeleton_of(incomparability_graph(P), slots).shape == Shape.NECKLACE3
    P, slots = figure3c_tree()
    assert skeleton_of(incomparability_graph(P), slots).shape == Shape.FULL_BINARY_TREE


def test_figure3a_sizes():
    P, blocks = figure3a_path()
    assert [len(b) for b in blocks] == [3, 2, 2, 2, 1]


def test_chain_non_example():
    P = chain(3)
    blocks = [[1, 3], [2]]
    assert ModularPartition(tuple(blocks), comparability_graph(P))
    assert not is_poset_partition(P, blocks)
    assert find_inconsistent_pairs(P, blocks) == [(1, 2)]
    assert len(coarsen_by_inconsistency(P, blocks).blocks) == 1


def test_reorient_requires_transitive_index_order():
    P = chain(3)
    with pytest.raises(NotTransitivelyOrientableError):
        # 1 - 2 - 3 comparable in sequence but 1, 3 incomparable
        reorient(Poset(3, [(1, 2), (3, 2)]), [[1], [2], [3]])
    Q = reorient(P, [[1, 3], [2]])
    assert incomparability_graph(Q) == incomparability_graph(P)
    assert is_poset_partition(Q, [[1, 3], [2]])


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32))
def test_reorient_keeps_incomparability_graph(n, seed):
    P = random_poset(n, random.Random(seed))
    part = find_modular_partition(incomparability_graph(P))
    if part is None:
        return
    ordered = renumber_blocks(P, part.blocks)
    Q = reorient(P, ordered)
    assert incomparability_graph(Q) == incomparability_graph(P)
    assert is_poset_partition(Q, ordered)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32))
def test_coarsening_yields_poset_partition(n, seed):
    P = random_poset(n, random.Random(seed))
    part = find_modular_partition(comparability_graph(P))
    if part is None:
        return
    coarse = coarsen_by_inconsistency(P, part.blocks)
    assert is_poset_partition(P, coarse.blocks)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32))
def test_strong_modules_partition_and_are_modules(n, seed):
    G = incomparability_graph(random_poset(n, random.Random(seed)))
    masks = maximal_strong_modules(G)
    total = 0
    for m in masks:
        assert not total & m
        total |= m
        assert is_module(G, [v for v in G.vertices if m >> v & 1])
    assert total == (1 << (n + 1)) - 2


def test_joined_structure_validation():
    P, js = joined_poset([chain(1), None, chain(1)], [False])
    assert js.D == 1 and js.incomparable == (False,)
    with pytest.raises(ConditionError):
        JoinedStructure.from_poset(P, [None, None, js.modules[2]])
    with pytest.raises(ConditionError):
        JoinedStructure.from_poset(chain(2), [{1}, None, {2}])


def test_flags_follow_construction():
    _, js = joined_poset([chain(1), chain(1), chain(1), chain(2), chain(1)], [True, False])
    assert js.incomparable == (True, False)


def test_resolution_cases():
    # canonical orientation is a poset partition
    P, js = joined_poset([chain(2), chain(1), chain(1)], [False])
    assert the_ones_resolution(P, js) == Resolution.AS_IS
    # M_3 = {3} sits strictly inside the chain M_2 = {2, 4}
    Q = Poset(4, [(2, 3), (3, 4)])
    js2 = JoinedStructure.from_poset(Q, [{1}, {2, 4}, {3}])
    assert the_ones_resolution(Q, js2) == Resolution.MERGE_LAST_TWO
