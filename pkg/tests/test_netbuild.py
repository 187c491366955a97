import random

import pytest

from linext.errors import InfeasibleError, PartitionError, RangeError
from linext.netbuild import (
    ModuleSpec,
    NetworkSpec,
    assemble_network,
    is_digraph_module,
    search_reverse_set,
    verify_network,
)
from linext.tournament import Digraph, ReverseEdgeSet, count_transitive_subtournaments, reverse_edge_digraph, transitive_tournament

FIG7 = NetworkSpec(
    Digraph(4, frozenset({(1, 2), (2, 3), (3, 4), (4, 1)})),
    (ModuleSpec(5, target=10), ModuleSpec(4, target=2), ModuleSpec(5, target=20), ModuleSpec(3, target=6)),
)


def C(R):
    return count_transitive_subtournaments(reverse_edge_digraph(R))


def test_search_examples():
    assert search_reverse_set(3, 6) == ReverseEdgeSet.full(3)
    R = search_reverse_set(4, 2)
    assert C(R) == 2 and len(R.pairs) == 1
    for target in (10, 20):
        assert C(search_reverse_set(5, target)) == target


def test_search_is_deterministic():
    assert search_reverse_set(5, 20) == search_reverse_set(5, 20)
    assert search_reverse_set(5, 20, workers=2) == search_reverse_set(5, 20)


def test_search_infeasible_reports_nearest():
    with pytest.raises(InfeasibleError):
        search_reverse_set(3, 7)
    # 5 is not reachable on 3 vertices: achievable counts are 1, 2, 3, 4, 6 ... check by search
    reachable = set()
    for target in range(1, 7):
        try:
            search_reverse_set(3, target)
            reachable.add(target)
        except InfeasibleError as exc:
            assert exc.nearest
            assert set(exc.nearest) <= set(range(1, 7))
    assert 6 in reachable and 1 in reachable


def test_module_spec_validation():
    with pytest.raises(InfeasibleError):
        ModuleSpec(3, target=7)
    with pytest.raises(ValueError):
        ModuleSpec(3)
    with pytest.raises(RangeError):
        ModuleSpec(3, reverse=ReverseEdgeSet(2, frozenset()))
    with pytest.raises(PartitionError):
        NetworkSpec(Digraph(2, frozenset()), (ModuleSpec(1, target=1),))
    with pytest.raises(RangeError):
        NetworkSpec(Digraph(2, frozenset({(1, 2), (2, 1)})), (ModuleSpec(1, target=1), ModuleSpec(1, target=1)))


def test_assemble_small():
    G, blocks = assemble_network(NetworkSpec(Digraph(1, frozenset()), (ModuleSpec(4, target=1),)))
    assert G == transitive_tournament(4)
    G, blocks = assemble_network(
        NetworkSpec(Digraph(2, frozenset({(1, 2)})), (ModuleSpec(1, target=1), ModuleSpec(1, target=1)))
    )
    assert G.arcs == {(1, 2)}


def test_figure7_network():
    G, blocks = assemble_network(FIG7)
    assert [len(b) for b in blocks] == [5, 4, 5, 3]
    assert verify_network(G, blocks) == [10, 2, 20, 6]
    assert all(is_digraph_module(G, b) for b in blocks)


def test_verify_on_split_transitive_tournament():
    G = transitive_tournament(6)
    assert verify_network(G, [[1, 4], [2, 3, 6], [5]]) == [1, 1, 1]
    with pytest.raises(PartitionError):
        verify_network(G, [[1, 2]])


def test_random_specs_round_trip():
    rng = random.Random(7)
    for _ in range(15):
        k = rng.randint(1, 4)
        arcs = {(a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1) if rng.random() < 0.5}
        arcs = {(b, a) if rng.random() < 0.5 else (a, b) for a, b in arcs}
        modules = []
        for _ in range(k):
            n = rng.randint(1, 4)
            R = ReverseEdgeSet(n, frozenset(p for p in ReverseEdgeSet.full(n).pairs if rng.random() < 0.4))
            modules.append(ModuleSpec(n, target=C(R)))
        spec = NetworkSpec(Digraph(k, frozenset(arcs)), tuple(modules))
        G, blocks = assemble_network(spec)
        assert verify_network(G, blocks) == [m.target for m in modules]
        assert all(is_digraph_module(G, b) for b in blocks)
