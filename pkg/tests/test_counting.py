import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _corpus import SHAPES, corpus
from linext.counting import (
    CountOptions,
    binomial,
    chain_quotient,
    count,
    joined_sum,
    joined_sum_transfer,
    le_bruteforce,
    le_dp,
    le_joined,
    le_modular,
    le_necklace,
    le_parallel,
    le_path,
    le_series,
    le_star,
    le_tree,
    pivot_summand,
)
from linext.errors import ArityError, DomainError, NotModularError, ShapeError, SizeError
from linext.instances import (
    figure2_star,
    figure3a_path,
    figure3b_necklace,
    figure3c_tree,
    joined_poset,
    random_poset,
)
from linext.modular import JoinedStructure, find_modular_partition, renumber_blocks, reorient
from linext.poset import (
    Poset,
    antichain,
    chain,
    disjoint_sum,
    dual,
    incomparability_graph,
    ordinal_sum,
    product_poset,
)


# -- binomial ----------------------------------------------------------------


def test_binomial_convention():
    assert binomial(-1, 0) == 1
    assert binomial(3, 4) == 0
    assert binomial(5, 2) == 10
    assert binomial(0, 0) == 1


@pytest.mark.parametrize("a,b", [(-2, 0), (3, -1), (-1, 1)])
def test_binomial_domain(a, b):
    with pytest.raises(DomainError):
        binomial(a, b)


# -- oracles --------------------------------------------------------------------


def test_bruteforce_examples():
    assert le_bruteforce(chain(6)) == 1
    assert le_bruteforce(antichain(4)) == 24
    assert le_bruteforce(product_poset(chain(2), chain(3))) == 5
    with pytest.raises(SizeError):
        le_bruteforce(chain(11))


def test_dp_examples():
    assert le_dp(antichain(6)) == 720
    assert le_dp(product_poset(chain(2), chain(4))) == 14
    with pytest.raises(SizeError):
        le_dp(chain(21))
    with pytest.raises(SizeError):
        le_dp(antichain(12), max_states=100)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 8), st.integers(0, 2**32))
def test_dp_matches_bruteforce(n, seed):
    P = random_poset(n, random.Random(seed))
    assert le_dp(P) == le_bruteforce(P)


# -- series / parallel ---------------------------------------------------------------


def test_series_parallel():
    assert le_series([1, 1], [2, 3]) == 1
    assert le_parallel([1, 1], [1, 1]) == 2
    assert le_parallel([1, 1, 1], [1, 1, 1]) == 6
    with pytest.raises(ArityError):
        le_series([1], [1, 2])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32))
def test_sum_rules_match_oracle(a, b, seed):
    rng = random.Random(seed)
    P, Q = random_poset(a, rng), random_poset(b, rng)
    counts = [le_bruteforce(P), le_bruteforce(Q)]
    assert le_bruteforce(disjoint_sum(P, Q)) == le_parallel(counts, [a, b])
    assert le_bruteforce(ordinal_sum(P, Q)) == le_series(counts, [a, b])


# -- closed formulas --------------------------------------------------------------


def test_star_examples():
    P = antichain(2)
    assert le_star(P, [[1], [2]]) == 2
    F, blocks = figure2_star()
    assert le_star(F, blocks) == le_dp(F)
    with pytest.raises(ShapeError):
        le_star(chain(2), [[1], [2]])


def test_path_examples():
    assert le_path([7], [3]) == 7
    assert le_path([1, 1], [1, 1]) == 2
    assert le_path([1, 1], [2, 1]) == 3
    with pytest.raises(ShapeError):
        le_path([1, 1], [0, 1])


def test_necklace_examples():
    assert le_necklace([1, 1, 1], [1, 1, 1]) == 6
    assert le_necklace([1, 1, 1], [2, 1, 1]) == 12
    P, slots = figure3b_necklace()
    js = JoinedStructure.from_poset(P, slots)
    counts = [le_bruteforce(P.restrict(b)[0]) for b in slots]
    assert le_necklace(counts, js.sizes) == le_dp(P)


def test_tree_examples():
    # stopping the pivot product at D-1 would give 2 here
    assert le_tree([1, 1, 1], [1, 1, 1]) == 3
    P, js = joined_poset([antichain(2), chain(1), chain(1)], [False])
    assert le_tree([2, 1, 1], [2, 1, 1]) == le_bruteforce(P) == 12
    F, slots = figure3c_tree()
    counts = [le_bruteforce(F.restrict(b)[0]) for b in slots]
    assert le_tree(counts, [len(b) for b in slots]) == le_dp(F)


def test_tree_sizes_211_with_chain_modules():
    P, js = joined_poset([chain(2), chain(1), chain(1)], [False])
    assert le_tree([1, 1, 1], [2, 1, 1]) == le_bruteforce(P) == 6


def test_figure3a_path_formula():
    P, blocks = figure3a_path()
    counts = [le_bruteforce(P.restrict(b)[0]) for b in blocks]
    assert le_path(counts, [len(b) for b in blocks]) == le_dp(P) == count(P).count


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=9).filter(lambda v: len(v) % 2 == 1))
def test_zero_term_guard(raw):
    sizes = [max(1, s) if k % 2 == 0 else s for k, s in enumerate(raw)]
    D = (len(sizes) - 1) // 2
    for d in range(1, D):
        if sizes[2 * d - 1] == 0:
            pivots = [1] * D
            pivots[d - 1] = 0
            pivots[d] = 0
            assert pivot_summand(sizes, [False] * D, pivots) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=3, max_size=11).filter(lambda v: len(v) % 2 == 1), st.integers(0, 2**32))
def test_transfer_matches_direct_sum(raw, seed):
    rng = random.Random(seed)
    sizes = [max(1, s) if k % 2 == 0 else s for k, s in enumerate(raw)]
    D = (len(sizes) - 1) // 2
    flags = [bool(sizes[2 * d + 1]) and rng.random() < 0.5 for d in range(D)]
    assert joined_sum(sizes, flags) == joined_sum_transfer(sizes, flags)


def test_parallel_pivot_sum_matches():
    sizes, flags = (3, 2, 2, 0, 3, 1, 2), (True, False, False)
    assert joined_sum(sizes, flags, workers=2) == joined_sum(sizes, flags)


def test_joined_needs_counts_per_slot():
    P, js = joined_poset([chain(1), None, chain(1)], [False])
    with pytest.raises(ArityError):
        le_joined(js, [1, 1])


@pytest.mark.parametrize("shape", SHAPES)
def test_formulas_match_bruteforce(shape):
    for inst in corpus(shape, 120, 9, seed=101):
        assert inst.formula() == le_bruteforce(inst.P)


@pytest.mark.parametrize("shape", SHAPES)
def test_formulas_match_dp_on_larger_instances(shape):
    for inst in corpus(shape, 15, 16, seed=202, n_min=10):
        assert inst.formula(le_dp) == le_dp(inst.P)


# -- modular recursion ---------------------------------------------------------


def test_chain_quotient_extremes():
    P = random_poset(6, random.Random(3))
    assert chain_quotient(P, [list(P.elements)]) == chain(6)
    assert chain_quotient(P, [[x] for x in P.elements]) == P
    with pytest.raises(NotModularError):
        chain_quotient(chain(3), [[1, 3], [2]])


def test_modular_singletons_and_figure2():
    P = random_poset(7, random.Random(5))
    assert le_modular(P, [[x] for x in P.elements]) == le_bruteforce(P)
    F, blocks = figure2_star()
    assert le_modular(F, blocks) == le_star(F, blocks)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32))
def test_modular_matches_oracle(n, seed):
    P = random_poset(n, random.Random(seed))
    part = find_modular_partition(incomparability_graph(P))
    if part is None:
        return
    assert le_modular(P, part.blocks) == le_bruteforce(P)
    cq = chain_quotient(reorient(P, renumber_blocks(P, part.blocks)), renumber_blocks(P, part.blocks))
    prod = math.prod(le_bruteforce(P.restrict(b)[0]) for b in part.blocks)
    assert le_bruteforce(cq) * prod == le_bruteforce(P)


# -- invariants -------------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 8), st.integers(0, 2**32))
def test_dual_and_relabel_invariance(n, seed):
    rng = random.Random(seed)
    P = random_poset(n, rng)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    value = le_bruteforce(P)
    assert le_bruteforce(dual(P)) == value
    assert le_bruteforce(P.relabel(perm)) == value
    assert count(P).count == value


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32))
def test_removing_a_cover_never_decreases(n, seed):
    from linext.poset import hasse_covers

    rng = random.Random(seed)
    P = random_poset(n, rng)
    covers = sorted(hasse_covers(P))
    if not covers:
        return
    drop = rng.choice(covers)
    Q = Poset(n, [c for c in P.lt if c != drop])
    assert le_bruteforce(Q) >= le_bruteforce(P)


# -- dispatcher ------------------------------------------------------------------------


def test_count_examples():
    assert count(chain(30)).count == 1
    assert count(chain(30)).strategy == "path"
    assert count(product_poset(chain(2), chain(5))).count == 42
    for n, c in zip(range(1, 7), (1, 2, 5, 14, 42, 132)):
        assert count(product_poset(chain(2), chain(n))).count == c


def test_count_figures_match_dp():
    for build in (figure2_star, figure3a_path, figure3b_necklace, figure3c_tree):
        P, _ = build()
        assert count(P).count == le_dp(P)


def test_count_with_user_partition_and_strategy():
    P, slots = figure3b_necklace()
    blocks = [sorted(b) for b in slots]
    expected = le_dp(P)
    for strategy in ("necklace", "joined", "modular", "auto"):
        report = count(P, CountOptions(strategy=strategy, partition=blocks))
        assert report.count == expected
    with pytest.raises(ShapeError):
        count(P, CountOptions(strategy="tree", partition=blocks))
    with pytest.raises(ShapeError):
        count(P, CountOptions(strategy="path", partition=blocks))


def test_count_report_json_order():
    d = count(antichain(3)).to_dict()
    assert list(d) == ["count", "strategy", "partition", "skeleton_shape"]
    assert d["count"] == "6"


def test_count_large_antichain_via_formula():
    report = count(antichain(25))
    assert report.count == math.factorial(25)


def test_count_size_error_when_everything_over_limit():
    # prime incomparability graph of unknown shape: only the DP applies
    P = Poset(6, [(1, 5), (1, 6), (4, 2), (5, 2), (5, 3)])
    assert count(P).strategy == "dp"
    with pytest.raises(SizeError):
        count(P, CountOptions(dp_limit=5))
