"""Counting and enumerating linear extensions of posets with modular structure."""

from .counting import (
    CountOptions,
    CountReport,
    binomial,
    chain_quotient,
    count,
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
)
from .enumeration import (
    enumerate_backtracking,
    enumerate_modular,
    enumerate_pivots,
    is_linear_extension,
    recover_pivots,
)
from .errors import LinextError
from .modular import (
    JoinedStructure,
    ModularPartition,
    Resolution,
    Shape,
    classify_quotient,
    coarsen_by_inconsistency,
    find_inconsistent_pairs,
    find_modular_partition,
    is_module,
    is_poset_partition,
    reorient,
    skeleton_of,
    the_ones_resolution,
)
from .netbuild import ModuleSpec, NetworkSpec, assemble_network, search_reverse_set, verify_network
from .poset import (
    Poset,
    UndirectedGraph,
    antichain,
    chain,
    comparability_graph,
    disjoint_sum,
    dual,
    incomparability_graph,
    lexicographic_sum,
    ordinal_sum,
    product_poset,
)
from .tournament import (
    Digraph,
    ReverseEdgeSet,
    count_inversion_constrained,
    count_transitive_subtournaments,
    hamiltonian_permutation,
    inversion_set,
    poset_from_reverse_edges,
    reverse_edge_digraph,
    tournament_from_permutation,
    transitive_tournament,
    verify_three_way,
)

__version__ = "0.1.0"
