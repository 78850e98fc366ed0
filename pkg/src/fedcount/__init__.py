"""Exact counting of subforests and subgraph degree tuples.

The package compares F(G), the number of acyclic spanning subgraphs, with
D(G), the number of distinct ordered degree tuples of spanning subgraphs, on
graph families where the two are known or conjectured to agree, and checks
the conjectures exhaustively at small sizes.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .census import (
    ColoredCensus,
    ColoredSubgraph,
    colored_forest_census,
    colored_recurrence,
    colored_recurrence_components,
    count_degree_tuples,
    count_forests_brute,
    count_forests_dc,
    is_semicyclic,
)
from .errors import (
    BudgetExceededError,
    DegenerateInputError,
    DomainError,
    FedCountError,
    GraphParseError,
    InvalidGraphError,
    InvalidMaskError,
    InvalidParameterError,
    PreconditionError,
)
from .graph import (
    Graph,
    SubgraphMask,
    alternating_euler_circuits,
    articulation_points,
    block_decomposition,
    bridges,
    complete_bipartite,
    cycle,
    degree_tuple,
    is_acyclic,
    is_bipartite,
    is_cactus,
    parse_graph,
    path,
    symmetric_difference,
    verify_alternating_euler,
)
from .harness import fed_status, sweep_all_graphs, sweep_colored_gr, sweep_known_fed_families
from .structure import (
    BookSpec,
    book_degree_count,
    book_forest_count,
    book_graph,
    count_D_factored,
    count_F_factored,
    identity_F1_D1,
    identity_F2_D2,
    is_degree_determinable,
)
from .tridiagonal import (
    EntrySet,
    RowColPair,
    TridiagonalMatrix,
    biadjacency_graph,
    complete_tridiagonal_graph,
    enumerate_gr,
    gr_collision_census,
    gr_recurrence_sequence,
    grid2,
    grid_tridiagonal_isomorphism,
    row_col_sums,
    rowcol_to_degree_tuple,
)
