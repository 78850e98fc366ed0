from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fedcount.census import (
    ColoredCensus,
    ColoredSubgraph,
    colored_census_by_support,
    colored_forest_census,
    colored_recurrence,
    colored_recurrence_components,
    count_degree_tuples,
    count_forests_brute,
    count_forests_dc,
    degree_tuple_set,
    host_census,
    is_semicyclic,
    packed_degree_keys,
)
from fedcount.errors import BudgetExceededError, InvalidParameterError, PreconditionError
from fedcount.families import random_graph, random_tree
from fedcount.graph import Graph, complete_bipartite, complete_graph, cycle, is_bipartite
from fedcount.tridiagonal import complete_tridiagonal_graph, grid2


@st.composite
def graphs(draw, max_n=8, max_m=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    k = draw(st.integers(0, min(max_m, len(pairs))))
    edges = draw(st.permutations(pairs))[:k] if pairs else []
    return Graph(n, tuple(edges))


class TestForests:
    def test_cycle5(self):
        assert count_forests_brute(cycle(5)) == 31

    def test_ladders(self):
        assert count_forests_brute(grid2(2)) == 15
        assert count_forests_brute(grid2(3)) == 112

    def test_edgeless(self):
        assert count_forests_brute(Graph(0)) == 1 == count_forests_dc(Graph(5))

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            count_forests_brute(complete_graph(8), budget=1 << 20)

    @settings(max_examples=150)
    @given(graphs())
    def test_brute_matches_oracle(self, G):
        assert count_forests_brute(G) == oracles.forest_count(G.n, list(G.edges))

    def test_sharded(self):
        G = complete_graph(7)
        assert count_forests_brute(G, workers=1) == count_forests_brute(G, workers=2)


class TestDeletionContraction:
    def test_tree(self):
        rng = random.Random(0)
        for n in range(1, 15):
            T = random_tree(rng, n)
            assert count_forests_dc(T) == 2 ** (n - 1)

    def test_cycle12(self):
        assert count_forests_dc(cycle(12)) == 4095

    def test_ladder4(self):
        assert count_forests_dc(grid2(4)) == 836 == count_forests_brute(grid2(4))

    def test_complete_graph(self):
        # forests of K_n: 1, 2, 7, 38, 291, 2932, 36961 (by brute force up to K6)
        assert [count_forests_dc(complete_graph(n)) for n in range(1, 7)] == [1, 2, 7, 38, 291, 2932]
        assert count_forests_brute(complete_graph(6)) == 2932
        assert count_forests_dc(complete_graph(7)) == 36961

    def test_no_memo(self):
        G = complete_bipartite(3, 4)
        assert count_forests_dc(G, memo_capacity=0) == count_forests_brute(G)

    @settings(max_examples=200)
    @given(graphs(max_n=9, max_m=16))
    def test_matches_brute(self, G):
        assert count_forests_dc(G) == count_forests_brute(G)

    def test_ladder_large(self):
        # far beyond brute force; compare with the ladder recurrence
        seq = [2, 15]
        while len(seq) < 25:
            seq.append(8 * seq[-1] - 4 * seq[-2])
        assert count_forests_dc(grid2(25)) == seq[-1]


class TestDegreeTuples:
    def test_cycles(self):
        assert count_degree_tuples(cycle(5)) == 32
        assert count_degree_tuples(cycle(6)) == 63

    def test_ktri3(self):
        assert count_degree_tuples(complete_tridiagonal_graph(3)) == 112

    @settings(max_examples=150)
    @given(graphs())
    def test_methods_agree_with_oracle(self, G):
        want = oracles.degree_tuples(G.n, list(G.edges))
        assert degree_tuple_set(G) == want
        assert count_degree_tuples(G, method="packed") == len(want)
        assert count_degree_tuples(G, method="rows") == len(want)

    def test_trees_equal_forests(self):
        rng = random.Random(5)
        for n in range(1, 14):
            T = random_tree(rng, n)
            assert count_degree_tuples(T) == count_forests_brute(T) == 2 ** (n - 1)

    def test_sharded_keys(self):
        G = random_graph(random.Random(2), 9, 18)
        keys, places = packed_degree_keys(G)
        assert np.all(np.diff(keys) > 0)
        assert keys.size == count_degree_tuples(G, method="rows")
        assert count_degree_tuples(G, workers=2) == keys.size

    def test_unknown_method(self):
        with pytest.raises(InvalidParameterError):
            count_degree_tuples(cycle(4), method="magic")

    def test_forest_count_at_most_degree_count(self):
        # the conjectured inequality, checked (not assumed) on random graphs
        rng = random.Random(11)
        for _ in range(100):
            n = rng.randint(2, 8)
            G = random_graph(rng, n, rng.randint(0, min(14, n * (n - 1) // 2)))
            F, D = count_forests_brute(G), count_degree_tuples(G)
            assert F <= D
            assert (F == D) == is_bipartite(G)


class TestHostCensus:
    @pytest.mark.parametrize("host", [complete_graph(4), complete_bipartite(2, 3), cycle(5)])
    def test_matches_per_graph(self, host):
        hc = host_census(host)
        for mask in range(1 << host.m):
            G = host.spanning_subgraph(mask)
            assert hc.forests[mask] == count_forests_brute(G)
            assert hc.degrees[mask] == count_degree_tuples(G)
            assert hc.bipartite[mask] == is_bipartite(G)


LADDER2 = grid2(2)


def _colored(n, pairs_colors, k=2):
    G = grid2(n)
    colors = [0] * G.m
    for (u, v), c in pairs_colors:
        colors[G.edge_index(u, v)] = c
    return ColoredSubgraph(G, tuple(colors), k)


class TestSemicyclic:
    def test_n1(self):
        assert is_semicyclic(_colored(1, [((0, 1), 2)]))
        assert not is_semicyclic(_colored(1, []))

    def test_n2_via_first_column(self):
        # both horizontals and the first rung, last rung absent
        F = _colored(2, [((0, 1), 1), ((2, 3), 2), ((0, 2), 1)])
        assert is_semicyclic(F)

    def test_n2_last_rung(self):
        assert is_semicyclic(_colored(2, [((1, 3), 1)]))

    def test_n2_not(self):
        assert not is_semicyclic(_colored(2, [((0, 1), 1), ((0, 2), 1)]))

    def test_cyclic_rejected(self):
        F = _colored(2, [((0, 1), 1), ((2, 3), 1), ((0, 2), 1), ((1, 3), 1)])
        with pytest.raises(PreconditionError):
            is_semicyclic(F)

    def test_invalid_coloring(self):
        with pytest.raises(InvalidParameterError):
            ColoredSubgraph(LADDER2, (0, 0, 0), 1)
        with pytest.raises(InvalidParameterError):
            ColoredSubgraph(LADDER2, (0, 0, 0, 3), 2)
        with pytest.raises(InvalidParameterError):
            ColoredSubgraph(cycle(4), (0, 0, 0, 0), 1)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_all_supports_against_oracle(self, n):
        G = grid2(n)
        named = oracles.ladder(n)
        name_of = {tuple(e): x for x, e in named.items()}
        for mask in range(1 << G.m):
            present = {name_of[G.edges[e]] for e in range(G.m) if mask >> e & 1}
            if not oracles.acyclic(G.n, [named[x] for x in present]):
                continue
            F = ColoredSubgraph(G, tuple(1 if mask >> e & 1 else 0 for e in range(G.m)), 1)
            assert is_semicyclic(F) == oracles.semicyclic(n, present)


class TestColoredCensus:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_n1(self, k):
        assert colored_forest_census(1, k) == ColoredCensus(k + 1, k, 1)

    def test_n2(self):
        assert colored_forest_census(2, 1).a == 15
        assert colored_forest_census(2, 2).a == 65

    @pytest.mark.parametrize("n, k", [(2, 2), (3, 2), (2, 3), (3, 1)])
    def test_against_coloring_oracle(self, n, k):
        a, semi = oracles.colored_by_coloring(n, k)
        assert colored_forest_census(n, k) == ColoredCensus(a, semi, a - semi)

    @pytest.mark.parametrize("n, k", [(4, 2), (4, 3), (5, 2)])
    def test_against_support_oracle(self, n, k):
        a, semi = oracles.colored_by_support(n, k)
        assert colored_forest_census(n, k) == ColoredCensus(a, semi, a - semi)
        assert colored_census_by_support(n, k) == ColoredCensus(a, semi, a - semi)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_k1_is_uncolored(self, n):
        assert colored_forest_census(n, 1).a == count_forests_brute(grid2(n))

    def test_frozen(self):
        for (n, k), a in oracles.COLORED_A.items():
            assert colored_forest_census(n, k).a == a

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            colored_forest_census(6, 4, budget=10**6)

    def test_invariant(self):
        with pytest.raises(InvalidParameterError):
            ColoredCensus(5, 2, 2)


class TestColoredRecurrence:
    def test_examples(self):
        assert colored_recurrence(2, 1) == 15
        assert colored_recurrence(3, 1) == 112
        assert colored_recurrence(3, 2) == 23 * 65 - 36 * 3 == 1387

    @pytest.mark.parametrize("k", range(1, 7))
    def test_a2_closed_form(self, k):
        assert colored_recurrence(2, k) == 4 * k**3 + 6 * k**2 + 4 * k + 1
        assert colored_recurrence(1, k) == k + 1

    @pytest.mark.parametrize("k", range(1, 6))
    def test_split_streams_sum_to_main(self, k):
        comps = colored_recurrence_components(12, k)
        assert [c.a for c in comps] == [colored_recurrence(n, k) for n in range(1, 13)]

    def test_k1_is_gr_sequence(self):
        assert [colored_recurrence(n, 1) for n in range(1, 8)] == oracles.GR_BINARY

    def test_invalid(self):
        with pytest.raises(InvalidParameterError):
            colored_recurrence(0, 1)
        with pytest.raises(InvalidParameterError):
            colored_recurrence_components(2, 0)
