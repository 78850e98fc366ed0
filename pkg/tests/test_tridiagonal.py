from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fedcount.census import count_degree_tuples, degree_tuple_set
from fedcount.errors import BudgetExceededError, DomainError, InvalidParameterError
from fedcount.graph import cycle, degree_tuple, is_bipartite
from fedcount.tridiagonal import (
    EntrySet,
    RowColPair,
    TridiagonalMatrix,
    band_positions,
    biadjacency_graph,
    complete_tridiagonal_graph,
    enumerate_gr,
    gr_brute_set,
    gr_collision_census,
    gr_recurrence_sequence,
    grid2,
    grid_tridiagonal_isomorphism,
    iter_matrices,
    row_col_sums,
    rowcol_to_degree_tuple,
)


class TestTypes:
    def test_entry_set(self):
        X = EntrySet(-1, 2)
        assert list(X.values) == [-1, 0, 1] and len(X) == 3 and 0 in X and 2 not in X

    def test_entry_set_from_values(self):
        assert EntrySet.from_values([3, 1, 2]) == EntrySet(1, 2)
        with pytest.raises(InvalidParameterError):
            EntrySet.from_values([0, 2])

    def test_negative_span(self):
        with pytest.raises(InvalidParameterError):
            EntrySet(0, -1)

    def test_matrix_shapes(self):
        with pytest.raises(InvalidParameterError):
            TridiagonalMatrix((1,), (1, 1, 1), (1, 1))

    def test_dense_roundtrip(self):
        A = TridiagonalMatrix((1, 2), (3, 4, 5), (6, 7))
        assert A.dense() == [[3, 6, 0], [1, 4, 7], [0, 2, 5]]
        assert TridiagonalMatrix.from_dense(A.dense()) == A
        assert A.leading() == TridiagonalMatrix((1,), (3, 4), (6,))

    def test_off_band_rejected(self):
        with pytest.raises(InvalidParameterError):
            TridiagonalMatrix.from_dense([[1, 0, 1], [0, 0, 0], [0, 0, 0]])


class TestRowColSums:
    def test_n1_zero(self):
        assert row_col_sums(TridiagonalMatrix((), (0,), ())) == RowColPair((0,), (0,))

    def test_identity_and_antidiagonal(self):
        ident = TridiagonalMatrix.from_dense([[1, 0], [0, 1]])
        anti = TridiagonalMatrix.from_dense([[0, 1], [1, 0]])
        assert row_col_sums(ident) == row_col_sums(anti) == RowColPair((1, 1), (1, 1))

    @given(st.integers(1, 5), st.data())
    def test_matches_dense_sums(self, n, data):
        entries = data.draw(st.lists(st.integers(-3, 3), min_size=3 * n - 2, max_size=3 * n - 2))
        A = TridiagonalMatrix.from_entries(n, entries)
        d = np.array(A.dense())
        p = row_col_sums(A)
        assert p.r == tuple(d.sum(axis=1)) and p.c == tuple(d.sum(axis=0))
        assert sum(p.r) == sum(p.c)


class TestEnumeration:
    def test_odometer_order(self):
        mats = list(iter_matrices(2))
        assert len(mats) == 16
        assert mats[0].entries() == (0, 0, 0, 0)
        assert mats[1].entries() == (1, 0, 0, 0)
        assert mats[2].entries() == (0, 1, 0, 0)

    @pytest.mark.parametrize("n, expected", [(1, 2), (2, 15), (3, 112)])
    def test_small_binary(self, n, expected):
        assert enumerate_gr(n).count == expected

    @pytest.mark.parametrize("n, q, k", [(1, 0, 1), (2, 0, 1), (3, 0, 1), (2, 0, 2), (3, 1, 2), (2, -2, 3), (4, 0, 1)])
    def test_set_matches_oracle(self, n, q, k):
        res = enumerate_gr(n, EntrySet(q, k), collect=True)
        want = {RowColPair(r, c) for r, c in oracles.gr_set(n, q, k)}
        assert res.pairs() == want
        assert res.count == len(want)
        assert gr_brute_set(n, EntrySet(q, k)) == want

    @pytest.mark.parametrize("n, k", [(3, 2), (4, 2), (3, 3)])
    def test_shift_invariance(self, n, k):
        counts = {enumerate_gr(n, EntrySet(q, k)).count for q in range(-2, 3)}
        assert len(counts) == 1

    def test_span_zero(self):
        assert enumerate_gr(4, EntrySet(5, 0)).count == 1

    def test_budget(self):
        with pytest.raises(BudgetExceededError) as err:
            enumerate_gr(8, budget=1000)
        assert err.value.projected == 2**22

    def test_workers_do_not_change_result(self):
        one = enumerate_gr(5, EntrySet(0, 2), collect=True, workers=1)
        two = enumerate_gr(5, EntrySet(0, 2), collect=True, workers=2)
        assert one.count == two.count and np.array_equal(one.keys, two.keys)

    def test_pairs_require_collect(self):
        with pytest.raises(InvalidParameterError):
            enumerate_gr(2).pairs()


class TestRecurrence:
    def test_prefix(self):
        assert gr_recurrence_sequence(2) == [2, 15]
        assert gr_recurrence_sequence(4) == [2, 15, 112, 836]

    def test_frozen_and_enumeration(self):
        assert gr_recurrence_sequence(7) == oracles.GR_BINARY
        assert [enumerate_gr(n).count for n in range(1, 8)] == oracles.GR_BINARY

    def test_big_terms_exact(self):
        seq = gr_recurrence_sequence(60)
        assert seq[-1] == 8 * seq[-2] - 4 * seq[-3] and seq[-1] > 2**100

    def test_invalid(self):
        with pytest.raises(InvalidParameterError):
            gr_recurrence_sequence(0)


class TestCollisions:
    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_counts(self, n):
        c = gr_collision_census(n)
        assert c.extends_two == oracles.EXTENDS_TWO[n] == 4 * oracles.GR_BINARY[n - 3]
        assert c.extends_more == 0
        assert c.extends_one + c.extends_two == c.total == oracles.GR_BINARY[n - 1]
        # only pairs with last sums (1, 1) can have two predecessors
        assert c.multi_last_sums == frozenset({(1, 1)})
        assert len(c.collision_cases) == 4
        assert set(c.collision_cases.values()) == {oracles.GR_BINARY[n - 3]}

    def test_n3_against_definition(self):
        # extension relation computed straight from matrices
        preds: dict = {}
        for A in iter_matrices(3):
            preds.setdefault(row_col_sums(A), set()).add(row_col_sums(A.leading()))
        counts = [len(v) for v in preds.values()]
        c = gr_collision_census(3)
        assert counts.count(1) == c.extends_one and counts.count(2) == c.extends_two

    def test_too_small(self):
        with pytest.raises(InvalidParameterError):
            gr_collision_census(1)


class TestGraphs:
    def test_n1_single_edge(self):
        assert grid2(1).edges == ((0, 1),) == complete_tridiagonal_graph(1).edges

    def test_n2_four_cycle(self):
        for G in (grid2(2), complete_tridiagonal_graph(2)):
            assert G.m == 4 and all(G.degree(v) == 2 for v in range(4))

    @pytest.mark.parametrize("n", range(1, 10))
    def test_isomorphism(self, n):
        phi = grid_tridiagonal_isomorphism(n)
        assert sorted(phi) == list(range(2 * n))
        assert grid2(n).m == complete_tridiagonal_graph(n).m == 3 * n - 2
        assert is_bipartite(grid2(n))

    def test_biadjacency(self):
        ident = TridiagonalMatrix((0, 0), (1, 1, 1), (0, 0))
        G = biadjacency_graph(ident)
        assert G.edges == ((0, 3), (1, 4), (2, 5))
        full = TridiagonalMatrix((1, 1), (1, 1, 1), (1, 1))
        assert biadjacency_graph(full) == complete_tridiagonal_graph(3)
        zero = TridiagonalMatrix((0, 0), (0, 0, 0), (0, 0))
        assert biadjacency_graph(zero).m == 0
        assert rowcol_to_degree_tuple(row_col_sums(zero)) == (0,) * 6

    def test_biadjacency_rejects_non_binary(self):
        with pytest.raises(DomainError):
            biadjacency_graph(TridiagonalMatrix((), (2,), ()))

    @settings(max_examples=60)
    @given(st.integers(1, 6), st.data())
    def test_degree_tuple_of_biadjacency(self, n, data):
        bits = data.draw(st.lists(st.integers(0, 1), min_size=3 * n - 2, max_size=3 * n - 2))
        A = TridiagonalMatrix.from_entries(n, bits)
        G = biadjacency_graph(A)
        assert degree_tuple(G, G.full_mask()) == rowcol_to_degree_tuple(row_col_sums(A))

    @pytest.mark.parametrize("n", range(1, 6))
    def test_gr_image_is_degree_set(self, n):
        K = complete_tridiagonal_graph(n)
        image = {rowcol_to_degree_tuple(p) for p in enumerate_gr(n, collect=True).pairs()}
        assert image == degree_tuple_set(K)
        assert count_degree_tuples(K) == len(image)

    def test_band_positions(self):
        assert band_positions(2) == [(1, 0), (0, 0), (1, 1), (0, 1)]
        assert cycle(4).m == len(band_positions(2))
