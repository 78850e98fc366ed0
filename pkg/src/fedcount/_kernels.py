"""Compiled inner loops for the exhaustive enumerations.

Everything here works on plain numpy arrays: ``eu``/``ev`` are the edge
endpoint arrays of a graph in canonical edge order, masks are little-endian
over that order.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_EMPTY = np.int64(-1)


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def _mask_is_acyclic(mask, n, eu, ev, parent):
    for i in range(n):
        parent[i] = i
    m = eu.shape[0]
    for e in range(m):
        if (mask >> e) & 1:
            a = _find(parent, eu[e])
            b = _find(parent, ev[e])
            if a == b:
                return False
            parent[a] = b
    return True


@njit(cache=True)
def count_acyclic_range(n, eu, ev, lo, hi):
    """Number of acyclic masks in ``[lo, hi)``."""
    parent = np.empty(max(n, 1), np.int64)
    total = 0
    for mask in range(lo, hi):
        if _mask_is_acyclic(mask, n, eu, ev, parent):
            total += 1
    return total


@njit(cache=True)
def acyclic_flags(n, eu, ev):
    m = eu.shape[0]
    out = np.zeros(1 << m, np.uint8)
    parent = np.empty(max(n, 1), np.int64)
    for mask in range(1 << m):
        if _mask_is_acyclic(mask, n, eu, ev, parent):
            out[mask] = 1
    return out


@njit(cache=True)
def _hash_insert(table, key, shift):
    # multiplicative hashing into a power-of-two open-addressing table
    size_mask = table.shape[0] - 1
    h = (np.uint64(key) * np.uint64(0x9E3779B97F4A7C15)) >> np.uint64(shift)
    slot = np.int64(h) & size_mask
    while True:
        cur = table[slot]
        if cur == key:
            return 0
        if cur == -1:
            table[slot] = key
            return 1
        slot = (slot + 1) & size_mask


@njit(cache=True)
def gray_degree_keys(weights, start_key, nlow):
    """Distinct packed degree keys over all subsets of the first ``nlow`` edges.

    Subsets are visited in reflected Gray-code order starting from the empty
    subset, whose key is ``start_key`` (the contribution of fixed high edges).
    """
    count = np.int64(1) << nlow
    bits = 1
    while (np.int64(1) << bits) < 2 * count:
        bits += 1
    table = np.full(np.int64(1) << bits, -1, np.int64)
    shift = 64 - bits
    distinct = _hash_insert(table, start_key, shift)
    key = start_key
    state = np.zeros(max(nlow, 1), np.uint8)
    for i in range(1, count):
        j = 0
        while not (i >> j) & 1:
            j += 1
        if state[j]:
            key -= weights[j]
            state[j] = 0
        else:
            key += weights[j]
            state[j] = 1
        distinct += _hash_insert(table, key, shift)
    out = np.empty(distinct, np.int64)
    k = 0
    for s in range(table.shape[0]):
        if table[s] != -1:
            out[k] = table[s]
            k += 1
    return out


@njit(cache=True)
def _mask_is_bipartite(mask, n, eu, ev, color, queue, adj_start, adj_nbr, adj_edge):
    for i in range(n):
        color[i] = -1
    for s in range(n):
        if color[s] != -1:
            continue
        color[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            x = queue[head]
            head += 1
            for p in range(adj_start[x], adj_start[x + 1]):
                if not (mask >> adj_edge[p]) & 1:
                    continue
                y = adj_nbr[p]
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    queue[tail] = y
                    tail += 1
                elif color[y] == color[x]:
                    return False
    return True


@njit(cache=True)
def host_census(n, eu, ev, weights, keyspace, adj_start, adj_nbr, adj_edge):
    """F, D and bipartiteness of every spanning subgraph of a host graph.

    ``F[G]`` counts acyclic masks contained in ``G`` (a subset-sum transform of
    the forest indicator). ``D[G]`` counts distinct degree keys over the
    submasks of ``G``, enumerated by Gray code over the edges of ``G`` and
    deduplicated with a generation-stamped array over the key space.
    """
    m = eu.shape[0]
    full = np.int64(1) << m
    parent = np.empty(max(n, 1), np.int64)
    F = np.zeros(full, np.int64)
    for mask in range(full):
        if _mask_is_acyclic(mask, n, eu, ev, parent):
            F[mask] = 1
    for e in range(m):
        bit = np.int64(1) << e
        for mask in range(full):
            if mask & bit:
                F[mask] += F[mask ^ bit]

    D = np.zeros(full, np.int64)
    stamp = np.full(keyspace, -1, np.int64)
    idx = np.empty(max(m, 1), np.int64)
    state = np.zeros(max(m, 1), np.uint8)
    for g in range(full):
        k = 0
        for e in range(m):
            if (g >> e) & 1:
                idx[k] = e
                k += 1
        for j in range(k):
            state[j] = 0
        key = np.int64(0)
        stamp[0] = g
        distinct = 1
        for i in range(1, np.int64(1) << k):
            j = 0
            while not (i >> j) & 1:
                j += 1
            if state[j]:
                key -= weights[idx[j]]
                state[j] = 0
            else:
                key += weights[idx[j]]
                state[j] = 1
            if stamp[key] != g:
                stamp[key] = g
                distinct += 1
        D[g] = distinct

    bip = np.zeros(full, np.uint8)
    color = np.empty(max(n, 1), np.int64)
    queue = np.empty(max(n, 1), np.int64)
    for g in range(full):
        if _mask_is_bipartite(g, n, eu, ev, color, queue, adj_start, adj_nbr, adj_edge):
            bip[g] = 1
    return F, D, bip


@njit(cache=True)
def colored_tally(acyclic, semicyclic, m_low, k, high_support):
    """Tally colorings of the low ``m_low`` edges (odometer, digit 0 fastest).

    Each edge carries a digit in ``0..k`` (0 = absent). The support of the
    full coloring is the low support OR ``high_support``. Returns the number of
    acyclic colorings and how many of those are semicyclic.
    """
    digits = np.zeros(max(m_low, 1), np.int64)
    support = high_support
    a = np.int64(0)
    semi = np.int64(0)
    total = np.int64(1)
    for _ in range(m_low):
        total *= k + 1
    for _ in range(total):
        if acyclic[support]:
            a += 1
            semi += semicyclic[support]
        e = 0
        while e < m_low:
            d = digits[e] + 1
            if d <= k:
                digits[e] = d
                if d == 1:
                    support |= np.int64(1) << e
                break
            digits[e] = 0
            support &= ~(np.int64(1) << e)
            e += 1
    return a, semi
