"""Forest and degree-tuple counting, plus the k-colored ladder census."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from ._parallel import run_shards
from .config import check_budget
from .errors import InvalidParameterError, PreconditionError
from .graph import DegreeTuple, Graph, degree_tuple, is_acyclic
from .tridiagonal import grid2

_SHARD_BITS = 22
_ROW_CHUNK = 1 << 16


def _endpoints(G: Graph) -> tuple[np.ndarray, np.ndarray]:
    eu = np.array([u for u, _ in G.edges], dtype=np.int64)
    ev = np.array([v for _, v in G.edges], dtype=np.int64)
    return eu, ev


# ---------------------------------------------------------------------------
# forests
# ---------------------------------------------------------------------------


def _acyclic_shard(args: tuple[int, np.ndarray, np.ndarray, int, int]) -> int:
    n, eu, ev, lo, hi = args
    return int(_kernels.count_acyclic_range(n, eu, ev, lo, hi))


def count_forests_brute(G: Graph, *, budget: int | None = None, workers: int | None = None) -> int:
    """Number of acyclic edge subsets, the empty one included."""
    m = G.m
    check_budget(1 << m, budget, f"forest enumeration over 2^{m} masks")
    if m == 0:
        return 1
    eu, ev = _endpoints(G)
    step = 1 << min(m, _SHARD_BITS)
    shards = [(G.n, eu, ev, lo, min(lo + step, 1 << m)) for lo in range(0, 1 << m, step)]
    return sum(run_shards(_acyclic_shard, shards, workers))


def forest_masks(G: Graph) -> Iterable[int]:
    """Acyclic masks in increasing order (small graphs)."""
    return (mask for mask in range(1 << G.m) if is_acyclic(G, mask))


class _MultiGraph:
    """Undirected multigraph without loops: ``adj[u][v]`` is the edge multiplicity."""

    __slots__ = ("adj",)

    def __init__(self, adj: dict[int, dict[int, int]]):
        self.adj = adj

    @classmethod
    def from_graph(cls, G: Graph) -> "_MultiGraph":
        adj: dict[int, dict[int, int]] = {}
        for u, v in G.edges:
            adj.setdefault(u, {})[v] = 1
            adj.setdefault(v, {})[u] = 1
        return cls(adj)

    def copy(self) -> "_MultiGraph":
        return _MultiGraph({u: dict(nb) for u, nb in self.adj.items()})

    def remove_vertex(self, v: int) -> None:
        for w in self.adj.pop(v):
            del self.adj[w][v]

    def delete_class(self, u: int, v: int) -> None:
        del self.adj[u][v]
        del self.adj[v][u]

    def contract(self, u: int, v: int) -> None:
        # merge v into u; the u-v class becomes loops, which are dropped
        self.delete_class(u, v)
        for w, p in self.adj.pop(v).items():
            del self.adj[w][v]
            self.adj[u][w] = self.adj[u].get(w, 0) + p
            self.adj[w][u] = self.adj[u][w]

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in self.adj:
            if s in seen:
                continue
            seen.add(s)
            stack, comp = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comps.append(comp)
        return comps

    def induced(self, verts: list[int]) -> "_MultiGraph":
        return _MultiGraph({u: dict(self.adj[u]) for u in verts})

    def key(self) -> tuple[tuple[int, int, int], ...]:
        # BFS relabeling from a lowest-degree vertex; the key is the whole relabeled edge list
        start = min(self.adj, key=lambda x: (sum(self.adj[x].values()), len(self.adj[x]), x))
        label = {start: 0}
        order = [start]
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            for y in sorted(self.adj[x], key=lambda y: (self.adj[x][y], len(self.adj[y]), y)):
                if y not in label:
                    label[y] = len(order)
                    order.append(y)
        edges = []
        for x, nb in self.adj.items():
            lx = label[x]
            for y, p in nb.items():
                ly = label[y]
                if lx < ly:
                    edges.append((lx, ly, p))
        edges.sort()
        return tuple(edges)


@dataclass
class ForestCounter:
    """Deletion-contraction forest counter with a bounded memo."""

    memo_capacity: int = 1 << 18
    memo: dict[tuple, int] = field(default_factory=dict)
    hits: int = 0

    def count(self, G: Graph) -> int:
        return self._count(_MultiGraph.from_graph(G))

    def _count(self, g: _MultiGraph) -> int:
        factor = 1
        # strip isolated vertices and pendant vertices (factor 1 + multiplicity)
        queue = list(g.adj)
        while queue:
            v = queue.pop()
            if v not in g.adj:
                continue
            nb = g.adj[v]
            if not nb:
                del g.adj[v]
            elif len(nb) == 1:
                (w, p), = nb.items()
                factor *= 1 + p
                g.remove_vertex(v)
                queue.append(w)
        if not g.adj:
            return factor
        comps = g.components()
        if len(comps) > 1:
            for comp in comps:
                factor *= self._count(g.induced(comp))
            return factor
        key = g.key()
        cached = self.memo.get(key)
        if cached is not None:
            self.hits += 1
            return factor * cached
        u = min(g.adj, key=lambda x: (len(g.adj[x]), x))
        v = max(g.adj[u], key=lambda y: (g.adj[u][y], -y))
        p = g.adj[u][v]
        deleted = g.copy()
        deleted.delete_class(u, v)
        g.contract(u, v)
        value = self._count(deleted) + p * self._count(g)
        if len(self.memo) < self.memo_capacity:
            self.memo[key] = value
        return factor * value


def count_forests_dc(G: Graph, *, memo_capacity: int = 1 << 18) -> int:
    """Forest count by deletion-contraction on parallel-edge classes.

    A class of ``p`` parallel u-v edges contributes ``F(G - uv) + p * F(G / uv)``.
    Once the memo is full, new subproblems are solved without being stored.
    """
    return ForestCounter(memo_capacity).count(G)


# ---------------------------------------------------------------------------
# degree tuples
# ---------------------------------------------------------------------------


def degree_key_weights(G: Graph) -> tuple[np.ndarray, int]:
    """Mixed-radix weights packing a subgraph degree tuple into one integer.

    Vertex ``v`` has place value ``prod_{u<v} (deg_G(u) + 1)``; an edge's weight
    is the sum of its endpoints' place values. Returns the weights and the key
    space size ``prod (deg_G(v) + 1)``.
    """
    place = []
    acc = 1
    for v in range(G.n):
        place.append(acc)
        acc *= G.degree(v) + 1
    w = [place[u] + place[v] for u, v in G.edges]
    if acc >= 2**62:
        return np.zeros(0, np.int64), acc
    return np.array(w, dtype=np.int64), acc


def _gray_shard(args: tuple[np.ndarray, int, int]) -> np.ndarray:
    weights, start, nlow = args
    return _kernels.gray_degree_keys(weights, np.int64(start), nlow)


def _packed_keys(G: Graph, weights: np.ndarray, workers: int | None) -> np.ndarray:
    m = G.m
    nlow = min(m, _SHARD_BITS)
    high = weights[nlow:]
    shards = []
    for hmask in range(1 << (m - nlow)):
        start = sum(int(high[j]) for j in range(m - nlow) if (hmask >> j) & 1)
        shards.append((weights, start, nlow))
    parts = run_shards(_gray_shard, shards, workers)
    return np.unique(np.concatenate(parts)) if len(parts) > 1 else np.sort(parts[0])


def packed_degree_keys(
    G: Graph, *, budget: int | None = None, workers: int | None = None
) -> tuple[np.ndarray, list[int]]:
    """Sorted distinct packed degree keys and the per-vertex place values."""
    check_budget(1 << G.m, budget, f"degree-tuple enumeration over 2^{G.m} masks")
    weights, space = degree_key_weights(G)
    if weights.size != G.m:
        raise InvalidParameterError("degree keys do not fit 62 bits")
    places, acc = [], 1
    for v in range(G.n):
        places.append(acc)
        acc *= G.degree(v) + 1
    if G.m == 0:
        return np.zeros(1, np.int64), places
    return _packed_keys(G, weights, workers), places


def _degree_rows(G: Graph, lo: int, hi: int) -> np.ndarray:
    inc = np.zeros((G.m, G.n), dtype=np.int16)
    for e, (u, v) in enumerate(G.edges):
        inc[e, u] = inc[e, v] = 1
    masks = np.arange(lo, hi, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(G.m, dtype=np.int64)) & 1).astype(np.int16)
    return bits @ inc


def _row_unique(G: Graph) -> np.ndarray:
    # each degree row viewed as one opaque byte string, deduplicated in 1-D
    total = 1 << G.m
    row = np.dtype((np.void, 2 * G.n))
    acc = np.zeros(0, dtype=row)
    for lo in range(0, total, _ROW_CHUNK):
        rows = np.ascontiguousarray(_degree_rows(G, lo, min(lo + _ROW_CHUNK, total)))
        acc = np.unique(np.concatenate([acc, np.unique(rows.view(row).ravel())]))
    return acc


def count_degree_tuples(
    G: Graph,
    *,
    budget: int | None = None,
    workers: int | None = None,
    method: str = "auto",
) -> int:
    """Number of distinct ordered degree tuples over all spanning subgraphs.

    ``method`` is ``packed`` (Gray-code walk over integer-packed tuples),
    ``rows`` (numpy row deduplication), or ``auto`` (packed when the key fits
    in 62 bits).
    """
    m = G.m
    check_budget(1 << m, budget, f"degree-tuple enumeration over 2^{m} masks")
    if m == 0:
        return 1
    weights, space = degree_key_weights(G)
    if method == "auto":
        method = "packed" if weights.size == m else "rows"
    if method == "packed":
        if weights.size != m:
            raise InvalidParameterError("degree keys do not fit 62 bits; use method='rows'")
        return int(_packed_keys(G, weights, workers).size)
    if method == "rows":
        return int(_row_unique(G).size)
    raise InvalidParameterError(f"unknown method {method!r}")


def degree_tuple_set(G: Graph, *, budget: int | None = None) -> set[DegreeTuple]:
    """Plain-Python reference: the set of degree tuples (small graphs only)."""
    check_budget(1 << G.m, budget, "degree-tuple set")
    return {degree_tuple(G, mask) for mask in range(1 << G.m)}


# ---------------------------------------------------------------------------
# host census (all subgraphs of a host at once)
# ---------------------------------------------------------------------------


@dataclass
class HostCensus:
    """F, D and bipartiteness of every spanning subgraph of ``host``, indexed by mask."""

    host: Graph
    forests: np.ndarray
    degrees: np.ndarray
    bipartite: np.ndarray


def host_census(host: Graph, *, budget: int | None = None) -> HostCensus:
    m = host.m
    check_budget(3**m, budget, f"host census over 3^{m} (subgraph, submask) pairs")
    weights, space = degree_key_weights(host)
    if weights.size != m or space > 1 << 27:
        raise InvalidParameterError("host too large for a dense degree-key table")
    eu, ev = _endpoints(host)
    start = np.zeros(host.n + 1, np.int64)
    nbr, eid = [], []
    for v in range(host.n):
        for w, e in host.incidence[v]:
            nbr.append(w)
            eid.append(e)
        start[v + 1] = len(nbr)
    F, D, bip = _kernels.host_census(
        host.n, eu, ev, weights, space, start,
        np.array(nbr, dtype=np.int64), np.array(eid, dtype=np.int64),
    )
    return HostCensus(host, F, D, bip.astype(bool))


# ---------------------------------------------------------------------------
# k-colored ladder forests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColoredSubgraph:
    """A coloring of the ladder's edges: 0 is absent, ``1..k`` are colors."""

    parent: Graph
    colors: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidParameterError("number of colors must be >= 1")
        if len(self.colors) != self.parent.m:
            raise InvalidParameterError(
                f"coloring has {len(self.colors)} entries, parent has {self.parent.m} edges"
            )
        if any(not 0 <= c <= self.k for c in self.colors):
            raise InvalidParameterError(f"colors must lie in 0..{self.k}")
        object.__setattr__(self, "colors", tuple(self.colors))
        _ladder_order(self.parent)

    @property
    def support(self) -> int:
        return sum(1 << e for e, c in enumerate(self.colors) if c)


def _ladder_order(parent: Graph) -> int:
    n = parent.n // 2
    if parent.n % 2 or parent != grid2(n):
        raise InvalidParameterError("colored subgraphs must live on a ladder built by grid2")
    return n


def semicyclic_witness_masks(n: int) -> list[int]:
    """For each column ``i`` (checked from ``n-1`` down), the edges that must all be present."""
    G = grid2(n)
    out = []
    for i in range(n - 1, -1, -1):
        need = [G.edge_index(i, n + i)]
        for j in range(i, n - 1):
            need.append(G.edge_index(j, j + 1))
            need.append(G.edge_index(n + j, n + j + 1))
        out.append(sum(1 << e for e in need))
    return out


def is_semicyclic(F: ColoredSubgraph) -> bool:
    n = _ladder_order(F.parent)
    support = F.support
    if not is_acyclic(F.parent, support):
        raise PreconditionError("semicyclic classification needs an acyclic colored subgraph")
    return any(support & w == w for w in semicyclic_witness_masks(n))


@dataclass(frozen=True)
class ColoredCensus:
    a: int
    a_semi: int
    a_not: int

    def __post_init__(self) -> None:
        if self.a != self.a_semi + self.a_not:
            raise InvalidParameterError("census parts do not add up")


def _support_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    G = grid2(n)
    eu, ev = _endpoints(G)
    acyclic = _kernels.acyclic_flags(G.n, eu, ev)
    masks = np.arange(1 << G.m, dtype=np.int64)
    semi = np.zeros(1 << G.m, dtype=np.uint8)
    for w in semicyclic_witness_masks(n):
        semi |= ((masks & w) == w).astype(np.uint8)
    return acyclic, semi & acyclic


def _colored_shard(args: tuple[np.ndarray, np.ndarray, int, int, int]) -> tuple[int, int]:
    acyclic, semi, m_low, k, high_support = args
    a, s = _kernels.colored_tally(acyclic, semi, m_low, k, np.int64(high_support))
    return int(a), int(s)


def colored_forest_census(
    n: int, k: int, *, budget: int | None = None, workers: int | None = None
) -> ColoredCensus:
    """Census of acyclic k-colored subgraphs of the 2 x n ladder by full enumeration.

    Every coloring is visited once; the top few edges are fixed per shard and
    the remaining ones are run through the compiled odometer.
    """
    if n < 1 or k < 1:
        raise InvalidParameterError("colored census needs n >= 1 and k >= 1")
    m = 3 * n - 2
    check_budget((k + 1) ** m, budget, f"colored census n={n}, k={k}")
    acyclic, semi = _support_tables(n)
    high = 0
    while high < m and (k + 1) ** (m - high) > 1 << 24:
        high += 1
    m_low = m - high
    shards = []
    for digits in itertools.product(range(k + 1), repeat=high):
        hs = sum(1 << (m_low + j) for j, d in enumerate(digits) if d)
        shards.append((acyclic, semi, m_low, k, hs))
    a = s = 0
    for x, y in run_shards(_colored_shard, shards, workers):
        a += x
        s += y
    return ColoredCensus(a, s, a - s)


def colored_census_by_support(n: int, k: int) -> ColoredCensus:
    """Independent route: weight each acyclic support ``S`` by ``k^|S|``."""
    acyclic, semi = _support_tables(n)
    a = s = 0
    for mask in np.flatnonzero(acyclic).tolist():
        w = k ** bin(mask).count("1")
        a += w
        if semi[mask]:
            s += w
    return ColoredCensus(a, s, a - s)


def colored_recurrence(n: int, k: int) -> int:
    """a_1 = k+1, a_2 = 4k^3+6k^2+4k+1, a_n = (4k^2+3k+1) a_{n-1} - (k^4+2k^3+k^2) a_{n-2}."""
    if n < 1 or k < 1:
        raise InvalidParameterError("recurrence needs n >= 1 and k >= 1")
    a1, a2 = k + 1, 4 * k**3 + 6 * k**2 + 4 * k + 1
    if n == 1:
        return a1
    c1, c2 = 4 * k**2 + 3 * k + 1, k**4 + 2 * k**3 + k**2
    prev, cur = a1, a2
    for _ in range(n - 2):
        prev, cur = cur, c1 * cur - c2 * prev
    return cur


def colored_recurrence_components(n: int, k: int) -> list[ColoredCensus]:
    """Streams ``(a_j, a_j^semi, a_j^not)`` for ``j = 1..n`` from the split recurrences.

    a^not_j = (2k+1) a_{j-1} + k^2 a^not_{j-1},  a^semi_j = k a^not_j + k^2 a^semi_{j-1},
    seeded with a^semi_1 = k and a^not_1 = 1.
    """
    if n < 1 or k < 1:
        raise InvalidParameterError("recurrence needs n >= 1 and k >= 1")
    out = [ColoredCensus(k + 1, k, 1)]
    for _ in range(n - 1):
        prev = out[-1]
        a_not = (2 * k + 1) * prev.a + k * k * prev.a_not
        a_semi = k * a_not + k * k * prev.a_semi
        out.append(ColoredCensus(a_not + a_semi, a_semi, a_not))
    return out
