"""Labeled simple graphs, spanning subgraphs as edge masks, and structural predicates.

A :class:`Graph` stores its edges as a lexicographically sorted tuple of
pairs ``(u, v)`` with ``u < v``. Edge ``i`` of that tuple is bit ``i`` of a
:class:`SubgraphMask` (little-endian), so a mask means the same subgraph
wherever the graph is serialized.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import (
    DegenerateInputError,
    GraphParseError,
    InvalidGraphError,
    InvalidMaskError,
    InvalidParameterError,
)

Edge = tuple[int, int]
DegreeTuple = tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    """Labeled simple undirected graph on vertices ``0..n-1``.

    Edges are normalized on construction (endpoints ordered, list sorted);
    loops, duplicates and out-of-range endpoints raise :class:`InvalidGraphError`.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidGraphError(f"vertex count must be non-negative, got {self.n}")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidGraphError(f"loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= self.n:
                raise InvalidGraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.append((u, v))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise InvalidGraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(neighbor, edge index)`` pairs in edge order."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append((v, i))
            inc[v].append((u, i))
        return tuple(tuple(x) for x in inc)

    @cached_property
    def _index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def edge_index(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self._index[key]
        except KeyError:
            raise InvalidGraphError(f"no edge {key}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._index

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def degrees(self) -> DegreeTuple:
        return tuple(len(x) for x in self.incidence)

    def spanning_subgraph(self, mask: "SubgraphMask | int") -> "Graph":
        bits = _bits_for(self, mask)
        return Graph(self.n, tuple(e for i, e in enumerate(self.edges) if bits >> i & 1))

    def edge_subgraph(self, edge_ids: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Graph on the endpoints of ``edge_ids``, relabeled ``0..k-1`` in label order.

        Returns the graph and the original label of each new vertex.
        """
        ids = sorted(set(edge_ids))
        verts = sorted({x for i in ids for x in self.edges[i]})
        new = {v: j for j, v in enumerate(verts)}
        sub = Graph(len(verts), tuple((new[self.edges[i][0]], new[self.edges[i][1]]) for i in ids))
        return sub, tuple(verts)

    def full_mask(self) -> "SubgraphMask":
        return SubgraphMask(self.m, (1 << self.m) - 1)

    def empty_mask(self) -> "SubgraphMask":
        return SubgraphMask(self.m, 0)

    def mask(self, edge_ids: Iterable[int] = ()) -> "SubgraphMask":
        return SubgraphMask.from_edges(self.m, edge_ids)

    def mask_of_pairs(self, pairs: Iterable[Edge]) -> "SubgraphMask":
        return SubgraphMask.from_edges(self.m, (self.edge_index(u, v) for u, v in pairs))


@dataclass(frozen=True)
class SubgraphMask:
    """Edge subset of a parent graph with ``parent_edge_count`` edges; bit i = edge i."""

    parent_edge_count: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.parent_edge_count < 0:
            raise InvalidMaskError("parent edge count must be non-negative")
        if self.bits < 0 or self.bits >> self.parent_edge_count:
            raise InvalidMaskError(
                f"mask {self.bits:#x} has bits outside {self.parent_edge_count} edges"
            )

    @classmethod
    def from_edges(cls, parent_edge_count: int, edge_ids: Iterable[int]) -> "SubgraphMask":
        bits = 0
        for i in edge_ids:
            if not 0 <= i < parent_edge_count:
                raise InvalidMaskError(f"edge index {i} out of range")
            bits |= 1 << i
        return cls(parent_edge_count, bits)

    def edge_ids(self) -> Iterator[int]:
        b, i = self.bits, 0
        while b:
            if b & 1:
                yield i
            b >>= 1
            i += 1

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __xor__(self, other: "SubgraphMask") -> "SubgraphMask":
        return symmetric_difference(self, other)


def _bits_for(G: Graph, H: SubgraphMask | int) -> int:
    if isinstance(H, int):
        H = SubgraphMask(G.m, H)
    if H.parent_edge_count != G.m:
        raise InvalidMaskError(
            f"mask is for a graph with {H.parent_edge_count} edges, graph has {G.m}"
        )
    return H.bits


# ---------------------------------------------------------------------------
# degree tuples and acyclicity
# ---------------------------------------------------------------------------


def degree_tuple(G: Graph, H: SubgraphMask | int) -> DegreeTuple:
    """Ordered (by vertex label, never sorted) degrees of the subgraph ``H``."""
    bits = _bits_for(G, H)
    deg = [0] * G.n
    for i, (u, v) in enumerate(G.edges):
        if bits >> i & 1:
            deg[u] += 1
            deg[v] += 1
    return tuple(deg)


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def is_acyclic(G: Graph, H: SubgraphMask | int) -> bool:
    """True iff the spanning subgraph selected by ``H`` is a forest."""
    bits = _bits_for(G, H)
    dsu = _DSU(G.n)
    for i, (u, v) in enumerate(G.edges):
        if bits >> i & 1 and not dsu.union(u, v):
            return False
    return True


def connected_components(G: Graph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by smallest vertex."""
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            x = queue.popleft()
            for y, _ in G.incidence[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(G: Graph) -> bool:
    return G.n <= 1 or len(connected_components(G)) == 1


# ---------------------------------------------------------------------------
# bipartiteness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BipartiteCheck:
    """Outcome of :func:`bipartition`: a 2-coloring or an odd cycle, never both."""

    bipartite: bool
    coloring: tuple[int, ...] | None = None
    odd_cycle: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.bipartite


def bipartition(G: Graph) -> BipartiteCheck:
    color = [-1] * G.n
    parent = [-1] * G.n
    depth = [0] * G.n
    for s in range(G.n):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, _ in G.incidence[x]:
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    queue.append(y)
                elif color[y] == color[x]:
                    return BipartiteCheck(False, odd_cycle=_odd_cycle(x, y, parent, depth))
    return BipartiteCheck(True, coloring=tuple(color))


def _odd_cycle(x: int, y: int, parent: list[int], depth: list[int]) -> tuple[int, ...]:
    # x, y adjacent with equal BFS depth parity: tree paths to their LCA close an odd cycle
    up_x, up_y = [x], [y]
    while depth[up_x[-1]] > depth[up_y[-1]]:
        up_x.append(parent[up_x[-1]])
    while depth[up_y[-1]] > depth[up_x[-1]]:
        up_y.append(parent[up_y[-1]])
    while up_x[-1] != up_y[-1]:
        up_x.append(parent[up_x[-1]])
        up_y.append(parent[up_y[-1]])
    return tuple(up_x + up_y[-2::-1])


def is_bipartite(G: Graph) -> bool:
    return bipartition(G).bipartite


# ---------------------------------------------------------------------------
# symmetric difference and alternating circuits
# ---------------------------------------------------------------------------


def symmetric_difference(H1: SubgraphMask, H2: SubgraphMask) -> SubgraphMask:
    if H1.parent_edge_count != H2.parent_edge_count:
        raise InvalidMaskError("masks belong to different parent graphs")
    return SubgraphMask(H1.parent_edge_count, H1.bits ^ H2.bits)


# A step traverses edge ``edge`` from ``tail`` to ``head``; color 0 = only in H1, 1 = only in H2.
@dataclass(frozen=True)
class Step:
    edge: int
    tail: int
    head: int
    color: int


def alternating_euler_circuits(
    G: Graph, H1: SubgraphMask, H2: SubgraphMask
) -> list[tuple[Step, ...]] | None:
    """One color-alternating closed trail per component of ``H1 △ H2``, or None.

    Returns None when some vertex meets a different number of H1-only and
    H2-only edges, in which case no such circuits exist.
    """
    b1, b2 = _bits_for(G, H1), _bits_for(G, H2)
    if b1 == b2:
        raise DegenerateInputError("H1 and H2 are the same subgraph")
    colored = [(i, 0) for i in range(G.m) if b1 >> i & 1 and not b2 >> i & 1]
    colored += [(i, 1) for i in range(G.m) if b2 >> i & 1 and not b1 >> i & 1]
    balance = [0] * G.n
    for i, c in colored:
        u, v = G.edges[i]
        d = 1 if c == 0 else -1
        balance[u] += d
        balance[v] += d
    if any(balance):
        return None

    free: list[list[list[int]]] = [[[], []] for _ in range(G.n)]
    color_of = {}
    for i, c in sorted(colored):
        u, v = G.edges[i]
        free[u][c].append(i)
        free[v][c].append(i)
        color_of[i] = c
    used: set[int] = set()

    def take(v: int, c: int) -> int:
        bucket = free[v][c]
        while bucket[-1] in used:
            bucket.pop()
        return bucket.pop()

    trails = []
    for i, c in sorted(colored):
        if c != 0 or i in used:
            continue
        start, cur = G.edges[i]
        used.add(i)
        trail = [Step(i, start, cur, 0)]
        need = 1
        # balance guarantees an unused edge of the needed color, except when
        # the walk is back at ``start`` having arrived on an H2-only edge
        while not (cur == start and need == 0):
            j = take(cur, need)
            used.add(j)
            a, b = G.edges[j]
            nxt = b if a == cur else a
            trail.append(Step(j, cur, nxt, need))
            cur, need = nxt, 1 - need
        trails.append(trail)

    circuits = _splice(trails)
    _certify(G, circuits, color_of)
    return [tuple(c) for c in circuits]


def _splice(trails: list[list[Step]]) -> list[list[Step]]:
    pending = list(trails)
    done = []
    while pending:
        main = pending.pop(0)
        merged = True
        while merged:
            merged = False
            verts = {s.tail: k for k, s in enumerate(main)}
            for t_idx, other in enumerate(pending):
                hit = next((k for k, s in enumerate(other) if s.tail in verts), None)
                if hit is None:
                    continue
                w = other[hit].tail
                # main arrives at w on step i and leaves on step i+1
                i = (verts[w] - 1) % len(main)
                leave = main[(i + 1) % len(main)].color
                rot = other[hit:] + other[:hit]
                if rot[0].color != leave:
                    rot = [Step(s.edge, s.head, s.tail, s.color) for s in reversed(rot)]
                main = main[: i + 1] + rot + main[i + 1 :]
                pending.pop(t_idx)
                merged = True
                break
        done.append(main)
    return done


def _certify(G: Graph, circuits: list[list[Step]], color_of: dict[int, int]) -> None:
    seen: set[int] = set()
    owner: dict[int, int] = {}
    for ci, circ in enumerate(circuits):
        for k, s in enumerate(circ):
            nxt = circ[(k + 1) % len(circ)]
            ok = (
                set(G.edges[s.edge]) == {s.tail, s.head}
                and s.head == nxt.tail
                and s.color == color_of[s.edge]
                and s.color != nxt.color
                and s.edge not in seen
            )
            if not ok:
                raise RuntimeError(f"alternating circuit construction failed at step {k}")
            seen.add(s.edge)
            for x in (s.tail, s.head):
                if owner.setdefault(x, ci) != ci:
                    raise RuntimeError("two circuits share a vertex")
    if seen != set(color_of):
        raise RuntimeError("alternating circuits do not cover the symmetric difference")


def verify_alternating_euler(G: Graph, H1: SubgraphMask, H2: SubgraphMask) -> bool:
    """True iff every component of ``H1 △ H2`` has a color-alternating Euler circuit.

    Equivalent to ``degree_tuple(G, H1) == degree_tuple(G, H2)``; a positive
    answer is backed by an explicitly constructed and checked circuit.
    """
    return alternating_euler_circuits(G, H1, H2) is not None


# ---------------------------------------------------------------------------
# blocks, cut vertices, bridges
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """A biconnected component: its vertices and the indices of its edges."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def is_bridge(self) -> bool:
        return len(self.edges) == 1

    @property
    def is_cycle(self) -> bool:
        return len(self.edges) >= 3 and len(self.edges) == len(self.vertices)


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[Block, ...]
    cut_vertices: tuple[int, ...] = field(default=())


def block_decomposition(G: Graph) -> BlockDecomposition:
    """Biconnected components by an iterative Tarjan DFS over an edge stack."""
    n = G.n
    disc = [-1] * n
    low = [0] * n
    timer = 0
    blocks: list[Block] = []
    cuts: set[int] = set()
    for root in range(n):
        if disc[root] != -1 or not G.incidence[root]:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(G.incidence[root]))]
        estack: list[int] = []
        root_children = 0
        while stack:
            v, pe, it = stack[-1]
            descended = False
            for w, e in it:
                if e == pe:
                    continue
                if disc[w] == -1:
                    estack.append(e)
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, e, iter(G.incidence[w])))
                    descended = True
                    break
                if disc[w] < disc[v]:
                    estack.append(e)
                    low[v] = min(low[v], disc[w])
            if descended:
                continue
            stack.pop()
            if not stack:
                break
            u = stack[-1][0]
            low[u] = min(low[u], low[v])
            if low[v] >= disc[u]:
                comp = []
                while True:
                    e2 = estack.pop()
                    comp.append(e2)
                    if e2 == pe:
                        break
                verts = sorted({x for i in comp for x in G.edges[i]})
                blocks.append(Block(tuple(verts), tuple(sorted(comp))))
                if stack[-1][1] == -1:
                    root_children += 1
                else:
                    cuts.add(u)
        if root_children > 1:
            cuts.add(root)
    blocks.sort(key=lambda b: b.edges)
    return BlockDecomposition(tuple(blocks), tuple(sorted(cuts)))


def articulation_points(G: Graph) -> list[int]:
    return list(block_decomposition(G).cut_vertices)


def bridges(G: Graph) -> list[Edge]:
    return [G.edges[b.edges[0]] for b in block_decomposition(G).blocks if b.is_bridge]


def is_cactus(G: Graph) -> bool:
    """Connected, and every block is a single edge or a cycle."""
    if not is_connected(G):
        return False
    return all(b.is_bridge or b.is_cycle for b in block_decomposition(G).blocks)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def cycle(n: int) -> Graph:
    """Cycle ``0-1-...-(n-1)-0``."""
    if n < 3:
        raise InvalidParameterError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)) + ((0, n - 1),))


def path(n: int) -> Graph:
    """Path ``0-1-...-(n-1)`` on ``n`` vertices."""
    if n < 1:
        raise InvalidParameterError(f"a path needs at least 1 vertex, got {n}")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_bipartite(m: int, n: int) -> Graph:
    """K_{m,n}: parts ``0..m-1`` and ``m..m+n-1``."""
    if m < 0 or n < 0:
        raise InvalidParameterError("part sizes must be non-negative")
    return Graph(m + n, tuple((i, m + j) for i in range(m) for j in range(n)))


def complete_graph(n: int) -> Graph:
    if n < 0:
        raise InvalidParameterError("vertex count must be non-negative")
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    edges, off = [], 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges]
        off += g.n
    return Graph(off, tuple(edges))


# ---------------------------------------------------------------------------
# text format: "n m" then m lines "u v", 0-based, u < v, sorted
# ---------------------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    lines = [(k + 1, ln.strip()) for k, ln in enumerate(text.splitlines())]
    lines = [(k, ln) for k, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphParseError(1, "empty input, expected header 'n m'")
    k0, head = lines[0]
    try:
        n, m = (int(x) for x in head.split())
    except ValueError:
        raise GraphParseError(k0, f"expected header 'n m', got {head!r}") from None
    if n < 0 or m < 0:
        raise GraphParseError(k0, "n and m must be non-negative")
    body = lines[1:]
    if len(body) != m:
        raise GraphParseError(k0, f"header declares {m} edges, found {len(body)}")
    edges: list[Edge] = []
    for k, ln in body:
        try:
            u, v = (int(x) for x in ln.split())
        except ValueError:
            raise GraphParseError(k, f"expected 'u v', got {ln!r}") from None
        if u == v:
            raise GraphParseError(k, f"loop at vertex {u}")
        if not u < v:
            raise GraphParseError(k, f"edge must satisfy u < v, got {u} {v}")
        if v >= n:
            raise GraphParseError(k, f"vertex {v} out of range for n={n}")
        if edges and (u, v) == edges[-1]:
            raise GraphParseError(k, f"duplicate edge {u} {v}")
        if edges and (u, v) < edges[-1]:
            raise GraphParseError(k, "edges must be sorted lexicographically")
        edges.append((u, v))
    return Graph(n, tuple(edges))


def format_graph(G: Graph) -> str:
    return "".join([f"{G.n} {G.m}\n"] + [f"{u} {v}\n" for u, v in G.edges])


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())
