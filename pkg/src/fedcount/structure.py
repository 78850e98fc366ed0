"""Structural shortcuts for F and D: determinability, block factorization, books.

F is multiplicative over blocks unconditionally. D is multiplicative across a
cut vertex ``v`` only when ``v`` is degree-determinable on one side, so every
D-product in a plan carries the certificate that justified it. Without one,
the pieces are merged and brute-forced.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .census import count_degree_tuples, count_forests_brute, packed_degree_keys
from .errors import InvalidParameterError
from .graph import Graph, block_decomposition, connected_components, is_bipartite

# sides up to this many edges may be certified by exhaustive determinability check
_BRUTE_CERT_EDGES = 22


# ---------------------------------------------------------------------------
# degree-determinability
# ---------------------------------------------------------------------------


def _on_odd_cycle(G: Graph, v: int) -> bool:
    # in a 2-connected non-bipartite block every vertex lies on an odd cycle
    for b in block_decomposition(G).blocks:
        if v in b.vertices and not b.is_bridge:
            sub, _ = G.edge_subgraph(b.edges)
            if not is_bipartite(sub):
                return True
    return False


def determinability_certificate(G: Graph, v: int, *, budget: int | None = None) -> str | None:
    """Why ``v`` is degree-determinable in ``G``, or ``None`` if it is not.

    Certificates: ``bipartite``, ``leaf``, ``isolated``, ``brute``.
    """
    if not 0 <= v < G.n:
        raise InvalidParameterError(f"vertex {v} out of range")
    d = G.degree(v)
    if d == 0:
        return "isolated"
    if d == 1:
        return "leaf"
    if is_bipartite(G):
        return "bipartite"
    if _on_odd_cycle(G, v):
        return None
    keys, places = packed_degree_keys(G, budget=budget)
    digit = (keys // places[v]) % (d + 1)
    off = np.unique(keys - digit * places[v])
    return "brute" if off.size == keys.size else None


def is_degree_determinable(G: Graph, v: int, *, budget: int | None = None) -> bool:
    return determinability_certificate(G, v, budget=budget) is not None


def is_degree_determinable_brute(G: Graph, v: int, *, budget: int | None = None) -> bool:
    """Exhaustive check with no shortcuts (reference path)."""
    keys, places = packed_degree_keys(G, budget=budget)
    digit = (keys // places[v]) % (G.degree(v) + 1)
    return np.unique(keys - digit * places[v]).size == keys.size


# ---------------------------------------------------------------------------
# generalized books
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BookSpec:
    """Pages are cycle lengths; ``with_base=False`` drops the shared edge."""

    pages: tuple[int, ...]
    with_base: bool = True

    def __post_init__(self) -> None:
        pages = tuple(int(c) for c in self.pages)
        if not pages:
            raise InvalidParameterError("a book needs at least one page")
        if any(c < 3 for c in pages):
            raise InvalidParameterError(f"page lengths must be >= 3, got {list(pages)}")
        object.__setattr__(self, "pages", pages)

    @property
    def is_bipartite(self) -> bool:
        if self.with_base:
            return all(c % 2 == 0 for c in self.pages)
        return len({c % 2 for c in self.pages}) == 1

    @property
    def edge_count(self) -> int:
        return sum(c - 1 for c in self.pages) + (1 if self.with_base else 0)


def book_graph(spec: BookSpec) -> Graph:
    """Base endpoints are 0 and 1; each page's internal vertices follow in order."""
    edges = [(0, 1)] if spec.with_base else []
    nxt = 2
    for c in spec.pages:
        inner = list(range(nxt, nxt + c - 2))
        nxt += c - 2
        walk = [0] + inner + [1]
        edges.extend(zip(walk, walk[1:]))
    return Graph(nxt, tuple(edges))


def book_forest_count(spec: BookSpec) -> int:
    terms = [2 ** (c - 1) - 1 for c in spec.pages]
    R = math.prod(terms)
    others = sum(math.prod(terms[:j] + terms[j + 1 :]) for j in range(len(terms)))
    return (2 * R if spec.with_base else R) + others


def book_degree_count(spec: BookSpec) -> int:
    t = [2 ** (c - 1) - 2 for c in spec.pages]
    extra = 2 if spec.with_base else 1
    total = 0
    for S in itertools.product((False, True), repeat=len(spec.pages)):
        even = sum(1 for c, s in zip(spec.pages, S) if s and c % 2 == 0)
        odd = sum(1 for c, s in zip(spec.pages, S) if s and c % 2 == 1)
        T = math.prod(x for x, s in zip(t, S) if not s)
        total += (even + extra) * (odd + 1) * T
    return total


def as_book(G: Graph) -> BookSpec | None:
    """Recognize a 2-connected graph that is a generalized book (at least two pages).

    Plain cycles are left to the cycle formulas and return ``None``.
    """
    hubs = [v for v in range(G.n) if G.degree(v) > 2]
    if len(hubs) != 2 or any(G.degree(v) not in (0, 2) for v in range(G.n) if v not in hubs):
        return None
    l, r = hubs
    with_base = G.has_edge(l, r)
    pages = []
    for w, _ in G.incidence[l]:
        if w == r:
            continue
        prev, cur, length = l, w, 1
        while cur not in hubs:
            a, b = (x for x, _ in G.incidence[cur])
            prev, cur = cur, (b if a == prev else a)
            length += 1
        if cur != r:
            return None
        pages.append(length + 1)
    if len(pages) + with_base != G.degree(r) or len(pages) < 2:
        return None
    if sum(p - 1 for p in pages) + with_base != G.m:
        return None
    return BookSpec(tuple(sorted(pages)), with_base)


# ---------------------------------------------------------------------------
# factorization plans
# ---------------------------------------------------------------------------


@dataclass
class PlanNode:
    """One step of a factorization.

    ``method`` is ``product`` (children multiply), ``closed-form`` or ``brute``.
    ``edges`` are edge pairs in the original graph's labels. For a D-product at a
    cut vertex, ``certificates`` maps each factored side to its certificate.
    """

    method: str
    value: int
    edges: tuple[tuple[int, int], ...] = ()
    detail: str = ""
    cut_vertex: int | None = None
    certificates: list[str] = field(default_factory=list)
    children: list["PlanNode"] = field(default_factory=list)

    def leaves(self) -> list["PlanNode"]:
        if not self.children:
            return [self]
        return [x for c in self.children for x in c.leaves()]

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"method": self.method, "value": str(self.value)}
        if self.detail:
            out["detail"] = self.detail
        if self.cut_vertex is not None:
            out["cut_vertex"] = self.cut_vertex
        if self.certificates:
            out["certificates"] = list(self.certificates)
        if not self.children:
            out["edges"] = [list(e) for e in self.edges]
        else:
            out["children"] = [c.to_dict() for c in self.children]
        return out


@dataclass
class FactorizationPlan:
    quantity: str
    root: PlanNode

    @property
    def value(self) -> int:
        return self.root.value

    def covers_exactly(self, G: Graph) -> bool:
        seen = [e for leaf in self.root.leaves() for e in leaf.edges]
        return sorted(seen) == list(G.edges)

    def to_dict(self) -> dict[str, Any]:
        return {"quantity": self.quantity, "value": str(self.value), "plan": self.root.to_dict()}


def _relabel(edges: Sequence[tuple[int, int]], labels: Sequence[int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(tuple(sorted((labels[u], labels[v]))) for u, v in edges))


def _f_block(G: Graph, b: Block, labels: Sequence[int], budget: int | None) -> PlanNode:
    sub, sl = G.edge_subgraph(b.edges)
    edges = _relabel(sub.edges, [labels[x] for x in sl])
    if b.is_bridge:
        return PlanNode("closed-form", 2, edges, "bridge")
    if b.is_cycle:
        return PlanNode("closed-form", 2 ** len(b.edges) - 1, edges, f"cycle C{len(b.edges)}")
    spec = as_book(sub)
    if spec is not None:
        return PlanNode("closed-form", book_forest_count(spec), edges, _book_label(spec))
    return PlanNode("brute", count_forests_brute(sub, budget=budget), edges, "irreducible block")


def _book_label(spec: BookSpec) -> str:
    return "book " + ",".join(map(str, spec.pages)) + ("" if spec.with_base else " nobase")


def plan_F(G: Graph, *, budget: int | None = None) -> FactorizationPlan:
    """Forest count as a product over blocks; closed forms where a block is recognized."""
    labels = list(range(G.n))
    children = [_f_block(G, b, labels, budget) for b in block_decomposition(G).blocks]
    return FactorizationPlan("F", PlanNode("product", math.prod(c.value for c in children), (), "blocks", children=children))


def count_F_factored(G: Graph, *, budget: int | None = None) -> int:
    return plan_F(G, budget=budget).value


def _single_block_D(sub: Graph, edges: tuple[tuple[int, int], ...], budget: int | None) -> PlanNode:
    if sub.m == 1:
        return PlanNode("closed-form", 2, edges, "bridge")
    if sub.m == sub.n:
        c = sub.m
        return PlanNode("closed-form", 2**c if c % 2 else 2**c - 1, edges, f"cycle C{c}")
    spec = as_book(sub)
    if spec is not None:
        return PlanNode("closed-form", book_degree_count(spec), edges, _book_label(spec))
    return PlanNode("brute", count_degree_tuples(sub, budget=budget), edges, "irreducible block")


def _sides(G: Graph, v: int) -> list[list[int]]:
    """Edge-id sets of the pieces of ``G`` glued at ``v``."""
    seen = {v}
    out = []
    for s, _ in G.incidence[v]:
        if s in seen:
            continue
        seen.add(s)
        stack, comp = [s], {s}
        while stack:
            x = stack.pop()
            for y, _ in G.incidence[x]:
                if y != v and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        out.append(sorted({e for x in comp for _, e in G.incidence[x]}))
    return out


def _side_certificate(sub: Graph, v: int, budget: int | None) -> str | None:
    d = sub.degree(v)
    if d == 1:
        return "leaf"
    if is_bipartite(sub):
        return "bipartite"
    if _on_odd_cycle(sub, v) or sub.m > _BRUTE_CERT_EDGES:
        return None
    return "brute" if is_degree_determinable_brute(sub, v, budget=budget) else None


def _plan_D_connected(
    G: Graph, labels: Sequence[int], skip: frozenset[int], budget: int | None
) -> PlanNode:
    edges = _relabel(G.edges, labels)
    dec = block_decomposition(G)
    if len(dec.blocks) == 1:
        return _single_block_D(G, edges, budget)
    for v in dec.cut_vertices:
        if labels[v] in skip:
            continue
        pieces = []
        for ids in _sides(G, v):
            sub, sl = G.edge_subgraph(ids)
            pieces.append((ids, sub, sl, _side_certificate(sub, sl.index(v), budget)))
        certified = [p for p in pieces if p[3] is not None]
        if not certified:
            continue
        rest = [p for p in pieces if p[3] is None]
        children, certs = [], []
        for ids, sub, sl, cert in certified:
            children.append(_plan_D_connected(sub, [labels[x] for x in sl], frozenset(), budget))
            certs.append(cert)
        if rest:
            ids = sorted(e for p in rest for e in p[0])
            sub, sl = G.edge_subgraph(ids)
            # v stays a cut vertex of a multi-piece remainder; don't split there again
            keep = skip | {labels[v]} if len(rest) > 1 else frozenset()
            children.append(_plan_D_connected(sub, [labels[x] for x in sl], keep, budget))
            certs.append("none")
        value = math.prod(c.value for c in children)
        return PlanNode("product", value, (), "cut vertex", labels[v], certs, children)
    return PlanNode("brute", count_degree_tuples(G, budget=budget), edges, "no certified factorization")


def plan_D(G: Graph, *, budget: int | None = None) -> FactorizationPlan:
    """Degree-tuple count, factored only across certified cut vertices."""
    children = []
    for comp in connected_components(G):
        ids = sorted({e for x in comp for _, e in G.incidence[x]})
        if not ids:
            continue
        sub, sl = G.edge_subgraph(ids)
        children.append(_plan_D_connected(sub, sl, frozenset(), budget))
    return FactorizationPlan("D", PlanNode("product", math.prod(c.value for c in children), (), "components", children=children))


def count_D_factored(G: Graph, *, budget: int | None = None) -> int:
    return plan_D(G, budget=budget).value


# ---------------------------------------------------------------------------
# subset identities
# ---------------------------------------------------------------------------


def _check_tuple(a: Sequence[int]) -> tuple[int, ...]:
    a = tuple(int(x) for x in a)
    if not a or any(x < 1 for x in a):
        raise InvalidParameterError("identity arguments must be a non-empty tuple of integers >= 1")
    return a


def identity_F1_D1(a: Sequence[int]) -> tuple[int, int]:
    """``(prod a_i, sum_S prod_{i not in S} (a_i - 1))``."""
    a = _check_tuple(a)
    lhs = math.prod(a)
    rhs = 0
    for S in itertools.product((False, True), repeat=len(a)):
        rhs += math.prod(x - 1 for x, s in zip(a, S) if not s)
    return lhs, rhs


def identity_F2_D2(a: Sequence[int]) -> tuple[int, int]:
    """``(sum_j prod_{i != j} a_i, sum_S |S| prod_{i not in S} (a_i - 1))``."""
    a = _check_tuple(a)
    lhs = sum(math.prod(a[:j] + a[j + 1 :]) for j in range(len(a)))
    rhs = 0
    for S in itertools.product((False, True), repeat=len(a)):
        rhs += sum(S) * math.prod(x - 1 for x, s in zip(a, S) if not s)
    return lhs, rhs
