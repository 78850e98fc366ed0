"""Named graph families and seeded random generators.

Family strings (grammar version 1)::

    cycle:N  path:N  grid2:N  ktri:N  kbip:M,N  book:C1,C2,...[:nobase]
"""

from __future__ import annotations

import random
from typing import Iterator

from .errors import InvalidParameterError
from .graph import Graph, complete_bipartite, cycle, path
from .structure import BookSpec, book_graph
from .tridiagonal import complete_tridiagonal_graph, grid2

FAMILY_GRAMMAR_VERSION = "1"
FAMILY_HELP = "cycle:N | path:N | grid2:N | ktri:N | kbip:M,N | book:C1,C2,...[:nobase]"


def _ints(text: str, family: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InvalidParameterError(f"family {family!r}: expected integers, got {text!r}") from None


def parse_family(spec: str) -> Graph:
    name, _, rest = spec.strip().partition(":")
    if not rest:
        raise InvalidParameterError(f"family {spec!r} has no parameters; expected {FAMILY_HELP}")
    if name == "book":
        body, _, flag = rest.partition(":")
        if flag not in ("", "nobase"):
            raise InvalidParameterError(f"book flag must be 'nobase', got {flag!r}")
        return book_graph(BookSpec(tuple(_ints(body, name)), with_base=flag != "nobase"))
    args = _ints(rest, name)
    simple = {"cycle": cycle, "path": path, "grid2": grid2, "ktri": complete_tridiagonal_graph}
    if name in simple:
        if len(args) != 1:
            raise InvalidParameterError(f"family {name!r} takes one integer")
        return simple[name](args[0])
    if name == "kbip":
        if len(args) != 2:
            raise InvalidParameterError("family 'kbip' takes two integers M,N")
        return complete_bipartite(*args)
    raise InvalidParameterError(f"unknown family {name!r}; expected {FAMILY_HELP}")


def relabel(G: Graph, rng: random.Random) -> Graph:
    perm = list(range(G.n))
    rng.shuffle(perm)
    return Graph(G.n, tuple((perm[u], perm[v]) for u, v in G.edges))


def random_tree(rng: random.Random, n: int) -> Graph:
    """Random recursive tree on ``n`` vertices, randomly relabeled."""
    if n < 1:
        raise InvalidParameterError("a tree needs at least one vertex")
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return relabel(Graph(n, tuple(edges)), rng)


def random_cactus(rng: random.Random, edges: int, bipartite: bool) -> Graph:
    """Connected cactus with exactly ``edges`` edges.

    Blocks (pendant edges or cycles) are glued one at a time at a uniformly
    chosen existing vertex. Bipartite cacti use even cycles only; the others
    start from an odd cycle, so they need at least 3 edges.
    """
    if edges < 1 or (not bipartite and edges < 3):
        raise InvalidParameterError(f"cannot build a {'bi' if bipartite else 'non-bi'}partite cactus with {edges} edges")
    out: list[tuple[int, int]] = []
    n = 1

    def add_cycle(at: int, length: int) -> None:
        nonlocal n
        walk = [at] + list(range(n, n + length - 1)) + [at]
        n += length - 1
        out.extend(zip(walk, walk[1:]))

    if not bipartite:
        odd = [c for c in range(3, edges + 1, 2)]
        add_cycle(0, rng.choice(odd))
    while len(out) < edges:
        left = edges - len(out)
        at = rng.randrange(n)
        lengths = [c for c in range(3, left + 1) if not bipartite or c % 2 == 0]
        if lengths and rng.random() < 0.5:
            add_cycle(at, rng.choice(lengths))
        else:
            out.append((at, n))
            n += 1
    return relabel(Graph(n, tuple(out)), rng)


def random_graph(rng: random.Random, n: int, m: int) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if m > len(pairs):
        raise InvalidParameterError(f"{n} vertices hold at most {len(pairs)} edges")
    return Graph(n, tuple(rng.sample(pairs, m)))


def iter_books(max_total: int, max_pages: int, with_base: bool) -> Iterator[BookSpec]:
    """Every book with non-decreasing page lengths, total length at most ``max_total``."""

    def rec(prefix: list[int], lo: int, budget: int) -> Iterator[BookSpec]:
        if prefix:
            yield BookSpec(tuple(prefix), with_base)
        if len(prefix) == max_pages:
            return
        for c in range(lo, budget + 1):
            yield from rec(prefix + [c], c, budget - c)

    yield from rec([], 3, max_total)
