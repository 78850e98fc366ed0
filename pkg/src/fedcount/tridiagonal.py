"""Row-column sums of tridiagonal matrices over contiguous integer entry sets.

Band entries are indexed in odometer order: the ``n-1`` subdiagonal entries
``a[i+1][i]``, then the ``n`` main entries ``a[i][i]``, then the ``n-1``
superdiagonal entries ``a[i][i+1]``; index 0 is the least significant digit.
Entries off the band are zero.

A row-column pair is packed into one integer key: with every band value
shifted down by ``q`` to ``0..k``, each shifted row and column sum is a digit
in base ``3k+1`` (rows at positions ``0..n-1``, columns at ``n..2n-1``). The
shift is a fixed per-position offset, so distinct pairs get distinct keys.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ._parallel import run_shards
from .config import check_budget
from .errors import DomainError, InvalidParameterError
from .graph import DegreeTuple, Graph

_TAIL_LIMIT = 1 << 20


@dataclass(frozen=True)
class EntrySet:
    """The contiguous entry set ``{q, q+1, ..., q+k}``."""

    q: int = 0
    k: int = 1

    def __post_init__(self) -> None:
        if self.k < 0:
            raise InvalidParameterError(f"entry set span must be >= 0, got {self.k}")

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "EntrySet":
        vals = sorted(set(values))
        if not vals or vals != list(range(vals[0], vals[-1] + 1)):
            raise InvalidParameterError(f"entry set must be a contiguous integer range, got {values}")
        return cls(vals[0], len(vals) - 1)

    @property
    def values(self) -> range:
        return range(self.q, self.q + self.k + 1)

    def __len__(self) -> int:
        return self.k + 1

    def __contains__(self, x: int) -> bool:
        return self.q <= x <= self.q + self.k


BINARY = EntrySet(0, 1)


@dataclass(frozen=True)
class RowColPair:
    r: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.r) != len(self.c):
            raise InvalidParameterError("row and column vectors differ in length")


@dataclass(frozen=True)
class TridiagonalMatrix:
    sub: tuple[int, ...]
    main: tuple[int, ...]
    sup: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.main)
        if n < 1:
            raise InvalidParameterError("matrix order must be >= 1")
        if len(self.sub) != n - 1 or len(self.sup) != n - 1:
            raise InvalidParameterError(
                f"order {n} needs off-diagonals of length {n - 1}, "
                f"got {len(self.sub)} and {len(self.sup)}"
            )
        object.__setattr__(self, "sub", tuple(self.sub))
        object.__setattr__(self, "main", tuple(self.main))
        object.__setattr__(self, "sup", tuple(self.sup))

    @property
    def n(self) -> int:
        return len(self.main)

    @classmethod
    def from_entries(cls, n: int, entries: Sequence[int]) -> "TridiagonalMatrix":
        """Build from band values listed in odometer order."""
        if len(entries) != 3 * n - 2:
            raise InvalidParameterError(f"order {n} has {3 * n - 2} band entries")
        return cls(tuple(entries[: n - 1]), tuple(entries[n - 1 : 2 * n - 1]), tuple(entries[2 * n - 1 :]))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "TridiagonalMatrix":
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InvalidParameterError("matrix must be square")
            for j, x in enumerate(row):
                if abs(i - j) > 1 and x != 0:
                    raise InvalidParameterError(f"nonzero entry off the band at ({i}, {j})")
        return cls(
            tuple(rows[i + 1][i] for i in range(n - 1)),
            tuple(rows[i][i] for i in range(n)),
            tuple(rows[i][i + 1] for i in range(n - 1)),
        )

    def entries(self) -> tuple[int, ...]:
        return self.sub + self.main + self.sup

    def dense(self) -> list[list[int]]:
        n = self.n
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = self.main[i]
        for i in range(n - 1):
            a[i + 1][i] = self.sub[i]
            a[i][i + 1] = self.sup[i]
        return a

    def leading(self) -> "TridiagonalMatrix":
        """Top-left submatrix of order ``n-1``."""
        if self.n < 2:
            raise InvalidParameterError("order-1 matrix has no leading submatrix")
        return TridiagonalMatrix(self.sub[:-1], self.main[:-1], self.sup[:-1])

    def is_over(self, entry_set: EntrySet) -> bool:
        return all(x in entry_set for x in self.entries())


def band_positions(n: int) -> list[tuple[int, int]]:
    """``(row, column)`` of every band entry in odometer order."""
    return (
        [(i + 1, i) for i in range(n - 1)]
        + [(i, i) for i in range(n)]
        + [(i, i + 1) for i in range(n - 1)]
    )


def row_col_sums(A: TridiagonalMatrix) -> RowColPair:
    n = A.n
    r = [0] * n
    c = [0] * n
    for (i, j), x in zip(band_positions(n), A.entries()):
        r[i] += x
        c[j] += x
    return RowColPair(tuple(r), tuple(c))


def iter_matrices(n: int, entry_set: EntrySet = BINARY) -> Iterator[TridiagonalMatrix]:
    """All matrices of order ``n`` over ``entry_set``, odometer order (entry 0 fastest)."""
    if n < 1:
        raise InvalidParameterError("matrix order must be >= 1")
    vals = list(entry_set.values)
    for combo in itertools.product(vals, repeat=3 * n - 2):
        yield TridiagonalMatrix.from_entries(n, combo[::-1])


# ---------------------------------------------------------------------------
# key packing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Layout:
    n: int
    entry_set: EntrySet

    @property
    def base(self) -> int:
        return 3 * self.entry_set.k + 1

    def powers(self) -> list[int]:
        return [self.base**p for p in range(2 * self.n)]

    def weights(self) -> list[int]:
        pw = self.powers()
        return [pw[i] + pw[self.n + j] for i, j in band_positions(self.n)]

    def band_counts(self) -> tuple[list[int], list[int]]:
        rows = [0] * self.n
        cols = [0] * self.n
        for i, j in band_positions(self.n):
            rows[i] += 1
            cols[j] += 1
        return rows, cols

    def check_fits(self) -> None:
        if self.base ** (2 * self.n) >= 2**62:
            raise InvalidParameterError(
                f"order {self.n} with span {self.entry_set.k} does not fit a 64-bit key"
            )

    def decode(self, key: int) -> RowColPair:
        q = self.entry_set.q
        rows, cols = self.band_counts()
        digits = []
        for _ in range(2 * self.n):
            key, d = divmod(key, self.base)
            digits.append(d)
        r = tuple(digits[i] + q * rows[i] for i in range(self.n))
        c = tuple(digits[self.n + j] + q * cols[j] for j in range(self.n))
        return RowColPair(r, c)

    def encode(self, pair: RowColPair) -> int:
        q = self.entry_set.q
        rows, cols = self.band_counts()
        pw = self.powers()
        key = 0
        for i in range(self.n):
            key += (pair.r[i] - q * rows[i]) * pw[i] + (pair.c[i] - q * cols[i]) * pw[self.n + i]
        return key


def _sums(weights: Sequence[int], k: int) -> np.ndarray:
    """Packed partial keys of every assignment of ``0..k`` to the given entries.

    Element order is the odometer order over the entries (first entry fastest).
    """
    out = np.zeros(1, np.int64)
    vals = np.arange(k + 1, dtype=np.int64)
    for w in weights:
        out = (vals[:, None] * np.int64(w) + out[None, :]).ravel()
    return out


@dataclass
class GREnumeration:
    """Result of :func:`enumerate_gr`: the cardinality and, optionally, the packed set."""

    n: int
    entry_set: EntrySet
    count: int
    matrices: int
    keys: np.ndarray | None = None

    def pairs(self) -> set[RowColPair]:
        if self.keys is None:
            raise InvalidParameterError("enumeration was run without collect=True")
        layout = _Layout(self.n, self.entry_set)
        return {layout.decode(int(x)) for x in self.keys}


def _gr_group(args: tuple[np.ndarray, np.ndarray, bool]) -> tuple[int, np.ndarray | None]:
    heads, tail, collect = args
    keys = np.unique((heads[:, None] + tail[None, :]).ravel())
    return int(keys.size), keys if collect else None


def enumerate_gr(
    n: int,
    entry_set: EntrySet = BINARY,
    *,
    budget: int | None = None,
    workers: int | None = None,
    collect: bool = False,
) -> GREnumeration:
    """Exact set of distinct row-column-sum pairs over all tridiagonal matrices.

    Every one of the ``(k+1)^(3n-2)`` matrices is evaluated. The matrices are
    split into a head (band entries touching the first ``t`` rows or columns)
    and a tail; each matrix key is ``head key + tail key``. Heads that agree on
    the finished sums ``r_0..r_{t-1}, c_0..c_{t-1}`` form a shard; shards have
    disjoint key sets, so the total is the sum of per-shard distinct counts and
    does not depend on how shards are assigned to workers.
    """
    if n < 1:
        raise InvalidParameterError("matrix order must be >= 1")
    k = entry_set.k
    total = (k + 1) ** (3 * n - 2)
    check_budget(total, budget, f"GR enumeration n={n}, k={k}")
    layout = _Layout(n, entry_set)
    layout.check_fits()
    w = layout.weights()
    pos = band_positions(n)

    t = n
    for cand in range(1, n):
        if (k + 1) ** (3 * (n - cand) - 2) <= _TAIL_LIMIT:
            t = cand
            break
    head_idx = [e for e, (i, j) in enumerate(pos) if i < t or j < t]
    tail_idx = [e for e, (i, j) in enumerate(pos) if not (i < t or j < t)]
    heads = _sums([w[e] for e in head_idx], k)
    tail = _sums([w[e] for e in tail_idx], k)

    pw = layout.powers()
    base = layout.base
    prefix = np.zeros_like(heads)
    for p in list(range(t)) + list(range(n, n + t)):
        prefix += (heads // pw[p]) % base * pw[p]
    order = np.argsort(prefix, kind="stable")
    heads, prefix = heads[order], prefix[order]
    cuts = np.flatnonzero(np.diff(prefix)) + 1
    groups = np.split(heads, cuts)

    results = run_shards(_gr_group, [(g, tail, collect) for g in groups], workers)
    count = sum(c for c, _ in results)
    keys = None
    if collect:
        keys = np.sort(np.concatenate([x for _, x in results]))
    return GREnumeration(n, entry_set, count, total, keys)


def gr_brute_set(n: int, entry_set: EntrySet = BINARY) -> set[RowColPair]:
    """Reference path: row_col_sums over :func:`iter_matrices` (small orders only)."""
    return {row_col_sums(A) for A in iter_matrices(n, entry_set)}


def gr_recurrence_sequence(n_max: int) -> list[int]:
    """``[|GR_1|, ..., |GR_n_max|]`` from a_1 = 2, a_2 = 15, a_n = 8 a_{n-1} - 4 a_{n-2}."""
    if n_max < 1:
        raise InvalidParameterError("n_max must be >= 1")
    seq = [2, 15]
    while len(seq) < n_max:
        seq.append(8 * seq[-1] - 4 * seq[-2])
    return seq[:n_max]


# ---------------------------------------------------------------------------
# extension census
# ---------------------------------------------------------------------------


@dataclass
class CollisionCensus:
    n: int
    total: int
    extends_one: int
    extends_two: int
    extends_more: int
    # (r_n, c_n) values seen among pairs that extend two or more predecessors
    multi_last_sums: frozenset[tuple[int, int]]
    # predecessor last sums ((r'_{n-1}, c'_{n-1}) of each of the two) -> number of collisions
    collision_cases: dict[tuple[tuple[int, int], tuple[int, int]], int]


def gr_collision_census(n: int, *, budget: int | None = None) -> CollisionCensus:
    """Classify each pair of GR(3_n) by how many pairs of GR(3_{n-1}) it extends.

    A pair extends a predecessor when some matrix realizing it has a leading
    submatrix realizing the predecessor.
    """
    if n < 2:
        raise InvalidParameterError("collision census needs n >= 2")
    M = 3 * n - 2
    check_budget(1 << M, budget, f"collision census n={n}")
    big = _Layout(n, BINARY)
    small = _Layout(n - 1, BINARY)
    wb = big.weights()
    ws = dict(zip(band_positions(n - 1), small.weights()))
    masks = np.arange(1 << M, dtype=np.int64)
    key = np.zeros_like(masks)
    pred = np.zeros_like(masks)
    for e, (i, j) in enumerate(band_positions(n)):
        bit = (masks >> e) & 1
        key += bit * wb[e]
        if (i, j) in ws:
            pred += bit * ws[(i, j)]
    span = 4 ** (2 * (n - 1))
    pairs = np.unique(key * span + pred)
    pk, pp = pairs // span, pairs % span
    uk, first, counts = np.unique(pk, return_index=True, return_counts=True)

    pw_big = big.powers()
    pw_small = small.powers()

    def last(keys: np.ndarray, pw: list[int], m: int) -> tuple[np.ndarray, np.ndarray]:
        return (keys // pw[m - 1]) % 4, (keys // pw[2 * m - 1]) % 4

    multi = counts >= 2
    rl, cl = last(uk[multi], pw_big, n)
    multi_last = frozenset(zip(rl.tolist(), cl.tolist()))

    cases: dict[tuple[tuple[int, int], tuple[int, int]], int] = {}
    two = np.flatnonzero(counts == 2)
    if two.size:
        a = pp[first[two]]
        b = pp[first[two] + 1]
        ra, ca = last(a, pw_small, n - 1)
        rb, cb = last(b, pw_small, n - 1)
        for x in zip(ra.tolist(), ca.tolist(), rb.tolist(), cb.tolist()):
            case = tuple(sorted([(x[0], x[1]), (x[2], x[3])]))
            cases[case] = cases.get(case, 0) + 1
    return CollisionCensus(
        n=n,
        total=int(uk.size),
        extends_one=int(np.sum(counts == 1)),
        extends_two=int(np.sum(counts == 2)),
        extends_more=int(np.sum(counts >= 3)),
        multi_last_sums=multi_last,
        collision_cases=dict(sorted(cases.items())),
    )


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def complete_tridiagonal_graph(n: int) -> Graph:
    """K^3_{n,n}: rows are vertices ``0..n-1``, columns ``n..2n-1``, edge iff |i-j| <= 1."""
    if n < 1:
        raise InvalidParameterError("order must be >= 1")
    return Graph(2 * n, tuple((i, n + j) for i, j in band_positions(n)))


def grid2(n: int) -> Graph:
    """The 2 x n ladder: top row ``0..n-1``, bottom row ``n..2n-1``, rung ``(i, n+i)``."""
    if n < 1:
        raise InvalidParameterError("order must be >= 1")
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(n + i, n + i + 1) for i in range(n - 1)]
    edges += [(i, n + i) for i in range(n)]
    return Graph(2 * n, tuple(edges))


def grid_tridiagonal_isomorphism(n: int) -> tuple[int, ...]:
    """Vertex map ``phi`` from :func:`grid2` onto :func:`complete_tridiagonal_graph`.

    Columns at odd 0-based positions swap their top and bottom vertex; the map
    is checked to carry the edge set onto the edge set.
    """
    phi = [0] * (2 * n)
    for c in range(n):
        top, bottom = (c, n + c) if c % 2 == 0 else (n + c, c)
        phi[c], phi[n + c] = top, bottom
    g, t = grid2(n), complete_tridiagonal_graph(n)
    image = sorted(tuple(sorted((phi[u], phi[v]))) for u, v in g.edges)
    if image != list(t.edges):
        raise RuntimeError(f"grid/tridiagonal map is not an isomorphism for n={n}")
    return tuple(phi)


def biadjacency_graph(A: TridiagonalMatrix) -> Graph:
    """Bipartite graph with rows ``0..n-1`` and columns ``n..2n-1``, edge per entry 1."""
    if any(x not in (0, 1) for x in A.entries()):
        raise DomainError("biadjacency graphs need a (0,1) matrix")
    n = A.n
    return Graph(2 * n, tuple((i, n + j) for (i, j), x in zip(band_positions(n), A.entries()) if x))


def rowcol_to_degree_tuple(p: RowColPair) -> DegreeTuple:
    return tuple(p.r) + tuple(p.c)
