"""Exhaustive sweeps checking the FED/FLD hypotheses and the colored GR hypothesis.

A sweep never claims more than "consistent over the swept range". Any
violation found through a fast path is recounted by plain brute force before
it is reported.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, field
from typing import Any

from .census import (
    colored_forest_census,
    colored_recurrence,
    count_degree_tuples,
    count_forests_brute,
    host_census,
)
from .config import check_budget
from .errors import BudgetExceededError
from .families import iter_books, random_cactus, random_tree
from .graph import Graph, complete_bipartite, complete_graph, format_graph, is_bipartite
from .structure import book_graph, count_D_factored, count_F_factored
from .tridiagonal import EntrySet, complete_tridiagonal_graph, enumerate_gr, grid2

FED, FLD, VIOLATION = "FED", "FLD", "VIOLATION"


@dataclass(frozen=True)
class FedStatus:
    status: str
    F: int
    D: int
    bipartite: bool

    @property
    def is_violation(self) -> bool:
        return self.status == VIOLATION


def classify(F: int, D: int, bipartite: bool) -> str:
    """FED/FLD by the counts; VIOLATION if F > D or the status disagrees with bipartiteness."""
    if F > D:
        return VIOLATION
    status = FED if F == D else FLD
    if (status == FED) != bipartite:
        return VIOLATION
    return status


def _brute_status(G: Graph, budget: int | None) -> FedStatus:
    F = count_forests_brute(G, budget=budget)
    D = count_degree_tuples(G, budget=budget, method="rows")
    bip = is_bipartite(G)
    return FedStatus(classify(F, D, bip), F, D, bip)


def fed_status(G: Graph, *, budget: int | None = None) -> FedStatus:
    """Counts via the factored engines; violations are re-derived by brute force."""
    F = count_F_factored(G, budget=budget)
    D = count_D_factored(G, budget=budget)
    bip = is_bipartite(G)
    st = FedStatus(classify(F, D, bip), F, D, bip)
    if st.is_violation:
        check = _brute_status(G, budget)
        if (check.F, check.D) != (F, D):
            raise RuntimeError(f"fast path disagrees with brute force on {G.edges}: {st} vs {check}")
        return check
    return st


@dataclass
class Witness:
    graph: Graph
    F: int
    D: int
    bipartite: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges],
            "F": str(self.F),
            "D": str(self.D),
            "bipartite": self.bipartite,
        }


@dataclass
class SweepReport:
    family: str
    instances: int = 0
    work: int = 0
    violations: list[Witness] = field(default_factory=list)
    rows: list[dict[str, Any]] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    elapsed_ns: int = 0

    @property
    def verdict(self) -> str:
        if self.violations:
            return "violation found"
        return "consistent over the swept range"

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "instances": str(self.instances),
            "work": str(self.work),
            "violations": [w.to_dict() for w in self.violations],
            "violation_count": str(len(self.violations)),
            "verdict": self.verdict,
            "skipped": list(self.skipped),
            "rows": [{k: _jsonable(v) for k, v in r.items()} for r in self.rows],
            "timing": {"elapsed_ns": str(self.elapsed_ns)},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            keys = list(self.rows[0])
            w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for r in self.rows:
                w.writerow({k: _jsonable(v) for k, v in r.items()})
        return buf.getvalue()


def _jsonable(v: Any) -> Any:
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    return v


# ---------------------------------------------------------------------------
# all graphs on few vertices
# ---------------------------------------------------------------------------


def _hosts(max_vertices: int, bipartite_only: bool) -> list[tuple[str, Graph]]:
    out = []
    for n in range(1, max_vertices + 1):
        if bipartite_only:
            if n == 1:
                out.append(("K1", complete_graph(1)))
            for a in range(1, n // 2 + 1):
                out.append((f"K{a},{n - a}", complete_bipartite(a, n - a)))
        else:
            out.append((f"K{n}", complete_graph(n)))
    return out


def sweep_work(max_vertices: int, bipartite_only: bool) -> int:
    return sum(3**h.m for _, h in _hosts(max_vertices, bipartite_only))


def sweep_all_graphs(
    max_vertices: int, bipartite_only: bool = False, *, budget: int | None = None
) -> SweepReport:
    """Every labeled spanning subgraph of K_n (or of K_{a,b}, a <= b, a + b = n).

    Each host is handled in one pass that yields F, D and bipartiteness for all
    of its subgraphs; the total work is the number of (subgraph, submask) pairs.
    """
    t0 = time.perf_counter_ns()
    check_budget(sweep_work(max_vertices, bipartite_only), budget, f"graph sweep up to {max_vertices} vertices")
    rep = SweepReport(f"{'bipartite' if bipartite_only else 'all'} graphs, n <= {max_vertices}")
    for name, host in _hosts(max_vertices, bipartite_only):
        hc = host_census(host, budget=budget)
        F, D, bip = hc.forests, hc.degrees, hc.bipartite
        bad = (F > D) | (bip & (F != D)) | (~bip & (F == D))
        for mask in bad.nonzero()[0].tolist():
            G = host.spanning_subgraph(mask)
            st = _brute_status(G, budget)
            if not st.is_violation:
                raise RuntimeError(f"sweep kernel disagrees with brute force on {G.edges}")
            rep.violations.append(Witness(G, st.F, st.D, st.bipartite))
        rep.instances += int(F.size)
        rep.work += 3**host.m
        rep.rows.append({
            "host": name,
            "graphs": int(F.size),
            "bipartite": int(bip.sum()),
            "fed": int((F == D).sum()),
            "fld": int((F < D).sum()),
            "violations": int(bad.sum()),
            "work": 3**host.m,
        })
    rep.elapsed_ns = time.perf_counter_ns() - t0
    return rep


# ---------------------------------------------------------------------------
# colored GR
# ---------------------------------------------------------------------------


def sweep_colored_gr(
    max_n: int, max_k: int, *, budget: int | None = None, workers: int | None = None
) -> SweepReport:
    """Per (n, k): colored census, recurrence and GR enumeration must agree."""
    t0 = time.perf_counter_ns()
    rep = SweepReport(f"colored GR, n <= {max_n}, k <= {max_k}")
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            cell = f"n={n},k={k}"
            try:
                census = colored_forest_census(n, k, budget=budget, workers=workers).a
                gr = enumerate_gr(n, EntrySet(0, k), budget=budget, workers=workers).count
            except BudgetExceededError as exc:
                rep.skipped.append(f"{cell}: {exc}")
                continue
            rec = colored_recurrence(n, k)
            ok = census == rec == gr
            rep.instances += 1
            rep.work += 2 * (k + 1) ** (3 * n - 2)
            rep.rows.append({"n": n, "k": k, "census": census, "recurrence": rec, "gr": gr, "agree": ok})
            if not ok:
                rep.violations.append(Witness(grid2(n), census, gr, True))
    rep.elapsed_ns = time.perf_counter_ns() - t0
    return rep


# ---------------------------------------------------------------------------
# known families
# ---------------------------------------------------------------------------


def known_family_instances(
    max_size: int, seed: int = 0, cacti: int = 20, trees: int = 10
) -> list[tuple[str, Graph]]:
    """Grids and complete tridiagonal graphs, random trees, random cacti and books.

    ``max_size`` bounds the edge count of trees and cacti and the total page
    length of books; ladders stop at order 7.
    """
    rng = random.Random(seed)
    out: list[tuple[str, Graph]] = []
    for n in range(1, 8):
        if 3 * n - 2 > max_size:
            break
        out.append((f"grid2:{n}", grid2(n)))
        out.append((f"ktri:{n}", complete_tridiagonal_graph(n)))
    for i in range(trees):
        size = rng.randint(1, max(1, max_size))
        out.append((f"tree#{i}:{size}", random_tree(rng, size + 1)))
    for i in range(cacti):
        bip = i % 2 == 0
        lo = 1 if bip else 3
        if max_size < lo:
            continue
        m = rng.randint(lo, max_size)
        out.append((f"cactus#{i}:{'bip' if bip else 'odd'}:{m}", random_cactus(rng, m, bip)))
    for base in (True, False):
        for spec in iter_books(max_size, 4, base):
            name = "book:" + ",".join(map(str, spec.pages)) + ("" if base else ":nobase")
            out.append((name, book_graph(spec)))
    return out


def sweep_known_fed_families(
    max_size: int = 20, *, seed: int = 0, cacti: int = 20, budget: int | None = None
) -> SweepReport:
    t0 = time.perf_counter_ns()
    rep = SweepReport(f"known families, size <= {max_size}, seed {seed}")
    for name, G in known_family_instances(max_size, seed, cacti):
        try:
            st = fed_status(G, budget=budget)
        except BudgetExceededError as exc:
            rep.skipped.append(f"{name}: {exc}")
            continue
        rep.instances += 1
        rep.rows.append({"instance": name, "n": G.n, "m": G.m, "F": st.F, "D": st.D,
                         "bipartite": st.bipartite, "status": st.status})
        if st.is_violation:
            rep.violations.append(Witness(G, st.F, st.D, st.bipartite))
    rep.elapsed_ns = time.perf_counter_ns() - t0
    return rep


def witness_text(w: Witness) -> str:
    return format_graph(w.graph)
