"""Command-line interface: ``fedcount <command> ...``.

Exit codes: 0 success, 1 usage or I/O error, 2 budget exceeded, 3 violation found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Any, Sequence

from . import __version__
from .census import (
    colored_forest_census,
    colored_recurrence,
    colored_recurrence_components,
    count_degree_tuples,
    count_forests_brute,
    count_forests_dc,
)
from .config import resolve_budget, resolve_workers
from .errors import BudgetExceededError, FedCountError
from .families import FAMILY_GRAMMAR_VERSION, FAMILY_HELP, parse_family
from .graph import Graph, read_graph
from .harness import (
    SweepReport,
    fed_status,
    sweep_all_graphs,
    sweep_colored_gr,
    sweep_known_fed_families,
)
from .structure import plan_D, plan_F
from .tridiagonal import EntrySet, enumerate_gr, gr_collision_census, gr_recurrence_sequence

SCHEMA = "fedcount-report/1"
EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    # shared flags, accepted before or after the subcommand
    p = _Parser(add_help=False)
    p.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                   help="max elementary evaluations (env FEDCOUNT_BUDGET)")
    p.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                   help="worker processes (env FEDCOUNT_WORKERS)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for random families")
    p.add_argument("--format", choices=("text", "json", "csv"), default=argparse.SUPPRESS)
    p.add_argument("--output", default=argparse.SUPPRESS, help="write the report here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="fedcount", description="Forest and degree-tuple counting.", parents=[common])
    parser.add_argument("--version", action="version", version=f"fedcount {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    count = sub.add_parser("count", parents=[common], help="count forests or degree tuples of one graph")
    count.add_argument("what", choices=("forests", "degrees", "fed"))
    src = count.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="graph file ('n m' header, then one 'u v' per line)")
    src.add_argument("--family", help=FAMILY_HELP)
    count.add_argument("--method", choices=("auto", "brute", "dc", "factored"), default="auto")

    gr = sub.add_parser("gr", parents=[common], help="row-column sums of tridiagonal matrices")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--q", type=int, default=0)
    gr.add_argument("--k", type=int, default=1)
    gr.add_argument("--collisions", action="store_true", help="extension census (q=0, k=1 only)")
    gr.add_argument("--list", action="store_true", help="include every pair in the report")

    col = sub.add_parser("colored", parents=[common], help="k-colored ladder forests")
    col.add_argument("--n", type=int, required=True)
    col.add_argument("--k", type=int, required=True)
    mode = col.add_mutually_exclusive_group()
    mode.add_argument("--census", action="store_true", help="full enumeration only")
    mode.add_argument("--recurrence", action="store_true", help="closed recurrences only")

    ver = sub.add_parser("verify", parents=[common], help="hypothesis sweeps")
    vsub = ver.add_subparsers(dest="sweep", required=True, parser_class=_Parser)
    vf = vsub.add_parser("fed", parents=[common])
    vf.add_argument("--max-vertices", type=int, required=True)
    vf.add_argument("--bipartite-only", action="store_true")
    vc = vsub.add_parser("colored-gr", parents=[common])
    vc.add_argument("--max-n", type=int, required=True)
    vc.add_argument("--max-k", type=int, required=True)
    vk = vsub.add_parser("families", parents=[common])
    vk.add_argument("--max-size", type=int, required=True)
    vk.add_argument("--cacti", type=int, default=20)

    seq = sub.add_parser("sequence", parents=[common], help="integer sequences")
    seq.add_argument("name", choices=("gr",))
    seq.add_argument("--terms", type=int, required=True)
    return parser


# ---------------------------------------------------------------------------
# commands; each returns (result dict, violation flag)
# ---------------------------------------------------------------------------


def _load_graph(args: argparse.Namespace) -> tuple[str, Graph]:
    if args.family:
        return args.family, parse_family(args.family)
    try:
        return args.graph, read_graph(args.graph)
    except OSError as exc:
        raise UsageError(f"cannot read graph file: {exc}") from None


def _cmd_count(args: argparse.Namespace, budget: int, workers: int) -> tuple[dict[str, Any], bool]:
    label, G = _load_graph(args)
    out: dict[str, Any] = {"graph": label, "n": G.n, "m": G.m}
    method = args.method
    if args.what == "forests":
        if method in ("auto", "dc"):
            out["forest_count"], method = count_forests_dc(G), "dc"
        elif method == "brute":
            out["forest_count"] = count_forests_brute(G, budget=budget, workers=workers)
        else:
            plan = plan_F(G, budget=budget)
            out["forest_count"], out["plan"] = plan.value, plan.root.to_dict()
    elif args.what == "degrees":
        if method == "dc":
            raise UsageError("deletion-contraction counts forests only")
        if method == "factored":
            plan = plan_D(G, budget=budget)
            out["degree_tuple_count"], out["plan"] = plan.value, plan.root.to_dict()
        else:
            out["degree_tuple_count"], method = count_degree_tuples(G, budget=budget, workers=workers), "brute"
    else:
        st = fed_status(G, budget=budget)
        method = "factored"
        out["F"], out["D"] = st.F, st.D
        out["bipartite"] = st.bipartite
        out["fed_status"] = st.status.replace("VIOLATION", "violation")
        out["plan"] = {"F": plan_F(G, budget=budget).root.to_dict(), "D": plan_D(G, budget=budget).root.to_dict()}
        out["method"] = method
        return out, st.is_violation
    out["method"] = method
    return out, False


def _cmd_gr(args: argparse.Namespace, budget: int, workers: int) -> tuple[dict[str, Any], bool]:
    X = EntrySet(args.q, args.k)
    out: dict[str, Any] = {"n": args.n, "entry_set": {"q": X.q, "k": X.k}}
    if args.collisions:
        if (args.q, args.k) != (0, 1):
            raise UsageError("--collisions is defined for the entry set {0, 1} only")
        c = gr_collision_census(args.n, budget=budget)
        out.update({
            "gr_count": c.total,
            "extends_one": c.extends_one,
            "extends_two": c.extends_two,
            "extends_more": c.extends_more,
            "multi_last_sums": sorted(list(x) for x in c.multi_last_sums),
            "collision_cases": [
                {"predecessor_last_sums": [list(a), list(b)], "count": c_}
                for (a, b), c_ in c.collision_cases.items()
            ],
        })
        return out, False
    res = enumerate_gr(args.n, X, budget=budget, workers=workers, collect=args.list)
    out["gr_count"] = res.count
    out["matrices"] = res.matrices
    violated = False
    if X.k >= 1:
        # the colored-forest recurrence; for k = 1 it is the GR recurrence itself
        rec = colored_recurrence(args.n, X.k)
        out["recurrence_count"] = rec
        out["match"] = rec == res.count
        violated = not out["match"]
    if args.list:
        pairs = sorted(res.pairs(), key=lambda p: (p.r, p.c))
        out["pairs"] = [{"r": list(p.r), "c": list(p.c)} for p in pairs]
    return out, violated


def _cmd_colored(args: argparse.Namespace, budget: int, workers: int) -> tuple[dict[str, Any], bool]:
    out: dict[str, Any] = {"n": args.n, "k": args.k}
    mismatch = False
    if not args.recurrence:
        c = colored_forest_census(args.n, args.k, budget=budget, workers=workers)
        out["census"] = {"a": c.a, "a_semi": c.a_semi, "a_not": c.a_not}
    if not args.census:
        comp = colored_recurrence_components(args.n, args.k)[-1]
        out["recurrence"] = {
            "a": colored_recurrence(args.n, args.k),
            "a_semi": comp.a_semi,
            "a_not": comp.a_not,
        }
    if "census" in out and "recurrence" in out:
        mismatch = out["census"] != out["recurrence"]
        out["agree"] = not mismatch
    return out, mismatch


def _cmd_verify(args: argparse.Namespace, budget: int, workers: int) -> tuple[dict[str, Any], bool]:
    rep: SweepReport
    if args.sweep == "fed":
        rep = sweep_all_graphs(args.max_vertices, args.bipartite_only, budget=budget)
    elif args.sweep == "colored-gr":
        rep = sweep_colored_gr(args.max_n, args.max_k, budget=budget, workers=workers)
    else:
        rep = sweep_known_fed_families(args.max_size, seed=args.seed, cacti=args.cacti, budget=budget)
    return {"sweep": rep.to_dict(), "_report": rep}, bool(rep.violations)


def _cmd_sequence(args: argparse.Namespace, budget: int, workers: int) -> tuple[dict[str, Any], bool]:
    return {"name": "gr", "terms": gr_recurrence_sequence(args.terms)}, False


_COMMANDS = {
    "count": _cmd_count,
    "gr": _cmd_gr,
    "colored": _cmd_colored,
    "verify": _cmd_verify,
    "sequence": _cmd_sequence,
}


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _exact(x: Any) -> Any:
    """Integers become decimal strings, recursively; booleans stay booleans."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, dict):
        return {k: _exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_exact(v) for v in x]
    raise TypeError(f"unexpected value in report: {x!r}")


def _text(x: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in x.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}: [{len(v)} entries]")
        elif isinstance(v, list):
            items = ("(" + ",".join(map(str, i)) + ")" if isinstance(i, list) else str(i) for i in v)
            lines.append(f"{pad}{k}: {' '.join(items)}")
        else:
            lines.append(f"{pad}{k}: {v}")
    return lines


def _csv(result: dict[str, Any], report: SweepReport | None) -> str:
    if report is not None:
        return report.to_csv()
    flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
    w.writeheader()
    w.writerow(flat)
    return buf.getvalue()


def render(doc: dict[str, Any], fmt: str, report: SweepReport | None = None) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    result = doc["result"]
    if fmt == "csv":
        return _csv(result, report)
    if report is not None:
        sw = result["sweep"]
        lines = [
            f"family: {sw['family']}",
            f"instances: {sw['instances']}",
            f"work: {sw['work']}",
            f"violations: {sw['violation_count']}",
            f"verdict: {sw['verdict']}",
        ]
        lines += [f"skipped: {s}" for s in sw["skipped"]]
        for w in sw["violations"]:
            lines.append(f"witness: n={w['n']} F={w['F']} D={w['D']} bipartite={w['bipartite']} edges={w['edges']}")
        lines.append(f"elapsed_ns: {doc['timing']['elapsed_ns']}")
        return "\n".join(lines) + "\n"
    return "\n".join(_text(result)) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    fmt = getattr(args, "format", "text")
    output = getattr(args, "output", None)
    if not hasattr(args, "seed"):
        args.seed = 0
    t0 = time.perf_counter_ns()
    try:
        budget = resolve_budget(getattr(args, "budget", None))
        workers = resolve_workers(getattr(args, "workers", None))
        result, violated = _COMMANDS[args.command](args, budget, workers)
    except BudgetExceededError as exc:
        print(f"fedcount: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, FedCountError) as exc:
        print(f"fedcount: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = result.pop("_report", None)
    params = {k: v for k, v in vars(args).items() if k not in ("format", "output", "budget", "workers")}
    doc = {
        "schema": SCHEMA,
        "family_grammar": FAMILY_GRAMMAR_VERSION,
        "version": __version__,
        "command": args.command,
        "params": _exact(params),
        "config": {"budget": str(budget), "workers": str(workers), "seed": str(args.seed)},
        "result": _exact(result),
        "timing": {"elapsed_ns": str(time.perf_counter_ns() - t0)},
    }
    if report is not None:
        # sweep timing lives with the rest of the timing data
        doc["timing"]["sweep_elapsed_ns"] = doc["result"]["sweep"].pop("timing")["elapsed_ns"]
    try:
        _emit(render(doc, fmt, report), output)
    except OSError as exc:
        print(f"fedcount: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_VIOLATION if violated else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
