from __future__ import annotations

import json
import subprocess
import sys

import pytest

from fedcount import cli
from fedcount.graph import Graph
from fedcount.harness import SweepReport, Witness


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, (json.loads(out) if out else None), err


def _strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing")
    return doc


def _walk(x):
    if isinstance(x, dict):
        for v in x.values():
            yield from _walk(v)
    elif isinstance(x, list):
        for v in x:
            yield from _walk(v)
    else:
        yield x


class TestExamples:
    def test_count_grid(self, capsys):
        code, out, _ = run(capsys, "count", "forests", "--family", "grid2:3")
        assert code == 0 and "forest_count: 112" in out

    def test_gr_two(self, capsys):
        code, doc, _ = run_json(capsys, "gr", "--n", "2", "--q", "0", "--k", "1")
        assert code == 0
        r = doc["result"]
        assert r["gr_count"] == "15" and r["recurrence_count"] == "15" and r["match"] is True
        assert r["entry_set"] == {"q": "0", "k": "1"}

    def test_verify_fed(self, capsys):
        code, out, _ = run(capsys, "verify", "fed", "--max-vertices", "6")
        assert code == 0 and "violations: 0" in out


class TestCommands:
    @pytest.mark.parametrize("method, value", [("brute", "31"), ("dc", "31"), ("factored", "31"), ("auto", "31")])
    def test_forest_methods(self, capsys, method, value):
        code, doc, _ = run_json(capsys, "count", "forests", "--family", "cycle:5", "--method", method)
        assert code == 0 and doc["result"]["forest_count"] == value

    def test_degrees(self, capsys):
        code, doc, _ = run_json(capsys, "count", "degrees", "--family", "ktri:3")
        assert doc["result"]["degree_tuple_count"] == "112"
        code, doc, _ = run_json(capsys, "count", "degrees", "--family", "book:3,3", "--method", "factored")
        assert doc["result"]["degree_tuple_count"] == "30" 
        assert "book" in json.dumps(doc["result"]["plan"])

    def test_fed(self, capsys):
        code, doc, _ = run_json(capsys, "count", "fed", "--family", "cycle:3")
        r = doc["result"]
        assert code == 0 and (r["F"], r["D"], r["fed_status"]) == ("7", "8", "FLD")
        assert {"F", "D"} <= set(r["plan"])

    def test_gr_collisions(self, capsys):
        code, doc, _ = run_json(capsys, "gr", "--n", "4", "--collisions")
        assert doc["result"]["extends_two"] == "60" and doc["result"]["extends_more"] == "0"

    def test_gr_list(self, capsys):
        code, doc, _ = run_json(capsys, "gr", "--n", "1", "--list")
        assert doc["result"]["pairs"] == [{"r": ["0"], "c": ["0"]}, {"r": ["1"], "c": ["1"]}]

    def test_colored(self, capsys):
        code, doc, _ = run_json(capsys, "colored", "--n", "3", "--k", "2")
        r = doc["result"]
        assert code == 0 and r["agree"] is True and r["census"]["a"] == "1387"
        code, doc, _ = run_json(capsys, "colored", "--n", "30", "--k", "5", "--recurrence")
        assert "census" not in doc["result"] and len(doc["result"]["recurrence"]["a"]) > 30

    def test_verify_colored(self, capsys):
        code, out, _ = run(capsys, "verify", "colored-gr", "--max-n", "3", "--max-k", "2")
        assert code == 0 and "violations: 0" in out

    def test_verify_families(self, capsys):
        code, doc, _ = run_json(capsys, "verify", "families", "--max-size", "10", "--cacti", "4", "--seed", "5")
        assert code == 0 and doc["result"]["sweep"]["violation_count"] == "0"
        assert doc["config"]["seed"] == "5"

    def test_sequence(self, capsys):
        code, out, _ = run(capsys, "sequence", "gr", "--terms", "5")
        assert code == 0 and "terms: 2 15 112 836 6240" in out

    def test_graph_file(self, capsys, tmp_path):
        f = tmp_path / "tri.txt"
        f.write_text("# triangle\n3 3\n0 1\n0 2\n1 2\n")
        code, doc, _ = run_json(capsys, "count", "fed", "--graph", str(f))
        assert code == 0 and doc["result"]["fed_status"] == "FLD"


class TestErrors:
    def test_unknown_family(self, capsys):
        code, out, err = run(capsys, "count", "forests", "--family", "moebius:5")
        assert code == 1 and out == "" and "unknown family" in err and len(err.strip().splitlines()) == 1

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "count", "forests", "--graph", str(tmp_path / "none.txt"))
        assert code == 1 and "cannot read" in err

    def test_malformed_file(self, capsys, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("3 2\n0 1\n0 1\n")
        code, _, err = run(capsys, "count", "forests", "--graph", str(f))
        assert code == 1 and "line 3" in err

    def test_bad_usage(self, capsys):
        assert run(capsys, "count", "forests")[0] == 1
        assert run(capsys, "frobnicate")[0] == 1
        assert run(capsys, "gr", "--n", "2", "--format", "xml")[0] == 1
        assert run(capsys, "gr", "--n", "3", "--k", "2", "--collisions")[0] == 1
        assert run(capsys, "count", "degrees", "--family", "cycle:4", "--method", "dc")[0] == 1

    def test_budget(self, capsys):
        code, out, err = run(capsys, "gr", "--n", "8", "--budget", "1000")
        assert code == 2 and out == "" and "budget" in err

    def test_bad_budget(self, capsys):
        assert run(capsys, "gr", "--n", "2", "--budget", "0")[0] == 1

    def test_violation_exit(self, capsys, monkeypatch):
        def fake(*args, **kwargs):
            rep = SweepReport("fake")
            rep.violations.append(Witness(Graph(3, ((0, 1), (1, 2), (0, 2))), 9, 8, False))
            return rep

        monkeypatch.setattr(cli, "sweep_all_graphs", fake)
        code, out, _ = run(capsys, "verify", "fed", "--max-vertices", "3")
        assert code == 3 and "violations: 1" in out and "witness:" in out

    def test_recurrence_mismatch_exit(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "colored_recurrence", lambda n, k: -1)
        code, doc, _ = run_json(capsys, "gr", "--n", "2")
        assert code == 3 and doc["result"]["match"] is False

    def test_unwritable_output(self, capsys, tmp_path):
        code, _, err = run(capsys, "sequence", "gr", "--terms", "3", "--output", str(tmp_path / "no" / "x.json"))
        assert code == 1 and "cannot write" in err


class TestReport:
    def test_schema(self, capsys):
        _, doc, _ = run_json(capsys, "gr", "--n", "3")
        assert doc["schema"] == "fedcount-report/1" and doc["family_grammar"] == "1"
        assert set(doc) == {"schema", "family_grammar", "version", "command", "params", "config", "result", "timing"}

    @pytest.mark.parametrize(
        "argv",
        [
            ("verify", "families", "--max-size", "10", "--cacti", "6", "--seed", "9"),
            ("verify", "fed", "--max-vertices", "4"),
            ("count", "fed", "--family", "book:3,4,5:nobase"),
            ("colored", "--n", "3", "--k", "3"),
        ],
    )
    def test_deterministic_minus_timing(self, capsys, argv):
        a = run(capsys, *argv, "--format", "json")[1]
        b = run(capsys, *argv, "--format", "json", "--workers", "1")[1]
        da, db = json.loads(a), json.loads(b)
        assert _strip_timing(da) == _strip_timing(db)
        assert json.dumps(_strip_timing(da), indent=2) == json.dumps(_strip_timing(db), indent=2)

    def test_no_floats(self, capsys):
        for argv in (("count", "fed", "--family", "grid2:4"), ("verify", "fed", "--max-vertices", "4"), ("gr", "--n", "4")):
            _, doc, _ = run_json(capsys, *argv)
            assert not any(isinstance(v, float) for v in _walk(doc))
            assert all(isinstance(v, (str, bool)) or v is None for v in _walk(doc))

    def test_timing_isolated(self, capsys):
        _, doc, _ = run_json(capsys, "verify", "fed", "--max-vertices", "3")
        assert set(doc["timing"]) == {"elapsed_ns", "sweep_elapsed_ns"}
        assert "timing" not in doc["result"]["sweep"]

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "verify", "fed", "--max-vertices", "3", "--format", "csv")
        assert out.splitlines()[0].startswith("host,graphs") and len(out.splitlines()) == 4
        code, out, _ = run(capsys, "count", "forests", "--family", "cycle:4", "--format", "csv")
        assert out.splitlines() == ["graph,n,m,forest_count,method", "cycle:4,4,4,15,dc"]

    def test_output_file(self, capsys, tmp_path):
        f = tmp_path / "r.json"
        code, out, _ = run(capsys, "--format", "json", "--output", str(f), "sequence", "gr", "--terms", "3")
        assert code == 0 and out == ""
        assert json.loads(f.read_text())["result"]["terms"] == ["2", "15", "112"]

    def test_env_overrides(self, capsys, monkeypatch):
        monkeypatch.setenv("FEDCOUNT_BUDGET", "1000")
        assert run(capsys, "gr", "--n", "8")[0] == 2
        # the flag wins over the environment
        assert run(capsys, "gr", "--n", "3", "--budget", "100000")[0] == 0
        monkeypatch.setenv("FEDCOUNT_WORKERS", "2")
        _, doc, _ = run_json(capsys, "gr", "--n", "3")
        assert doc["config"]["workers"] == "2"
        monkeypatch.setenv("FEDCOUNT_WORKERS", "lots")
        assert run(capsys, "gr", "--n", "3")[0] == 1


def test_console_script_module():
    proc = subprocess.run(
        [sys.executable, "-m", "fedcount.cli", "gr", "--n", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "gr_count: 15" in proc.stdout
