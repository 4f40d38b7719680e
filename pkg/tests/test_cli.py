from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from ricciflat.cli import (
    EXIT_DISCONNECTED,
    EXIT_INPUT,
    EXIT_NEGATIVE,
    EXIT_OK,
    EXIT_UNKNOWN_COMMAND,
    main,
)
from ricciflat.formats import parse_edge_list, parse_graph6

ROOT = Path(__file__).resolve().parent.parent
VERIFIER = ROOT / "tools" / "verify_report.py"
SCHEMA = ROOT / "docs" / "report.schema.json"


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def c5(tmp_path: Path) -> Path:
    path = tmp_path / "c5.txt"
    path.write_text("".join(f"{i} {(i + 1) % 5}\n" for i in range(5)))
    return path


def verify(report: str) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, str(VERIFIER), "-"], input=report, capture_output=True, text=True)


class TestExitCodes:
    def test_flat(self, capsys):
        code, out, _ = run(capsys, "check-flat", "--catalog", "petersen")
        assert (code, out) == (EXIT_OK, "flat\n")

    def test_not_flat(self, capsys, c5):
        code, out, _ = run(capsys, "check-flat", str(c5))
        assert code == EXIT_NEGATIVE
        assert out == "not flat: edge 0 1 has k = 1/2\n"

    def test_disconnected(self, capsys, tmp_path):
        path = tmp_path / "two.txt"
        path.write_text("0 1\n2 3\n")
        code, _, err = run(capsys, "check-flat", str(path))
        assert code == EXIT_DISCONNECTED
        assert "not connected" in err

    @pytest.mark.parametrize("text", ["0 1\n1 1\n", "0 x\n"])
    def test_bad_input(self, capsys, tmp_path, text):
        path = tmp_path / "bad.txt"
        path.write_text(text)
        code, _, err = run(capsys, "curvature", str(path))
        assert code == EXIT_INPUT
        assert "line 2" in err or "line 1" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "curvature", str(tmp_path / "nope.txt"))
        assert code == EXIT_INPUT and "cannot read" in err

    def test_unknown_subcommand(self, capsys):
        code, _, err = run(capsys, "bogus")
        assert code == EXIT_UNKNOWN_COMMAND
        assert "unknown subcommand 'bogus'" in err

    def test_bad_flag(self, capsys):
        code, _, _ = run(capsys, "curvature", "--catalog", "g8", "--format", "yaml")
        assert code == EXIT_INPUT

    def test_two_sources(self, capsys, c5):
        code, _, err = run(capsys, "curvature", str(c5), "--catalog", "g8")
        assert code == EXIT_INPUT and "exactly one" in err

    def test_unknown_catalog_name(self, capsys):
        code, _, err = run(capsys, "curvature", "--catalog", "k9")
        assert code == EXIT_INPUT and "unknown named graph" in err

    def test_alpha_out_of_range(self, capsys):
        code, _, _ = run(capsys, "curvature", "--catalog", "g8", "--alpha", "3/2")
        assert code == EXIT_INPUT

    def test_search_cap(self, capsys):
        code, _, err = run(capsys, "enumerate", "--max-n", "12")
        assert code == EXIT_INPUT and "hard cap" in err

    def test_small_patch(self, capsys):
        code, _, err = run(capsys, "catalog", "emit", "family=lattice4 mode=patch radius=4", "--certify")
        assert code == EXIT_INPUT and "no certifiable edge" in err


class TestCurvatureReport:
    def test_json_layout(self, capsys):
        code, out, _ = run(capsys, "curvature", "--catalog", "g8")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert list(doc)[:4] == ["tool", "command", "input", "graph"]
        assert doc["graph"]["certificate"] == "000e0028048110840c144a266000"
        assert doc["summary"]["flat"] is True
        assert len(doc["edges"]) == 20
        assert {e["k"] for e in doc["edges"]} == {"0/1"}

    def test_rationals_always_have_a_denominator(self, capsys):
        _, out, _ = run(capsys, "curvature", "--catalog", "petersen", "--format", "text")
        assert out.splitlines()[1] == "0 1  0/1"

    def test_decimal_rendering(self, capsys, c5):
        _, out, _ = run(capsys, "curvature", str(c5), "--decimal")
        k = json.loads(out)["edges"][0]["k"]
        assert k == {"exact": "1/2", "decimal": "0.500000"}

    def test_deterministic(self, capsys):
        first = run(capsys, "curvature", "--catalog", "figure32", "--alpha", "1/3")[1]
        second = run(capsys, "curvature", "--catalog", "figure32", "--alpha", "1/3")[1]
        assert first == second

    @pytest.mark.parametrize(
        "argv",
        [
            ["--catalog", "g8", "--alpha", "1/3"],
            ["--catalog", "g5", "--decimal"],
            ["--catalog", "type_b_c5"],
            ["--family", "family=c4c4_strip length=6", "--alpha", "0"],
        ],
    )
    def test_reports_pass_the_independent_checker(self, capsys, argv):
        _, out, _ = run(capsys, "curvature", *argv)
        proc = verify(out)
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert proc.stdout.strip() == "ok"

    def test_checker_rejects_a_tampered_report(self, capsys):
        _, out, _ = run(capsys, "curvature", "--catalog", "g8")
        doc = json.loads(out)
        block = doc["edges"][0]["transport"][0]
        block["W"] = "2/3"
        proc = verify(json.dumps(doc))
        assert proc.returncode != 0

    def test_schema(self, capsys):
        jsonschema = pytest.importorskip("jsonschema")
        schema = json.loads(SCHEMA.read_text())
        for argv in (["--catalog", "g8", "--alpha", "1/3"], ["--catalog", "half_dodecahedral", "--decimal"]):
            _, out, _ = run(capsys, "curvature", *argv)
            jsonschema.validate(json.loads(out), schema)


class TestOtherCommands:
    def test_idleness_text(self, capsys):
        code, out, _ = run(capsys, "idleness", "--catalog", "g8", "--edge", "0", "3")
        assert code == EXIT_OK
        assert "candidate breaks: 1/5, 1/5" in out
        assert "pieces: 2" in out and out.rstrip().endswith("k: 0/1")

    def test_idleness_json(self, capsys):
        _, out, _ = run(capsys, "idleness", "--catalog", "g1", "--edge", "0", "1", "--format", "json")
        prof = json.loads(out)["profile"]
        assert prof["breakpoints"][0] == "0/1" and prof["breakpoints"][-1] == "1/1"
        assert len(prof["slopes"]) == len(prof["breakpoints"]) - 1

    def test_idleness_on_non_edge(self, capsys):
        code, _, _ = run(capsys, "idleness", "--catalog", "petersen", "--edge", "0", "2")
        assert code == EXIT_INPUT

    def test_catalog_list(self, capsys):
        _, out, _ = run(capsys, "catalog", "list", "--format", "json")
        doc = json.loads(out)
        assert "petersen" in doc["named"] and "lattice4" in doc["families"]

    def test_catalog_emit_round_trips(self, capsys):
        _, out, _ = run(capsys, "catalog", "emit", "g8", "--format", "graph6")
        g = parse_graph6(out.strip())
        _, out, _ = run(capsys, "catalog", "emit", "g8")
        assert parse_edge_list(out) == g

    def test_catalog_emit_certified_patch(self, capsys):
        code, out, _ = run(capsys, "catalog", "emit", "family=c4_chain mode=patch radius=10", "--certify")
        assert code == EXIT_OK
        assert "# certified edges: 16" in out and "# flat on certified edges: true" in out
        assert parse_edge_list(out).n == 31
        _, out, _ = run(capsys, "catalog", "emit", "family=c4_chain mode=patch radius=10", "--certify", "--format", "json")
        doc = json.loads(out)
        assert doc["flat_on_certified"] is True and len(doc["certified_edges"]) == 16

    def test_enumerate_count(self, capsys):
        _, out, _ = run(capsys, "enumerate", "--max-n", "6", "--format", "count")
        assert out.strip() == str(1 + 3 + 11 + 38)

    def test_find_flat(self, capsys):
        code, out, _ = run(capsys, "find-flat", "--max-n", "8")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert [h["match"] for h in doc["hits"]] == ["cycle C6", "cycle C7", "cycle C8"]

    def test_find_flat_graph6(self, capsys):
        _, out, _ = run(capsys, "find-flat", "--max-n", "7", "--format", "graph6", "--no-prune")
        assert [parse_graph6(line).n for line in out.split()] == [6, 7]

    def test_classify(self, capsys):
        code, out, _ = run(capsys, "classify", "--catalog", "figure32")
        assert code == EXIT_OK
        doc = json.loads(out)
        tags = [t["tag"] for t in doc["types"]]
        assert tags.count("Type3") == 8 and tags.count("Type6b") == 12

    def test_classify_reports_lemma_violation(self, capsys, tmp_path):
        path = tmp_path / "w.g6"
        path.write_text("K?AA@b@BfOZ?\n")
        code, out, _ = run(capsys, "classify", str(path), "--format", "text")
        assert code == EXIT_NEGATIVE
        assert "one-c4-on-34" in out


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "ricciflat.cli", "check-flat", "--catalog", "dodecahedral"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "flat\n"
