import csv
import io
import subprocess
import sys
from pathlib import Path

import pytest

from substructural.cli import run
from substructural.families import gen_theta_star
from substructural.formula import parse
from substructural.frege import loads_frege
from substructural.proof import loads

GOLDEN = Path(__file__).parent / "golden"


def cli(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
    try:
        code = run([str(a) for a in argv], out, err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def theta2(tmp_path):
    path = tmp_path / "theta2.proof"
    assert cli("gen", "proof", "theta-star", "--n", 2, "--out", path)[0] == 0
    return path


class TestGen:
    def test_formula_golden(self):
        code, out, _ = cli("gen", "formula", "theta-star", "--n", 3, "--k", 1)
        assert code == 0
        assert out == (GOLDEN / "theta_star_3_1.txt").read_text()
        assert parse(out.strip(), None) is gen_theta_star(3, 1)

    def test_proof_golden(self):
        code, out, _ = cli("gen", "proof", "theta-star", "--n", 2)
        assert code == 0 and out == (GOLDEN / "theta_star_proof_2.txt").read_text()

    def test_deterministic(self):
        runs = {cli("gen", "proof", "theta-star", "--n", 3, "--k", 1)[1] for _ in range(2)}
        assert len(runs) == 1

    def test_seed_ignored(self):
        a = cli("--seed", 1, "gen", "proof", "distrib", "--n", 2)[1]
        b = cli("--seed", 7, "gen", "proof", "distrib", "--n", 2)[1]
        assert a == b

    @pytest.mark.parametrize("family", ["clique", "color", "theta", "theta-star-tilde", "bd", "kc"])
    def test_families(self, family):
        code, out, _ = cli("gen", "formula", family, "--n", 3, "--k", 1, "--m", 2)
        assert code == 0 and parse(out.strip(), None)

    def test_bad_parameters(self):
        assert cli("gen", "proof", "theta-star", "--n", 1)[0] == 64
        assert cli("gen", "formula", "theta-star", "--n", 1)[0] == 64

    def test_unknown_family(self):
        assert cli("gen", "formula", "nope", "--n", 2)[0] == 64

    def test_missing_n(self):
        assert cli("gen", "proof", "theta-star")[0] == 64


class TestCheck:
    def test_builder_artifact(self, theta2):
        code, out, _ = cli("check", "--calculus", "WL", theta2)
        assert code == 0 and "valid: true" in out and "lines: 23" in out

    def test_stdin(self, theta2):
        code, out, _ = cli("check", "--calculus", "WL", "-", stdin=theta2.read_text())
        assert code == 0

    def test_wrong_calculus(self, theta2):
        code, out, _ = cli("check", "--calculus", "BPC", theta2)
        assert code == 1 and "valid: false" in out and "violation: node" in out

    def test_unknown_calculus(self, theta2):
        assert cli("check", "--calculus", "LK", theta2)[0] == 64

    def test_missing_file(self, tmp_path):
        assert cli("check", "--calculus", "WL", tmp_path / "nope")[0] == 64

    def test_garbage(self, tmp_path):
        path = tmp_path / "bad.proof"
        path.write_text("hello\n")
        assert cli("check", "--calculus", "WL", path)[0] == 64


class TestMeasureBench:
    def test_measure(self, theta2):
        code, out, _ = cli("measure", theta2)
        rows = list(csv.DictReader(io.StringIO(out)))
        pf = loads(theta2.read_text())
        assert code == 0 and rows == [{"lines": str(pf.lines), "length": str(pf.length)}]

    def test_bench(self):
        code, out, _ = cli("bench", "theta-star", "--n-range", "2..3")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and [r["n"] for r in rows] == ["2", "3"]
        assert [int(r["lines"]) >= b for r, b in zip(rows, (2, 16))] == [True, True]

    def test_bench_bad_range(self):
        assert cli("bench", "theta-star", "--n-range", "4")[0] == 64


class TestSearch:
    def test_provable(self):
        code, out, _ = cli("search", "--calculus", "WL", "--sequent", "p, q => p * q")
        assert code == 0 and "verdict: Provable" in out

    def test_refuted(self):
        code, out, _ = cli("search", "--calculus", "WL", "--sequent", "p, q => q * p")
        assert code == 1 and "verdict: Refuted" in out

    def test_budget(self):
        code, out, _ = cli("search", "--calculus", "FL", "--sequent", f"=> {gen_theta_star(2, 1)}", "--budget", 3)
        assert code == 2

    def test_proof_out(self, tmp_path):
        path = tmp_path / "s.proof"
        cli("search", "--calculus", "BPC", "--sequent", "=> (p & q) -> q", "--out", path)
        assert cli("check", "--calculus", "BPC", path)[0] == 0

    def test_bad_sequent(self):
        assert cli("search", "--calculus", "WL", "--sequent", "p => => q")[0] == 64


class TestTransforms:
    def test_translate_formula(self):
        code, out, _ = cli("translate", "formula", "p * q", "--to", "L")
        assert code == 0 and out.strip() == "p & q"

    def test_translate_proof(self, theta2, tmp_path):
        path = tmp_path / "bpc.proof"
        assert cli("translate", "proof", theta2, "--to", "BPC", "--out", path)[0] == 0
        assert cli("check", "--calculus", "BPC", path)[0] == 0

    def test_eliminate_cut(self, tmp_path):
        src, dst = tmp_path / "t.proof", tmp_path / "cf.proof"
        cli("gen", "proof", "theta-star-tilde", "--n", 2, "--out", src)
        assert cli("eliminate-cut", "--calculus", "FL_e", src, "--out", dst)[0] == 0
        code, out, _ = cli("check", "--calculus", "FL_e", dst)
        assert code == 0
        assert "cut" not in loads(dst.read_text()).rule_counts()

    def test_eliminate_cut_contraction(self, theta2):
        assert cli("eliminate-cut", "--calculus", "FL_ec", theta2)[0] == 64

    def test_invert(self, tmp_path):
        src, dst = tmp_path / "s.proof", tmp_path / "i.proof"
        cli("search", "--calculus", "BPC", "--sequent", "=> p -> (p | q)", "--out", src)
        assert cli("invert", src, "--out", dst)[0] == 0
        assert loads(dst.read_text()).end[0] == (parse("p"),)
        assert cli("check", "--calculus", "BPC", dst)[0] == 0

    def test_lemma(self):
        code, out, _ = cli("verify-lemma62", "--size-cap", 3)
        assert code == 0


class TestFrege:
    def test_transform_and_check(self, theta2, tmp_path):
        path = tmp_path / "f.txt"
        assert cli("frege", "transform", "--calculus", "WL", theta2, "--out", path)[0] == 0
        assert len(loads_frege(path.read_text())) == 23
        code, out, _ = cli("frege", "check", "--calculus", "WL", path)
        assert code == 0

    def test_derive(self):
        code, out, _ = cli("frege", "derive", "--calculus", "BPC")
        assert code == 0 and "Tr: γ → (φ → ψ), γ → (ψ → θ) |- γ → (δ ∨ (φ → θ))" in out
        assert "mp:" in out and "adj:" in out

    def test_check_with_hypotheses(self, tmp_path):
        path = tmp_path / "mp.txt"
        path.write_text("# substructural frege proof v1\nsystem: -\nid\tformula\tjustification\tpremises\tdata\n"
                        "0\tp\thyp\t-\t-\n1\tp -> q\thyp\t-\t-\n"
                        '2\tq\trule:mp\t0,1\t{"A": "p", "B": "q"}\n')
        assert cli("frege", "check", "--calculus", "BPC", path, "--hyp", "p", "--hyp", "p -> q")[0] == 0
        assert cli("frege", "check", "--calculus", "BPC", path, "--hyp", "p")[0] == 1


def test_usage():
    assert cli()[0] == 64
    assert cli("frobnicate")[0] == 64


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "substructural", "gen", "formula", "theta-star", "--n", "2", "--k", "1"],
                          capture_output=True, text=True)
    assert done.returncode == 0 and parse(done.stdout.strip(), None) is gen_theta_star(2, 1)


def test_node_cap(monkeypatch):
    monkeypatch.setenv("SUBSTRUCTURAL_NODE_CAP", "10")
    assert cli("gen", "proof", "theta-star", "--n", 3)[0] == 2
