import pytest
from hypothesis import given, strategies as st

from strategies import formulas
from substructural.calculus import make_fl, make_wl
from substructural.construct import build_distrib_proof, build_fusion_intro, build_theta_star_proof
from substructural.formula import ONE, atom, fus, parse
from substructural.proof import (
    DEFAULT_NODE_CAP, Node, NodeCapExceeded, Proof, ProofBuilder, check_proof, dumps, loads,
    node_cap, parse_sequent, seq_str,
)

p, q = atom("p"), atom("q")


def test_sequent_parse():
    a, s = parse_sequent("p, q * r => p")
    assert a == (p, parse("q * r")) and s == (p,)
    assert parse_sequent(" => ") == ((), ())
    assert parse_sequent("p ⇒ p") == ((p,), (p,))


def test_sequent_parse_nested_commas():
    a, _ = parse_sequent("p_{1,2}, (q | r) => ")
    assert a == (atom("p", 1, 2), parse("q | r"))


def test_sequent_needs_arrow():
    with pytest.raises(ValueError):
        parse_sequent("p, q")


def test_seq_str():
    assert seq_str((p, q), ()) == "p, q =>"
    assert seq_str((), (p,)) == "=> p"


class TestBuilder:
    def test_sharing(self):
        b = ProofBuilder("WL")
        assert b.ident(p) == b.ident(p)
        assert len(b) == 1

    def test_fusion_intro(self):
        pf = build_fusion_intro(p, q)
        assert pf.end == ((p, q), (fus(p, q),)) and pf.lines == 3

    def test_prune_and_renumber(self):
        b = ProofBuilder("WL")
        b.ident(q)
        i = b.rfus(b.ident(p), b.one())
        pf = b.proof(i)
        assert pf.lines == 3 and pf.root == 2
        assert check_proof(make_wl(), pf).valid

    def test_cap(self):
        b = ProofBuilder("WL", cap=2)
        b.ident(p)
        b.ident(q)
        with pytest.raises(NodeCapExceeded) as e:
            b.one()
        assert e.value.required == 3 and e.value.available == 2

    def test_cap_from_environment(self, monkeypatch):
        monkeypatch.setenv("SUBSTRUCTURAL_NODE_CAP", "50")
        assert node_cap() == 50
        with pytest.raises(NodeCapExceeded):
            build_theta_star_proof(3, 1)
        monkeypatch.delenv("SUBSTRUCTURAL_NODE_CAP")
        assert node_cap() == DEFAULT_NODE_CAP == 1 << 22

    def test_graft(self):
        src = build_fusion_intro(p, q)
        b = ProofBuilder("WL")
        r = b.graft(src)
        assert b.seq(r) == src.end


class TestFormat:
    def test_round_trip(self):
        pf = build_theta_star_proof(2, 1)
        text = dumps(pf)
        back = loads(text)
        assert back.nodes == pf.nodes and back.root == pf.root
        assert back.calculus == "WL" and back.params == pf.params
        assert dumps(back) == text

    def test_header(self):
        text = dumps(build_fusion_intro(p, q))
        assert text.startswith("# substructural proof v1\n")
        assert "id\trule\tpremises\tantecedent\tsuccedent\tinst" in text

    def test_bad_header(self):
        with pytest.raises(ValueError):
            loads("hello\n")

    def test_bad_row(self):
        text = dumps(build_fusion_intro(p, q)).replace("\n1\t", "\n7\t")
        with pytest.raises(ValueError):
            loads(text)

    @pytest.mark.parametrize("direction", ["fwd", "bwd"])
    def test_distrib_round_trip(self, direction):
        pf = build_distrib_proof([(p, q), (q, p)], direction)
        assert dumps(loads(dumps(pf))) == dumps(pf)


@given(st.lists(formulas(), min_size=0, max_size=3), st.lists(formulas(), max_size=1))
def test_single_node_round_trip(ante, succ):
    pf = Proof([Node("id", (), tuple(ante), tuple(succ), (("G", len(ante)),))], 0, "FL", "single", {})
    back = loads(dumps(pf))
    assert back.nodes == pf.nodes


@given(st.integers(2, 3), st.sampled_from(["fwd", "bwd"]))
def test_lines_at_most_length(n, direction):
    pairs = [(atom("a", i), atom("b", i)) for i in range(n)]
    pf = build_distrib_proof(pairs, direction)
    assert pf.lines <= pf.length


def test_lines_at_most_length_theta():
    pf = build_theta_star_proof(3, 1)
    assert pf.lines <= pf.length
    assert pf.lines == len(pf) == sum(pf.rule_counts().values())


def test_retag():
    pf = build_fusion_intro(ONE, p)
    t = pf.retag("FL")
    assert t.calculus == "FL" and t.nodes == pf.nodes
    assert check_proof(make_fl(), t).valid
