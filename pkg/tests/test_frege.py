import pytest
from hypothesis import given

from corpus import corpus
from rulekit import instances
from strategies import formulas
from substructural.calculus import calculus_by_name, make_bpc, make_fl
from substructural.construct import build_theta_star_proof, embed_wl_in_fl, translate_proof_wl_to_bpc
from substructural.families import gen_theta_star
from substructural.formula import ONE, TOP, atom, conj, disj, imp, ldiv, parse, translate_t
from substructural.frege import (
    DEFAULT_FL_BASE, FregeLine, FregeProof, FregeRule, check_frege_proof, dumps_frege, equivalence,
    frege_from_calculus, image_derivation, loads_frege, seqproof_to_fregeproof,
)
from substructural.proof import Node, Proof, check_proof

p, q, r = atom("p"), atom("q"), atom("r")


class TestSystems:
    def test_bpc_transitivity_display(self):
        F = frege_from_calculus(make_bpc())
        assert F.rules["Tr"].display() == "Tr: γ → (φ → ψ), γ → (ψ → θ) |- γ → (δ ∨ (φ → θ))"

    def test_bpc_has_mp_and_adj(self):
        F = frege_from_calculus(make_bpc())
        assert {"mp", "adj"} <= set(F.rules) and F.lang == "L"

    def test_identity_image(self):
        F = frege_from_calculus(make_fl())
        _, con = F.rules["id"].instance({"A": p})
        assert con is ldiv(p, p)

    def test_one_rule_per_schema(self):
        c = make_fl("e")
        F = frege_from_calculus(c)
        assert set(c.rules) <= set(F.rules)
        assert len(F.rules) == len(c.rules) + len(DEFAULT_FL_BASE)

    def test_custom_base(self):
        mine = (FregeRule("k", (), parse("A \\ (B \\ A)", None)),)
        F = frege_from_calculus(make_fl(), base_rules=mine)
        assert "k" in F.rules and "mp\\" not in F.rules

    def test_base_clash(self):
        with pytest.raises(ValueError):
            frege_from_calculus(make_fl(), base_rules=(FregeRule("id", (), p),))


class TestTranslate:
    def test_single_axiom(self):
        pf = Proof([Node("id", (), (p,), (p,), ())], 0, "FL", "single", {})
        F = frege_from_calculus(make_fl())
        fp = seqproof_to_fregeproof(pf, F)
        assert len(fp) == 1 and fp.lines[0].formula is ldiv(p, p)
        assert check_frege_proof(F, fp).valid

    def test_theta_embedded(self):
        pf = embed_wl_in_fl(build_theta_star_proof(2, 1))
        c = calculus_by_name("FL_bot")
        F = frege_from_calculus(c)
        fp = seqproof_to_fregeproof(pf, F, c)
        assert fp.lines[-1].formula is ldiv(ONE, gen_theta_star(2, 1))
        assert len(fp) == pf.lines
        assert check_frege_proof(F, fp).valid

    def test_theta_bpc(self):
        pf = translate_proof_wl_to_bpc(build_theta_star_proof(2, 1))
        F = frege_from_calculus(make_bpc())
        fp = seqproof_to_fregeproof(pf, F)
        assert fp.lines[-1].formula is imp(TOP, translate_t(gen_theta_star(2, 1)))
        assert len(fp) == pf.lines and check_frege_proof(F, fp).valid

    def test_invalid_input(self):
        pf = Proof([Node("id", (), (p,), (q,), ())], 0, "FL", "single", {})
        with pytest.raises(ValueError):
            seqproof_to_fregeproof(pf, frege_from_calculus(make_fl()))

    @pytest.mark.parametrize("idx", range(len(corpus())))
    def test_line_count_preserved(self, idx):
        label, c, pf = corpus()[idx]
        F = frege_from_calculus(c)
        fp = seqproof_to_fregeproof(pf, F, c)
        assert len(fp) == pf.lines
        assert check_frege_proof(F, fp).valid


def _hyp(f):
    return FregeLine(f, "hyp")


class TestChecker:
    def test_modus_ponens(self):
        F = frege_from_calculus(make_bpc())
        fp = FregeProof([_hyp(p), _hyp(imp(p, q)),
                         FregeLine(q, "rule", "mp", (0, 1), (("A", p), ("B", q)))])
        rep = check_frege_proof(F, fp, [p, imp(p, q)])
        assert rep.valid and rep.lines == 3

    def test_missing_hypothesis(self):
        F = frege_from_calculus(make_bpc())
        rep = check_frege_proof(F, FregeProof([_hyp(p)]), [])
        assert not rep.valid and rep.first_violation[0] == 0

    def test_wrong_instance(self):
        F = frege_from_calculus(make_bpc())
        fp = FregeProof([_hyp(p), _hyp(imp(p, q)),
                         FregeLine(r, "rule", "mp", (0, 1), (("A", p), ("B", q)))])
        assert not check_frege_proof(F, fp, [p, imp(p, q)]).valid

    def test_later_premise(self):
        F = frege_from_calculus(make_bpc())
        fp = FregeProof([FregeLine(conj(p, p), "rule", "adj", (1, 1), (("A", p), ("B", p))), _hyp(p)])
        rep = check_frege_proof(F, fp, [p])
        assert not rep.valid and rep.first_violation[0] == 0

    def _ext(self, atom_, d, lang="L"):
        return FregeLine(equivalence(atom_, d, lang), "ext", ext_atom=atom_, definiens=d)

    def test_extension_ok(self):
        F = frege_from_calculus(make_bpc())
        z = atom("z")
        fp = FregeProof([_hyp(p), self._ext(z, conj(p, q)), _hyp(imp(p, q))])
        assert check_frege_proof(F, fp, [p, imp(p, q)]).valid

    def test_extension_atom_in_definiens(self):
        F = frege_from_calculus(make_bpc())
        fp = FregeProof([self._ext(p, conj(p, q)), _hyp(q)])
        rep = check_frege_proof(F, fp, [q])
        assert not rep.valid and "definiens" in rep.first_violation[1]

    def test_extension_atom_in_last_line(self):
        F = frege_from_calculus(make_bpc())
        z = atom("z")
        fp = FregeProof([self._ext(z, conj(p, q)), _hyp(z)])
        rep = check_frege_proof(F, fp, [z])
        assert not rep.valid

    def test_extension_atom_seen_before(self):
        F = frege_from_calculus(make_bpc())
        fp = FregeProof([_hyp(r), self._ext(r, conj(p, q)), _hyp(p)])
        assert not check_frege_proof(F, fp, [r, p]).valid

    def test_extension_wrong_shape(self):
        F = frege_from_calculus(make_bpc())
        z = atom("z")
        fp = FregeProof([self._ext(z, conj(p, q), "L*"), _hyp(p)])
        assert not check_frege_proof(F, fp, [p]).valid

    def test_empty(self):
        assert not check_frege_proof(frege_from_calculus(make_fl()), FregeProof([])).valid


class TestEquivalence:
    def test_fl_shape(self):
        assert equivalence(p, q) is conj(ldiv(p, q), ldiv(q, p))

    def test_l_shape(self):
        assert equivalence(p, q, "L") is conj(imp(p, q), imp(q, p))


class TestFormat:
    def test_round_trip_theta(self):
        pf = embed_wl_in_fl(build_theta_star_proof(2, 1))
        c = calculus_by_name("FL_bot")
        F = frege_from_calculus(c)
        fp = seqproof_to_fregeproof(pf, F, c)
        text = dumps_frege(fp)
        back = loads_frege(text)
        assert back == fp and dumps_frege(back) == text

    def test_round_trip_ext(self):
        z = atom("z")
        fp = FregeProof([FregeLine(p, "hyp"),
                         FregeLine(equivalence(z, disj(p, q)), "ext", ext_atom=z, definiens=disj(p, q))], "X")
        assert loads_frege(dumps_frege(fp)) == fp

    def test_bad_header(self):
        with pytest.raises(ValueError):
            loads_frege("nope\n")


def _image_cases():
    for name in ("FL", "FL_e", "FL_ew"):
        c = calculus_by_name(name)
        for rule_name, rule in c.rules.items():
            if c.flavor == "single" and not rule.single_instance:
                continue
            for k, case in enumerate(instances(c, rule, limit=3)):
                yield pytest.param(name, rule_name, k, id=f"{name}-{rule_name}-{k}")


@pytest.mark.parametrize("cname,rule_name,k", list(_image_cases()))
def test_image_rule_sound(cname, rule_name, k):
    """The image of each rule instance is derivable from the images of its premises."""
    c = calculus_by_name(cname)
    rule = c.rules[rule_name]
    bind, ctx, prems, concl = list(instances(c, rule, limit=3))[k]
    c2, pf = image_derivation(c, rule, bind, ctx)
    assert check_proof(c2, pf).valid
    F = frege_from_calculus(c)
    sub = dict(bind)
    sub.update(ctx)
    prem_images, con_image = F.rules[rule_name].instance(sub)
    assert pf.end == ((), (con_image,))
    hyp_images = [c2.rules[f"hyp{i}"].conclusion.succ[0] for i in range(len(prems))]
    assert tuple(hyp_images) == tuple(prem_images)


@given(formulas("L*", atoms=[p, q]), formulas("L*", atoms=[p, q]))
def test_mp_instance(a, b):
    F = frege_from_calculus(make_fl())
    prem, con = F.rules["mp\\"].instance({"A": a, "B": b})
    assert prem == (a, ldiv(a, b)) and con is b
