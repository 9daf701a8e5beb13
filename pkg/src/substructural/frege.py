"""Frege systems obtained from sequent calculi, the line-by-line transfer of
sequent proofs, extension axioms, and a Frege proof checker.

A rule taken from a sequent schema T_1 ... T_m / T has the images
I(T_1) ... I(T_m) / I(T) as its premises and conclusion.  An instance names
its substitution explicitly: formula variables go to formulas and context
variables to lists of formulas, and the line must be the image of the
instantiated sequent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .calculus import Calculus, Rule, Schema, calculus_by_name, instantiate, match_rule
from .formula import (
    ZERO, Formula, atom, big_conj, big_disj, conj, fuse, imp, ldiv, parse, subst,
)
from .proof import Proof, ProofBuilder, check_proof, interpret
from .search import decide_cutfree

__all__ = [
    "FregeRule", "FregeSystem", "FregeLine", "FregeProof", "FregeReport", "frege_from_calculus",
    "seqproof_to_fregeproof", "check_frege_proof", "equivalence", "dumps_frege", "loads_frege",
    "image_derivation", "DEFAULT_FL_BASE",
]


@dataclass(frozen=True)
class FregeRule:
    name: str
    premises: tuple          # formula patterns, or sequent schemata for image rules
    conclusion: object
    image_of: Rule | None = None
    flavor: str = ""

    def instance(self, sub: dict):
        """Premise formulas and conclusion under the substitution."""
        if self.image_of is None:
            fv = {atom(k): v for k, v in sub.items() if isinstance(v, Formula)}
            return tuple(subst(p, fv) for p in self.premises), subst(self.conclusion, fv)
        bind = {k: v for k, v in sub.items() if isinstance(v, Formula)}
        ctx = {k: tuple(v) for k, v in sub.items() if not isinstance(v, Formula)}
        prems = tuple(interpret(*instantiate(s, bind, ctx), self.flavor) for s in self.premises)
        return prems, interpret(*instantiate(self.conclusion, bind, ctx), self.flavor)

    def display(self) -> str:
        """Schematic form, each context variable read as one formula variable."""
        if self.image_of is None:
            prem, con = self.premises, self.conclusion
        else:
            names = {}
            for s in self.premises + (self.conclusion,):
                for x in s.ante + s.succ:
                    if isinstance(x, str):
                        names[x] = atom(_CTX_LETTER[x[0]] + x[1:])
            def img(s):
                a = tuple(names[x] if isinstance(x, str) else x for x in s.ante)
                c = tuple(names[x] if isinstance(x, str) else x for x in s.succ)
                if self.flavor == "single" and len(c) > 1:
                    # single conclusion: a side context is empty next to a formula
                    c = tuple(x for x in s.succ if not isinstance(x, str))[:1] or c[:1]
                    c = tuple(names[x] if isinstance(x, str) else x for x in c)
                if self.flavor == "multiset":
                    return imp(big_conj(a), big_disj(c))
                return interpret(a, c, self.flavor)
            prem, con = [img(s) for s in self.premises], img(self.conclusion)
        shown = ", ".join(_greek(p) for p in prem)
        return f"{self.name}: {shown} |- {_greek(con)}" if shown else f"{self.name}: |- {_greek(con)}"


_CTX_LETTER = {"U": "g", "X": "d", "G": "g", "S": "s", "P": "pi", "D": "d", "L": "l"}
_GREEK = {"A": "φ", "B": "ψ", "C": "θ", "E": "χ", "g": "γ", "d": "δ", "s": "σ", "pi": "π", "l": "λ"}


def _greek(f: Formula) -> str:
    out = f.pretty()
    for k, v in sorted(_GREEK.items(), key=lambda kv: -len(kv[0])):
        out = _replace_word(out, k, v)
    return out


def _replace_word(text, word, new):
    import re
    return re.sub(rf"(?<![A-Za-z_']){re.escape(word)}(?=[0-9]*(?![A-Za-z_']))", new, text)


@dataclass
class FregeSystem:
    name: str
    lang: str
    rules: dict
    base: str = ""            # name of the sequent calculus the images come from
    flavor: str = "single"

    def __repr__(self):
        return f"FregeSystem({self.name}, {len(self.rules)} rules)"


def _frule(name, prems, con):
    return FregeRule(name, tuple(parse(p, None) for p in prems), parse(con, None))


DEFAULT_FL_BASE = (
    _frule("mp\\", ["A", "A \\ B"], "B"),
    _frule("adj", ["A", "B"], "A & B"),
)
_BPC_EXTRA = (
    _frule("mp", ["A", "A -> B"], "B"),
    _frule("adj", ["A", "B"], "A & B"),
)


def frege_from_calculus(c: Calculus, base_rules=None) -> FregeSystem:
    """One image rule per schema of ``c``; BPC-style calculi also get mp and
    adj, the single-conclusion ones a pluggable base (modus ponens for \\
    and adjunction by default)."""
    rules = {}
    for name, r in c.rules.items():
        rules[name] = FregeRule(name, r.premises, r.conclusion, r, c.flavor)
    if c.flavor == "multiset":
        extra = _BPC_EXTRA
        lang = "L"
    elif c.flavor in ("single", "multi"):
        extra = DEFAULT_FL_BASE if base_rules is None else tuple(base_rules)
        lang = "L*"
    else:
        raise ValueError(f"unsupported calculus {c.name}")
    for r in extra:
        if r.name in rules:
            raise ValueError(f"base rule {r.name} clashes with a calculus rule")
        rules[r.name] = r
    return FregeSystem(f"F({c.name})", lang, rules, c.name, c.flavor)


@dataclass(frozen=True)
class FregeLine:
    formula: Formula
    kind: str                   # hyp | rule | ext
    rule: str = ""
    premises: tuple = ()
    sub: tuple = ()             # sorted (name, Formula or tuple of Formula) pairs
    ext_atom: Formula | None = None
    definiens: Formula | None = None


@dataclass
class FregeProof:
    lines: list
    system: str = ""

    def __len__(self):
        return len(self.lines)

    @property
    def length(self):
        return sum(l.formula.size for l in self.lines)


@dataclass
class FregeReport:
    valid: bool
    lines: int
    length: int
    first_violation: tuple | None = None

    def __bool__(self):
        return self.valid


def equivalence(p: Formula, f: Formula, lang: str = "L*") -> Formula:
    """p \\ f & f \\ p in the substructural language, p -> f & f -> p in L."""
    if lang == "L":
        return conj(imp(p, f), imp(f, p))
    return conj(ldiv(p, f), ldiv(f, p))


def seqproof_to_fregeproof(proof: Proof, F: FregeSystem, c: Calculus | None = None) -> FregeProof:
    """Line i is the image of sequent i, justified by the image of its rule."""
    if not F.base:
        raise ValueError("Frege system has no base calculus")
    c = c or calculus_by_name(F.base)
    rep = check_proof(c, proof)
    if not rep.valid:
        raise ValueError(f"sequent proof is not valid in {c.name}: {rep.first_violation}")
    lines = []
    for n in proof.nodes:
        rule = c.rules[n.rule]
        prems = [proof.nodes[p].sequent for p in n.premises]
        bind, ctx = match_rule(rule, n.sequent, prems, c.flavor == "multiset", dict(n.inst))
        sub = dict(bind)
        sub.update(ctx)
        lines.append(FregeLine(interpret(n.ante, n.succ, F.flavor), "rule", n.rule, n.premises,
                               tuple(sorted(sub.items()))))
    return FregeProof(lines, F.name)


def check_frege_proof(F: FregeSystem, proof: FregeProof, hypotheses=()) -> FregeReport:
    hyps = set(hypotheses)
    lines = proof.lines
    bad = None
    seen_atoms: set = set()
    for h in hyps:
        seen_atoms |= h.atoms()
    ext_atoms = []
    for i, ln in enumerate(lines):
        why = None
        if ln.kind == "hyp":
            if ln.formula not in hyps:
                why = "not a hypothesis"
        elif ln.kind == "rule":
            r = F.rules.get(ln.rule)
            if r is None:
                why = f"unknown rule {ln.rule}"
            elif any(not (0 <= p < i) for p in ln.premises):
                why = "premise does not precede the line"
            elif len(ln.premises) != len(r.premises):
                why = "wrong number of premises"
            else:
                try:
                    prem, con = r.instance(dict(ln.sub))
                except KeyError as e:
                    prem, con, why = None, None, f"substitution misses {e}"
                if why is None:
                    if con is not ln.formula:
                        why = "conclusion does not match the rule instance"
                    elif any(lines[p].formula is not f for p, f in zip(ln.premises, prem)):
                        why = "premise does not match the rule instance"
        elif ln.kind == "ext":
            p, d = ln.ext_atom, ln.definiens
            if p is None or d is None or p.kind != "atom":
                why = "extension axiom needs an atom and a definiens"
            elif ln.formula is not equivalence(p, d, F.lang):
                why = "line is not the equivalence of the atom and its definiens"
            elif p in d.atoms():
                why = "extension atom occurs in its definiens"
            elif p in seen_atoms:
                why = "extension atom is not fresh"
            else:
                ext_atoms.append(p)
        else:
            why = f"unknown justification {ln.kind}"
        if why is not None:
            bad = (i, why)
            break
        seen_atoms |= ln.formula.atoms()
    if bad is None and lines:
        last = lines[-1].formula.atoms()
        for p in ext_atoms:
            if p in last:
                bad = (len(lines) - 1, f"extension atom {p} occurs in the last line")
                break
    if bad is None and not lines:
        bad = (0, "empty proof")
    return FregeReport(bad is None, len(lines), proof.length, bad)


# image soundness ---------------------------------------------------------------------

def image_derivation(c: Calculus, rule: Rule, bind: dict, ctx: dict, search_budget: int = 50_000):
    """Proof in ``c`` plus the initial sequents => I(T_i) of => I(T), for a
    single-conclusion schema instance T_1 ... T_m / T.  Returns (calculus,
    proof); helper sequents come from cut-free search."""
    prem_seqs = [instantiate(s, bind, ctx) for s in rule.premises]
    con = instantiate(rule.conclusion, bind, ctx)
    rules = dict(c.rules)
    hyp_names = []
    for k, (a, s) in enumerate(prem_seqs):
        name = f"hyp{k}"
        rules[name] = Rule(name, (), Schema((), (interpret(a, s),)), "extra")
        hyp_names.append(name)
    c2 = replace(c, name=c.name + "+hyp", rules=rules)
    b = ProofBuilder(c2.name)

    def searched(ante, succ):
        v = decide_cutfree(c, (tuple(ante), tuple(succ)), search_budget)
        if not v.provable:
            raise ValueError(f"helper sequent not found: {v.status}")
        return b.graft(v.proof)

    ids = []
    for (a, s), name in zip(prem_seqs, hyp_names):
        img = interpret(a, s)
        d = s[0] if s else ZERO
        h = b.add(name, (), (), (img,))
        g = fuse(a)
        p = b.cut(h, searched((g, img), (d,)), 1)            # ⊛Γ => d
        p = b.cut(searched(a, (g,)) if a else b.one(), p, 0)  # Γ => d
        if not s:
            p = b.cut(p, b.add("zero", (), (ZERO,), ()), 0)
        ids.append(p)
    top = b.add(rule.name, ids, con[0], con[1], {v: len(x) for v, x in ctx.items()})
    a, s = con
    if not s:
        top = b.add("0w", (top,), a, (ZERO,), {"G": len(a), "D": 0, "L": 0})
    top = b.fold(top, 0, len(a)) if len(a) != 1 else top
    top = b.rldiv(top)
    return c2, b.proof(top)


# text format -------------------------------------------------------------------------

FHEADER = "# substructural frege proof v1"


def _enc(v):
    if isinstance(v, Formula):
        return str(v)
    return [str(x) for x in v]


def _dec(v):
    if isinstance(v, str):
        return parse(v, None)
    return tuple(parse(x, None) for x in v)


def dumps_frege(proof: FregeProof) -> str:
    out = [FHEADER, f"system: {proof.system or '-'}", "id\tformula\tjustification\tpremises\tdata"]
    for i, ln in enumerate(proof.lines):
        prem = ",".join(map(str, ln.premises)) or "-"
        if ln.kind == "rule":
            just = f"rule:{ln.rule}"
            data = json.dumps({k: _enc(v) for k, v in ln.sub}, sort_keys=True, ensure_ascii=False)
        elif ln.kind == "ext":
            just = "ext"
            data = json.dumps({"atom": str(ln.ext_atom), "definiens": str(ln.definiens)}, sort_keys=True)
        else:
            just, data = "hyp", "-"
        out.append(f"{i}\t{ln.formula}\t{just}\t{prem}\t{data}")
    return "\n".join(out) + "\n"


def loads_frege(text: str) -> FregeProof:
    rows = text.split("\n")
    if rows[0] != FHEADER:
        raise ValueError("not a Frege proof file")
    system = rows[1].partition(": ")[2]
    lines = []
    for row in rows[3:]:
        if not row:
            continue
        _, f, just, prem, data = row.split("\t")
        prem_t = () if prem == "-" else tuple(int(x) for x in prem.split(","))
        formula = parse(f, None)
        if just.startswith("rule:"):
            sub = tuple(sorted((k, _dec(v)) for k, v in json.loads(data).items()))
            lines.append(FregeLine(formula, "rule", just[5:], prem_t, sub))
        elif just == "ext":
            d = json.loads(data)
            lines.append(FregeLine(formula, "ext", ext_atom=parse(d["atom"], None),
                                   definiens=parse(d["definiens"], None)))
        else:
            lines.append(FregeLine(formula, "hyp"))
    return FregeProof(lines, "" if system == "-" else system)
