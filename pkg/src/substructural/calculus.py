"""Rule schemata and the calculi built from them.

A rule is a list of premise schemata and a conclusion schema.  Each side of
a schema is a list of items: a context variable (standing for a sequence,
or a multiset in the BPC flavour) or a formula pattern whose atoms ``A B C E``
are formula variables.  Every rule is written in its general
multi-conclusion form; single-conclusion calculi keep only the instances in
which every sequent has at most one succedent formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from itertools import combinations

from .formula import Formula, atom, parse, power, subst

__all__ = [
    "Schema", "Rule", "Calculus", "make_fl", "make_fl_bot", "make_wl", "make_cfl",
    "drop_cut", "make_bpc", "make_ebpc", "make_named", "calculus_by_name", "match_rule",
    "TABLE1", "CTX_VARS", "FORMULA_VARS", "parse_schema", "instantiate_side", "instantiate",
    "iter_matches", "match_formula",
]

CTX_VARS = frozenset("G S P D L U X U1 U2 X1 X2 D1 D2 L1 L2".split())
FORMULA_VARS = frozenset("A B C E".split())


@dataclass(frozen=True)
class Schema:
    ante: tuple
    succ: tuple

    def ctx_vars(self):
        return [x for x in self.ante + self.succ if isinstance(x, str)]

    def __str__(self):
        show = lambda side: ", ".join(x if isinstance(x, str) else str(x) for x in side)
        return f"{show(self.ante)} => {show(self.succ)}".strip()


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x.strip() for x in out if x.strip()]


def parse_schema(text: str) -> Schema:
    left, right = text.split("=>")
    item = lambda s: s if s in CTX_VARS else parse(s, None)
    return Schema(tuple(item(s) for s in _split_top(left)), tuple(item(s) for s in _split_top(right)))


@dataclass(frozen=True)
class Rule:
    name: str
    premises: tuple
    conclusion: Schema
    group: str = "logical"          # axiom | structural | cut | logical | extra
    single_instance: bool = True    # False for Rc and Re

    @property
    def arity(self):
        return len(self.premises)

    def __str__(self):
        prem = " ; ".join(str(p) for p in self.premises)
        return f"{self.name}: {prem} / {self.conclusion}" if prem else f"{self.name}: {self.conclusion}"


def _rule(name, *schemas, group="logical", single=True):
    *prem, concl = [parse_schema(s) for s in schemas]
    return Rule(name, tuple(prem), concl, group, single)


# sequence rules ---------------------------------------------------------------

AXIOMS = {
    "id": _rule("id", "A => A", group="axiom"),
    "top": _rule("top", "G => D, T, L", group="axiom"),
    "bot": _rule("bot", "G, F, S => D", group="axiom"),
    "one": _rule("one", " => 1", group="axiom"),
    "zero": _rule("zero", "0 => ", group="axiom"),
}

STRUCTURAL = {
    "Lw": _rule("Lw", "G, S => D", "G, A, S => D", group="structural"),
    "Rw": _rule("Rw", "G => D, L", "G => D, A, L", group="structural"),
    "Lc": _rule("Lc", "G, A, A, S => D", "G, A, S => D", group="structural"),
    "Rc": _rule("Rc", "G => D, A, A, L", "G => D, A, L", group="structural", single=False),
    "Le": _rule("Le", "G, A, B, S => D", "G, B, A, S => D", group="structural"),
    "Re": _rule("Re", "G => D, A, B, L", "G => D, B, A, L", group="structural", single=False),
}
STRUCT_FOR = {"i": ["Lw"], "o": ["Rw"], "c": ["Lc", "Rc"], "e": ["Le", "Re"]}

CUT = _rule("cut", "G => A, L", "S, A, P => D", "S, G, P => D, L", group="cut")

LOGICAL = {
    "1w": _rule("1w", "G, S => D", "G, 1, S => D"),
    "0w": _rule("0w", "G => D, L", "G => D, 0, L"),
    "Land1": _rule("Land1", "G, A, S => D", "G, A & B, S => D"),
    "Land2": _rule("Land2", "G, B, S => D", "G, A & B, S => D"),
    "Rand": _rule("Rand", "G => D, A, L", "G => D, B, L", "G => D, A & B, L"),
    "Lor": _rule("Lor", "G, A, S => D", "G, B, S => D", "G, A | B, S => D"),
    "Ror1": _rule("Ror1", "G => D, A, L", "G => D, A | B, L"),
    "Ror2": _rule("Ror2", "G => D, B, L", "G => D, A | B, L"),
    "Lfus": _rule("Lfus", "G, A, B, S => D", "G, A * B, S => D"),
    "Rfus": _rule("Rfus", "G => D1, A, L1", "S => D2, B, L2", "G, S => D1, D2, A * B, L1, L2"),
}

NONCOMM = {
    "Lrdiv": _rule("Lrdiv", "G => A", "P, B, S => D", "P, B / A, G, S => D"),
    "Rrdiv": _rule("Rrdiv", "G, A => B", "G => B / A"),
    "Lldiv": _rule("Lldiv", "G => A", "P, B, S => D", "P, G, A \\ B, S => D"),
    "Rldiv": _rule("Rldiv", "A, G => B", "G => A \\ B"),
}

COMM = {
    "Limp": _rule("Limp", "G => A, L", "P, B, S => D", "P, G, A -> B, S => D, L"),
    "Rimp": _rule("Rimp", "A, G => B, D", "G => A -> B, D"),
}

# multiset rules of BPC --------------------------------------------------------

BPC_RULES = {
    "id": _rule("id", "U, A => A, X", group="axiom"),
    "top": _rule("top", "U => T, X", group="axiom"),
    "bot": _rule("bot", "U, F => X", group="axiom"),
    "Land": _rule("Land", "A, B, U => X", "A & B, U => X"),
    "Rand": _rule("Rand", "U => X, A", "U => X, B", "U => X, A & B"),
    "Lor": _rule("Lor", "A, U => X", "B, U => X", "A | B, U => X"),
    "Ror": _rule("Ror", "U => X, A, B", "U => X, A | B"),
    "Rimp": _rule("Rimp", "A, U => B", "U => X, A -> B"),
    "D": _rule("D", "A & B, U => X", "A & C, U => X", "A & (B | C), U => X"),
    "Tr": _rule("Tr", "U => A -> B", "U => B -> C", "U => X, A -> C"),
    "Fand": _rule("Fand", "U => A -> B", "U => A -> C", "U => X, A -> (B & C)"),
    "For": _rule("For", "U => A -> C", "U => B -> C", "U => X, (A | B) -> C"),
    "cut": _rule("cut", "U1 => A, X1", "U2, A => X2", "U1, U2 => X1, X2", group="cut"),
}
EBPC_AXIOM = _rule("ebpc", "U, T -> F => F, X", group="axiom")


@dataclass(frozen=True)
class Calculus:
    name: str
    lang: str
    flavor: str                      # single | multi | multiset
    S: frozenset
    rules: dict = field(hash=False, compare=False)
    params: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def has_cut(self):
        return "cut" in self.rules

    def rule(self, name):
        return self.rules.get(name)

    def __repr__(self):
        return f"Calculus({self.name}, {len(self.rules)} rules)"


def _norm_S(S) -> frozenset:
    out = set()
    for ch in S:
        if ch == "w":
            out |= {"i", "o"}
        elif ch in "eioc":
            out.add(ch)
        else:
            raise ValueError(f"unknown structural rule {ch!r}")
    return frozenset(out)


def _S_suffix(S: frozenset) -> str:
    s = "".join(ch for ch in "ec" if ch in S)
    if {"i", "o"} <= S:
        s += "w"
    else:
        s += "".join(ch for ch in "io" if ch in S)
    return s


def _name(base, S, extra=""):
    suf = _S_suffix(S)
    return base + (f"_{suf}" if suf else "") + extra


def _collect(*groups):
    out = {}
    for g in groups:
        for r in (g.values() if isinstance(g, dict) else g):
            out[r.name] = r
    return out


def _structural(S):
    return [STRUCTURAL[n] for ch in "eico" if ch in S for n in STRUCT_FOR[ch]]


def make_fl(S=()) -> Calculus:
    """Single-conclusion full Lambek calculus with structural rules S.
    With exchange the commutative implication rules are included as well."""
    S = _norm_S(S)
    ax = [AXIOMS["id"], AXIOMS["one"], AXIOMS["zero"]]
    rules = _collect(ax, [CUT], LOGICAL, NONCOMM, _structural(S), COMM if "e" in S else {})
    lang = "FL_e" if "e" in S else "FL"
    return Calculus(_name("FL", S), lang, "single", S, rules, {"S": _S_suffix(S)})


def make_fl_bot(S=()) -> Calculus:
    base = make_fl(S)
    rules = dict(base.rules)
    rules["bot"] = AXIOMS["bot"]
    return Calculus(_name("FL", base.S, "_bot") if base.S else "FL_bot", base.lang + "_bot",
                    "single", base.S, rules, dict(base.params))


def make_wl() -> Calculus:
    base = make_fl_bot()
    # 0 is outside the WL language, so the two rules that always mention it go as well
    rules = {k: r for k, r in base.rules.items() if k not in ("Lrdiv", "Rrdiv", "Lldiv", "zero", "0w")}
    return Calculus("WL", "WL", "single", frozenset(), rules, {})


def make_cfl(S) -> Calculus:
    S = _norm_S(S)
    if "e" not in S:
        raise ValueError("CFL needs exchange in S")
    ax = [AXIOMS["id"], AXIOMS["one"], AXIOMS["zero"]]
    rules = _collect(ax, [CUT], LOGICAL, COMM, _structural(S))
    return Calculus(_name("CFL", S), "CFL", "multi", S, rules, {"S": _S_suffix(S)})


def drop_cut(c: Calculus) -> Calculus:
    rules = {k: r for k, r in c.rules.items() if k != "cut"}
    return replace(c, name=c.name + "-", rules=rules)


def make_bpc() -> Calculus:
    return Calculus("BPC", "L", "multiset", frozenset({"e"}), dict(BPC_RULES), {})


def make_ebpc() -> Calculus:
    rules = dict(BPC_RULES)
    rules["ebpc"] = EBPC_AXIOM
    return Calculus("EBPC", "L", "multiset", frozenset({"e"}), rules, {})


# named extensions ---------------------------------------------------------------

_DISTRIB = ("A & (B | C)", "(A & B) | (A & C)")
_PSBL = [("A & B", "A * (A \\ B)"), ("A & B", "(B / A) * A")]

TABLE1 = {
    "RL": ("FL", [("0", "1")]),
    "CyFL": ("FL", [("A \\ 0", "0 / A")]),
    "DFL": ("FL", [_DISTRIB]),
    "P_nFL": ("FL", "power"),
    "psBL": ("FL_w", _PSBL),
    "HA": ("FL_w", [("A", "A * A")]),
    "DRL": ("RL", [_DISTRIB]),
    "IRL": ("RL", [("A", "1", "one-way")]),
    "CRL": ("RL", [("A * B", "B * A")]),
    "GBH": ("RL", _PSBL),
    "Br": ("RL", [("A & B", "A * B")]),
}


def _axiom_pair(tag, lhs, rhs, oneway=False):
    l, r = parse(lhs, None), parse(rhs, None)
    out = [Rule(tag, (), Schema((l,), (r,)), "extra")]
    if not oneway:
        out.append(Rule(tag, (), Schema((r,), (l,)), "extra"))
    return out


def make_named(name: str, n: int | None = None, **params) -> Calculus:
    """Calculi of the named table: a base calculus plus context-free
    initial-sequent schemes, each equivalence added in both directions."""
    if name not in TABLE1:
        raise KeyError(f"unknown calculus {name!r}; known: {', '.join(TABLE1)}")
    base_name, pairs = TABLE1[name]
    base = make_fl("w") if base_name == "FL_w" else make_fl() if base_name == "FL" else make_named(base_name)
    rules = dict(base.rules)
    extra_params = {}
    if pairs == "power":
        if n is None:
            raise ValueError("P_nFL needs its parameter n")
        A = parse("A", None)
        pn, pn1 = power(A, n), power(A, n + 1)
        new = [Rule(name, (), Schema((pn,), (pn1,)), "extra"),
               Rule(name, (), Schema((pn1,), (pn,)), "extra")]
        extra_params["n"] = n
    else:
        new = []
        for p in pairs:
            new += _axiom_pair(name, p[0], p[1], oneway=len(p) > 2)
    # extra initial sequents are named <calculus>.<k>, counting up from the base
    start = sum(1 for r in rules.values() if r.group == "extra")
    for j, r in enumerate(new, start + 1):
        r = replace(r, name=f"{name}.{j}")
        rules[r.name] = r
    params_out = dict(base.params)
    params_out.update(extra_params)
    label = f"P_{n}FL" if pairs == "power" else name
    return Calculus(label, base.lang, "single", base.S, rules, params_out)


def calculus_by_name(name: str) -> Calculus:
    """Resolve names such as ``WL``, ``FL``, ``FL_ew``, ``FL_bot``,
    ``FL_e_bot``, ``CFL_ew``, ``CFL_ew-``, ``BPC``, ``EBPC``, ``RL``, ``P_2FL``."""
    if name == "WL":
        return make_wl()
    if name == "BPC":
        return make_bpc()
    if name == "EBPC":
        return make_ebpc()
    if name in TABLE1 and name != "P_nFL":
        return make_named(name)
    m = re.fullmatch(r"P_(\d+)FL", name)
    if m:
        return make_named("P_nFL", n=int(m.group(1)))
    m = re.fullmatch(r"(C?FL)(?:_([ecwio]+))?(_bot)?(-)?", name)
    if m:
        base, S, bot, nocut = m.groups()
        S = S or ""
        if base == "CFL":
            if bot:
                raise KeyError(name)
            c = make_cfl(S)
        else:
            c = make_fl_bot(S) if bot else make_fl(S)
        return drop_cut(c) if nocut else c
    raise KeyError(f"unknown calculus {name!r}")


# matching -----------------------------------------------------------------------

def match_formula(pat: Formula, f: Formula, bind: dict) -> bool:
    stack = [(pat, f)]
    while stack:
        p, g = stack.pop()
        if p.kind == "atom" and p.name in FORMULA_VARS and not p.idx:
            old = bind.get(p.name)
            if old is None:
                bind[p.name] = g
            elif old is not g:
                return False
        elif p.a is None:
            if p is not g:
                return False
        elif p.kind != g.kind:
            return False
        else:
            stack.append((p.b, g.b))
            stack.append((p.a, g.a))
    return True


def _subst_pattern(p: Formula, bind: dict) -> Formula:
    return subst(p, {atom(v): f for v, f in bind.items()})


def instantiate_side(items, bind: dict, ctx: dict) -> tuple:
    out = []
    for x in items:
        if isinstance(x, str):
            out.extend(ctx[x])
        else:
            out.append(_subst_pattern(x, bind))
    return tuple(out)


def _match_seq_side(items, actual, bind, ctx, lengths):
    """Yield (bind, ctx) extensions matching an ordered side."""
    npat = sum(1 for x in items if not isinstance(x, str))
    unknown = [x for x in items if isinstance(x, str) and x not in ctx and x not in lengths]
    known = sum(len(ctx[x]) if x in ctx else lengths[x] for x in items if isinstance(x, str) and x not in unknown)
    free = len(actual) - npat - known
    if free < 0:
        return
    uniq = list(dict.fromkeys(unknown))
    if len(uniq) == 0:
        if free != 0:
            return
        splits = [{}]
    elif len(uniq) == 1:
        splits = [{uniq[0]: free}]
    else:
        splits = _compositions(free, uniq)
    for extra in splits:
        b, c = dict(bind), dict(ctx)
        pos, ok = 0, True
        for x in items:
            if isinstance(x, str):
                if x in c:
                    seg = c[x]
                    if tuple(actual[pos:pos + len(seg)]) != seg:
                        ok = False
                        break
                    pos += len(seg)
                else:
                    n = lengths[x] if x in lengths else extra[x]
                    c[x] = tuple(actual[pos:pos + n])
                    pos += n
            else:
                if pos >= len(actual) or not match_formula(x, actual[pos], b):
                    ok = False
                    break
                pos += 1
        if ok and pos == len(actual):
            yield b, c


def _compositions(total, names):
    if len(names) == 1:
        yield {names[0]: total}
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, names[1:]):
            d = {names[0]: k}
            d.update(rest)
            yield d


def _msub(big, small):
    """Multiset difference big - small, or None if small is not contained."""
    rest = list(big)
    for x in small:
        for i, y in enumerate(rest):
            if y is x:
                del rest[i]
                break
        else:
            return None
    return rest


def _match_mset_side(items, actual, bind, ctx):
    pats = [x for x in items if not isinstance(x, str)]
    cvars = [x for x in items if isinstance(x, str)]
    bound = [x for x in cvars if x in ctx]
    rest0 = list(actual)
    for x in bound:
        rest0 = _msub(rest0, ctx[x])
        if rest0 is None:
            return
    unbound = [x for x in cvars if x not in ctx]

    def assign(i, rest, b):
        if i == len(pats):
            yield rest, b
            return
        seen = set()
        for j, g in enumerate(rest):
            if g in seen:
                continue
            seen.add(g)
            b2 = dict(b)
            if match_formula(pats[i], g, b2):
                yield from assign(i + 1, rest[:j] + rest[j + 1:], b2)

    for rest, b in assign(0, rest0, bind):
        if not unbound:
            if not rest:
                yield b, ctx
        elif len(unbound) == 1:
            c = dict(ctx)
            c[unbound[0]] = tuple(sorted(rest, key=str))
            yield b, c
        else:
            # split the remainder among two context variables
            idx = range(len(rest))
            for r in range(len(rest) + 1):
                for pick in combinations(idx, r):
                    c = dict(ctx)
                    c[unbound[0]] = tuple(sorted((rest[i] for i in pick), key=str))
                    c[unbound[1]] = tuple(sorted((rest[i] for i in idx if i not in pick), key=str))
                    yield b, c


def _mset_eq(a, b):
    return len(a) == len(b) and _msub(a, b) == []


def iter_matches(rule: Rule, concl, prems=None, multiset=False, lengths=None):
    """Yield every binding (formula vars, context vars) under which ``rule``
    has conclusion ``concl`` and, if given, premises ``prems``.

    ``concl`` and each premise are (antecedent, succedent) tuples.  For
    ordered sides ``lengths`` fixes context lengths so matching is linear;
    missing lengths are searched for.
    """
    lengths = lengths or {}
    sides = [(rule.conclusion.ante, concl[0]), (rule.conclusion.succ, concl[1])]
    if prems is not None:
        if len(prems) != len(rule.premises):
            return
        for sch, seq in zip(rule.premises, prems):
            sides.append((sch.ante, seq[0]))
            sides.append((sch.succ, seq[1]))

    def solve(remaining, bind, ctx):
        if not remaining:
            yield bind, ctx
            return
        # prefer a side with at most one unbound context variable
        pick = 0
        for i, (items, _) in enumerate(remaining):
            if len({x for x in items if isinstance(x, str) and x not in ctx}) <= 1:
                pick = i
                break
        items, actual = remaining[pick]
        rest = remaining[:pick] + remaining[pick + 1:]
        gen = _match_mset_side(items, actual, bind, ctx) if multiset else \
            _match_seq_side(items, actual, bind, ctx, lengths)
        for b, c in gen:
            yield from solve(rest, b, c)

    yield from solve(sides, {}, {})


def match_rule(rule: Rule, concl, prems, multiset=False, lengths=None):
    """First binding from :func:`iter_matches`, or None."""
    for got in iter_matches(rule, concl, prems, multiset, lengths):
        return got
    return None


def instantiate(schema: Schema, bind: dict, ctx: dict):
    return instantiate_side(schema.ante, bind, ctx), instantiate_side(schema.succ, bind, ctx)
