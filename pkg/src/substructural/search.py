"""Backward cut-free proof search, classical oracles, BPC inversion and the
empty-succedent checks for the classical substructural calculi."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .calculus import (
    Calculus, Rule, Schema, drop_cut, instantiate, iter_matches, make_bpc, make_cfl, make_fl,
)
from .formula import (
    BOT, ONE, TOP, Formula, atom, imp, in_language,
)
from .proof import Proof, ProofBuilder, check_proof

__all__ = [
    "decide_cutfree", "Verdict", "BudgetExceeded", "classical_valid", "craig_disjunct_select",
    "bpc_invert_implication", "reclassify_cfl_to_fl", "verify_empty_succedent_free",
    "static_empty_succedent_check", "zero_free_formulas", "TheoremViolation", "AtomCapExceeded",
    "Searcher",
]

ATOM_CAP = 24


class BudgetExceeded(RuntimeError):
    pass


class AtomCapExceeded(ValueError):
    pass


class TheoremViolation(AssertionError):
    """A proof that should be single-conclusion is not."""


# classical oracles ---------------------------------------------------------------

def _columns(n: int):
    # truth column of atom i over all 2^n valuations, packed into one int
    N = 1 << n
    full = (1 << N) - 1
    cols = []
    for i in range(n):
        h = 1 << i
        col = ((1 << h) - 1) << h
        width = 2 * h
        while width < N:
            col |= col << width
            width *= 2
        cols.append(col & full)
    return cols, full


def _truth_table(f: Formula, cols: dict, full: int) -> int:
    memo: dict = {}
    stack = [(f, False)]
    while stack:
        g, done = stack.pop()
        if g in memo:
            continue
        k = g.kind
        if k == "atom":
            memo[g] = cols[g]
        elif g.a is None:
            memo[g] = full if k in ("top", "one") else 0
        elif not done:
            stack.append((g, True))
            stack.append((g.a, False))
            stack.append((g.b, False))
        else:
            x, y = memo[g.a], memo[g.b]
            if k == "and":
                memo[g] = x & y
            elif k == "or":
                memo[g] = x | y
            elif k == "imp":
                memo[g] = (full ^ x) | y
            else:
                raise ValueError(f"connective {k} has no classical reading")
    return memo[f]


def classical_valid(f: Formula, cap: int = ATOM_CAP) -> bool:
    """Truth-table validity of a formula of L (1 read as verum).  All
    valuations are evaluated at once as bit columns."""
    atoms = sorted(f.atoms(), key=lambda a: (a.name, a.idx))
    if len(atoms) > cap:
        raise AtomCapExceeded(f"{len(atoms)} atoms exceed the cap {cap}")
    cols, full = _columns(len(atoms))
    return _truth_table(f, dict(zip(atoms, cols)), full) == full


def craig_disjunct_select(a1: Formula, a2: Formula, b1: Formula, b2: Formula, cap: int = ATOM_CAP) -> str:
    """``Left`` if a1 -> a2 is valid, else ``Right`` if b1 -> b2 is, else ``Neither``."""
    if (a1.atoms() | a2.atoms()) & (b1.atoms() | b2.atoms()):
        raise ValueError("the two implications share atoms")
    if classical_valid(imp(a1, a2), cap):
        return "Left"
    if classical_valid(imp(b1, b2), cap):
        return "Right"
    return "Neither"


# generic backward search -------------------------------------------------------------

@dataclass
class Verdict:
    status: str                     # Provable | Refuted | BudgetExceeded
    proof: Proof | None = None
    explored: int = 0

    @property
    def provable(self):
        return self.status == "Provable"


def _merge_for_exchange(rule: Rule) -> tuple[Rule, tuple]:
    """Under exchange, context variables on one side of the conclusion that
    occur in exactly the same premise sides carry the same information;
    keep the first of each such group and fix the rest to be empty."""
    sig: dict = {}
    for k, sch in enumerate(rule.premises):
        for side, items in (("a", sch.ante), ("s", sch.succ)):
            for x in items:
                if isinstance(x, str):
                    sig.setdefault(x, set()).add((k, side))
    drop = []
    for items in (rule.conclusion.ante, rule.conclusion.succ):
        seen = {}
        for x in items:
            if isinstance(x, str):
                key = frozenset(sig.get(x, ()))
                if key in seen and seen[key] != x:
                    drop.append(x)
                else:
                    seen.setdefault(key, x)
    if not drop:
        return rule, ()
    cut = lambda items: tuple(x for x in items if x not in drop)
    prem = tuple(Schema(cut(s.ante), cut(s.succ)) for s in rule.premises)
    con = Schema(cut(rule.conclusion.ante), cut(rule.conclusion.succ))
    return replace(rule, premises=prem, conclusion=con), tuple(drop)


def _rule_order(rule: Rule) -> int:
    if rule.group in ("axiom", "extra"):
        return 0
    if rule.group == "structural":
        return 3
    if any(not isinstance(x, str) for x in rule.conclusion.succ):
        return 1
    return 2


class Searcher:
    """Memoised backward search in a cut-free sequence calculus.

    With exchange the sequents are kept in a canonical order (sorted by
    printed form) and the needed exchange steps are inserted while the proof
    is assembled.  Without contraction every premise is strictly smaller than
    its conclusion, so failure is exact; with contraction the search is
    depth bounded and reports that bound instead of a refutation."""

    def __init__(self, c: Calculus, budget: int = 200_000, depth: int = 40):
        if c.flavor == "multiset":
            raise ValueError("use the BPC search for multiset calculi")
        self.c = drop_cut(c) if c.has_cut else c
        self.exch = "e" in c.S
        self.contraction = "c" in c.S
        self.multi = c.flavor == "multi"
        self.budget = budget
        self.depth = depth
        rules = [r for r in self.c.rules.values() if r.name not in ("Le", "Re")]
        if c.flavor == "single":
            rules = [r for r in rules if r.single_instance]
        rules.sort(key=_rule_order)
        self.rules = []
        for r in rules:
            sr, dropped = _merge_for_exchange(r) if self.exch else (r, ())
            self.rules.append((r, sr, dropped))
        self.b = ProofBuilder(self.c.name, self.c.flavor, cap=1 << 40)
        self.memo: dict = {}
        self.explored = 0
        self.cutoff = False

    def canon(self, ante, succ):
        if self.exch:
            ante = tuple(sorted(ante, key=str))
            if self.multi:
                succ = tuple(sorted(succ, key=str))
        return tuple(ante), tuple(succ)

    def _permute(self, p: int, have, want) -> int:
        if have == want:
            return p
        b = self.b
        cur_a, cur_s = list(have[0]), list(have[1])
        for i, f in enumerate(want[0]):
            j = next(j for j in range(i, len(cur_a)) if cur_a[j] is f)
            while j > i:
                cur_a[j - 1], cur_a[j] = cur_a[j], cur_a[j - 1]
                p = b.add("Le", (p,), tuple(cur_a), tuple(cur_s),
                          {"G": j - 1, "S": len(cur_a) - j - 1, "D": len(cur_s)})
                j -= 1
        for i, f in enumerate(want[1]):
            j = next(j for j in range(i, len(cur_s)) if cur_s[j] is f)
            while j > i:
                cur_s[j - 1], cur_s[j] = cur_s[j], cur_s[j - 1]
                p = b.add("Re", (p,), tuple(cur_a), tuple(cur_s),
                          {"G": len(cur_a), "D": j - 1, "L": len(cur_s) - j - 1})
                j -= 1
        return p

    def prove(self, seq, level: int = 0):
        key = self.canon(*seq)
        if key in self.memo:
            return self.memo[key]
        if self.contraction and level > self.depth:
            self.cutoff = True
            return None
        self.explored += 1
        if self.explored > self.budget:
            raise BudgetExceeded(f"explored more than {self.budget} sequents")
        self.memo[key] = None       # guards loops under contraction
        lang = self.c.lang
        single = self.c.flavor == "single"
        result = None
        for rule, srule, dropped in self.rules:
            for bind, ctx in iter_matches(srule, key, None, multiset=self.exch):
                full = dict(ctx)
                for x in dropped:
                    full[x] = ()
                prems = [instantiate(s, bind, full) for s in rule.premises]
                if single and any(len(s) > 1 for _, s in prems):
                    continue
                if any(not in_language(f, lang) for a, s in prems for f in a + s):
                    continue
                ids = []
                for ps in prems:
                    got = self.prove(ps, level + 1)
                    if got is None:
                        break
                    ids.append(self._permute(got, self.canon(*ps), ps))
                else:
                    concl = instantiate(rule.conclusion, bind, full)
                    inst = {v: len(full[v]) for v in full}
                    node = self.b.add(rule.name, ids, concl[0], concl[1], inst)
                    result = self._permute(node, concl, key)
                    break
            if result is not None:
                break
        if result is None and self.contraction:
            del self.memo[key]      # may only have failed because of the loop guard
            self.cutoff = True
            return None
        self.memo[key] = result
        return result

    def decide(self, ante, succ) -> Verdict:
        seq = (tuple(ante), tuple(succ))
        start = self.explored
        try:
            got = self.prove(seq)
        except BudgetExceeded:
            return Verdict("BudgetExceeded", None, self.explored - start)
        if got is not None:
            root = self._permute(got, self.canon(*seq), seq)
            return Verdict("Provable", self.b.proof(root), self.explored - start)
        if self.cutoff:
            return Verdict("BudgetExceeded", None, self.explored - start)
        return Verdict("Refuted", None, self.explored - start)


# BPC search --------------------------------------------------------------------------

def _bkey(ante, succ):
    return tuple(sorted(ante, key=str)), tuple(sorted(succ, key=str))


def _subformulas(fs):
    out = set()
    stack = list(fs)
    while stack:
        f = stack.pop()
        if f in out:
            continue
        out.add(f)
        if f.a is not None:
            stack += [f.a, f.b]
    return sorted(out, key=str)


class _BPCSearch:
    """Depth-bounded search for cut-free BPC proofs: initial sequents, the
    invertible rules for & and |, then R->, F&, F| and Tr, the cut formula
    of Tr ranging over subformulas of the goal."""

    def __init__(self, budget: int, depth: int):
        self.b = ProofBuilder("BPC", "multiset", cap=1 << 40)
        self.budget = budget
        self.depth = depth
        self.memo: dict = {}
        self.explored = 0
        self.cutoff = False
        self.cands: list = []

    def add(self, rule, prems, ante, succ):
        a, s = _bkey(ante, succ)
        return self.b.add(rule, prems, a, s)

    def prove(self, seq, level, path):
        key = _bkey(*seq)
        if key in self.memo:
            return self.memo[key]
        if key in path:
            return None
        if level > self.depth:
            self.cutoff = True
            return None
        self.explored += 1
        if self.explored > self.budget:
            raise BudgetExceeded(f"explored more than {self.budget} sequents")
        got = self._expand(key, level, path | {key})
        if got is not None or not self.cutoff:
            self.memo[key] = got
        return got

    def _expand(self, key, level, path):
        ante, succ = key
        P = lambda a, s: self.prove((a, s), level + 1, path)
        # initial sequents
        for f in ante:
            if any(g is f for g in succ):
                return self.add("id", (), ante, succ)
        if any(f is TOP for f in succ):
            return self.add("top", (), ante, succ)
        if any(f is BOT for f in ante):
            return self.add("bot", (), ante, succ)
        # invertible rules
        for i, f in enumerate(ante):
            rest = ante[:i] + ante[i + 1:]
            if f.kind == "and":
                p = P(rest + (f.a, f.b), succ)
                return None if p is None else self.add("Land", (p,), ante, succ)
            if f.kind == "or":
                p = P(rest + (f.a,), succ)
                q = p is not None and P(rest + (f.b,), succ)
                return None if q is None or p is None else self.add("Lor", (p, q), ante, succ)
        for i, f in enumerate(succ):
            rest = succ[:i] + succ[i + 1:]
            if f.kind == "and":
                p = P(ante, rest + (f.a,))
                q = p is not None and P(ante, rest + (f.b,))
                return None if q is None or p is None else self.add("Rand", (p, q), ante, succ)
            if f.kind == "or":
                p = P(ante, rest + (f.a, f.b))
                return None if p is None else self.add("Ror", (p,), ante, succ)
        # implications on the right
        for f in succ:
            if f.kind != "imp":
                continue
            p = P(ante + (f.a,), (f.b,))
            if p is not None:
                return self.add("Rimp", (p,), ante, succ)
            if f.b.kind == "and":
                p = P(ante, (imp(f.a, f.b.a),))
                q = p is not None and P(ante, (imp(f.a, f.b.b),))
                if p is not None and q is not None:
                    return self.add("Fand", (p, q), ante, succ)
            if f.a.kind == "or":
                p = P(ante, (imp(f.a.a, f.b),))
                q = p is not None and P(ante, (imp(f.a.b, f.b),))
                if p is not None and q is not None:
                    return self.add("For", (p, q), ante, succ)
            for mid in self.cands:
                if mid is f.a or mid is f.b:
                    continue
                p = P(ante, (imp(f.a, mid),))
                q = p is not None and P(ante, (imp(mid, f.b),))
                if p is not None and q is not None:
                    return self.add("Tr", (p, q), ante, succ)
        return None


def _decide_bpc(c: Calculus, ante, succ, budget, depth) -> Verdict:
    s = _BPCSearch(budget, depth)
    s.cands = _subformulas(tuple(ante) + tuple(succ))
    if "ebpc" in c.rules:
        raise ValueError("search supports BPC only")
    try:
        got = s.prove((tuple(ante), tuple(succ)), 0, frozenset())
    except BudgetExceeded:
        return Verdict("BudgetExceeded", None, s.explored)
    if got is not None:
        return Verdict("Provable", s.b.proof(got), s.explored)
    return Verdict("BudgetExceeded" if s.cutoff else "Refuted", None, s.explored)


def decide_cutfree(c: Calculus, seq, budget: int = 200_000, depth: int = 12) -> Verdict:
    """Cut-free provability of ``seq`` (an (antecedent, succedent) pair).

    Returns a :class:`Verdict`; ``Refuted`` is only claimed after the whole
    search space was exhausted."""
    ante, succ = seq
    if c.flavor == "multiset":
        return _decide_bpc(c, ante, succ, budget, depth)
    return Searcher(c, budget, depth=max(depth, 40)).decide(ante, succ)


# BPC inversion -------------------------------------------------------------------------

def bpc_invert_implication(proof: Proof) -> Proof:
    """From a cut-free BPC proof of => A -> B build a BPC proof of A => B."""
    rep = check_proof(make_bpc(), proof)
    if not rep.valid:
        raise ValueError(f"not a BPC proof: {rep.first_violation}")
    if not rep.cut_free:
        raise ValueError("proof uses cut")
    ante, succ = proof.end
    if ante or len(succ) != 1 or succ[0].kind != "imp":
        raise ValueError("endsequent must be => A -> B")
    b = ProofBuilder("BPC", "multiset")
    add = lambda rule, prems, a, s: b.add(rule, prems, *_bkey(a, s))
    sub_cache: dict = {}

    def sub(i):
        # proof of the subtree below node i, copied into b
        if i in sub_cache:
            return sub_cache[i]
        n = proof.nodes[i]
        out = b.add(n.rule, tuple(sub(j) for j in n.premises), n.ante, n.succ, dict(n.inst))
        sub_cache[i] = out
        return out

    memo: dict = {}

    def inv(i):
        if i in memo:
            return memo[i]
        n = proof.nodes[i]
        (f,) = n.succ
        a, c = f.a, f.b
        if n.rule == "Rimp":
            out = sub(n.premises[0])
        elif n.rule == "Tr":
            p, q = (proof.nodes[j] for j in n.premises)
            mid = p.succ[0].b
            out = add("cut", (inv(n.premises[0]), inv(n.premises[1])), (a,), (c,))
            assert b.seq(out) == _bkey((a,), (c,)) and mid is q.succ[0].a
        elif n.rule == "Fand":
            out = add("Rand", (inv(n.premises[0]), inv(n.premises[1])), (a,), (c,))
        elif n.rule == "For":
            out = add("Lor", (inv(n.premises[0]), inv(n.premises[1])), (a,), (c,))
        else:
            raise ValueError(f"unexpected last rule {n.rule} for => A -> B")
        memo[i] = out
        return out

    return b.proof(inv(proof.root))


# the classical calculi and empty succedents ----------------------------------------------

def reclassify_cfl_to_fl(proof: Proof) -> Proof:
    """Re-read a cut-free CFL_ew proof of a single-conclusion 0-free sequent
    as an FL_ew proof."""
    cfl = drop_cut(make_cfl("eio"))
    rep = check_proof(cfl, proof)
    if not rep.valid:
        raise ValueError(f"not a cut-free CFL_ew proof: {rep.first_violation}")
    ante, succ = proof.end
    if len(succ) != 1:
        raise ValueError("endsequent must have exactly one succedent formula")
    if any(f.kinds() & {"zero", "bot"} for f in ante + succ):
        raise ValueError("endsequent is not 0-free")
    for i, n in enumerate(proof.nodes):
        if len(n.succ) > 1:
            raise TheoremViolation(f"node {i} has {len(n.succ)} succedent formulas")
    fl = make_fl("eio")
    out = proof.retag(fl.name, "single")
    rep = check_proof(fl, out)
    if not rep.valid:
        raise TheoremViolation(f"FL_ew rejects node {rep.first_violation}")
    return out


def static_empty_succedent_check(c: Calculus | None = None) -> dict:
    """Schema-level argument: no initial sequent of c has a 0-free instance
    with empty succedent, and every rule whose conclusion can have an empty
    succedent has a premise whose succedent is then empty too."""
    c = c or drop_cut(make_cfl("eio"))
    out = {}
    for name, r in c.rules.items():
        con = r.conclusion
        has_pat = any(not isinstance(x, str) for x in con.succ)
        if r.arity == 0:
            if has_pat:
                ok = True
            else:
                ok = any(not isinstance(x, str) and (x.kinds() & {"zero", "bot"}) for x in con.ante)
        elif has_pat:
            ok = True
        else:
            cvars = {x for x in con.succ if isinstance(x, str)}
            ok = any(all(isinstance(x, str) and x in cvars for x in p.succ) for p in r.premises)
            # premises mention no formula variable foreign to the conclusion
            fv = set()
            for x in con.ante + con.succ:
                if not isinstance(x, str):
                    fv |= {a.name for a in x.atoms()}
            for p in r.premises:
                for x in p.ante + p.succ:
                    if not isinstance(x, str) and not {a.name for a in x.atoms()} <= fv:
                        ok = False
        out[name] = ok
    return out


def zero_free_formulas(max_size: int, atoms=("p", "q")) -> dict:
    """All 0-free formulas over the atoms and 1 with &, |, ->, *, grouped by size."""
    by = {1: [atom(a) for a in atoms] + [ONE]}
    for s in range(3, max_size + 1, 2):
        out = []
        for ls in range(1, s - 1, 2):
            rs = s - 1 - ls
            for x in by.get(ls, ()):
                for y in by.get(rs, ()):
                    for kind in ("and", "or", "imp", "fus"):
                        out.append(Formula(kind, x, y))
        by[s] = out
    return by


def _multisets(by_size: dict, cap: int):
    # multisets of formulas with total size <= cap, as sorted tuples
    items = [f for s in sorted(by_size) for f in by_size[s]]
    items.sort(key=lambda f: (f.size, str(f)))

    def rec(start, room):
        yield ()
        for i in range(start, len(items)):
            f = items[i]
            if f.size > room:
                break
            for rest in rec(i, room - f.size):
                yield (f,) + rest

    for ms in rec(0, cap):
        if ms:
            yield ms


@dataclass
class EmptySuccedentReport:
    checked: int
    refuted: int
    failures: list = field(default_factory=list)
    static: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.checked == self.refuted and not self.failures and all(self.static.values())


def verify_empty_succedent_free(size_cap: int = 8, atoms=("p", "q"), budget: int = 10_000_000) -> EmptySuccedentReport:
    """Search every 0-free antecedent (as a multiset; the calculus has
    exchange) of total size at most ``size_cap`` with an empty succedent in
    cut-free CFL_ew, and run the schema-level check."""
    c = drop_cut(make_cfl("eio"))
    s = Searcher(c, budget)
    by = zero_free_formulas(min(size_cap, 2 * size_cap), atoms)
    rep = EmptySuccedentReport(0, 0, [], static_empty_succedent_check(c))
    for gamma in _multisets(by, size_cap):
        v = s.decide(gamma, ())
        rep.checked += 1
        if v.status == "Refuted":
            rep.refuted += 1
        else:
            rep.failures.append((gamma, v.status))
    return rep
