"""Explicit WL proof objects: evaluation proofs, monotone implications,
distributivity, the clique/colouring formulas, and proof translations."""

from __future__ import annotations

from dataclasses import replace

from .calculus import make_fl_bot, make_wl
from .families import gen_alpha, gen_beta, gen_theta_star, theta_star_blocks
from .formula import (
    BOT, ONE, TOP, Formula, atom, big_conj, big_disj, conj, disj, eval_classical, fuse,
    ldiv, subst_sigma_v, translate_t, _map_memo,
)
from .proof import Node, Proof, ProofBuilder, check_proof

__all__ = [
    "build_eval_proof", "build_monotone_proof", "build_distrib_proof", "build_fusion_intro",
    "build_theta_star_proof", "theta_star_partitions", "translate_proof_wl_to_bpc",
    "embed_wl_in_fl", "commutative_reading", "translation_bound", "ConstructionError",
    "minimal_valuation",
]


class ConstructionError(ValueError):
    pass


def _is_monotone(f: Formula) -> bool:
    return f.kinds() <= {"and", "or", "one"}


def _val(x: Formula) -> bool:
    # value of a formula over 1, falsum, &, |
    return eval_classical(x, {})


class _Eval:
    """Evaluation proofs for substituted formulas X over {1, F, &, |}:
    ``fwd(X)`` proves X => 1 or X => F, ``bwd(X)`` proves 1 => X or F => X."""

    def __init__(self, b: ProofBuilder):
        self.b = b
        self._fwd: dict = {}
        self._bwd: dict = {}

    def fwd(self, x: Formula) -> int:
        got = self._fwd.get(x)
        if got is not None:
            return got
        b = self.b
        if x is ONE or x is BOT:
            out = b.ident(x)
        elif x.kind == "and":
            if _val(x) or not _val(x.a):
                out = b.land1(self.fwd(x.a), 0, x.b)
            else:
                out = b.land2(self.fwd(x.b), 0, x.a)
        elif x.kind == "or":
            if _val(x):
                out = b.lor(self.to_one(x.a), self.to_one(x.b), 0)
            else:
                out = b.lor(self.fwd(x.a), self.fwd(x.b), 0)
        else:
            raise ConstructionError(f"unexpected {x.kind} in a substituted monotone formula")
        self._fwd[x] = out
        return out

    def to_one(self, x: Formula) -> int:
        # X => 1, passing through falsum when X is false
        p = self.fwd(x)
        if _val(x):
            return p
        return self.b.cut(p, self.b.bot((BOT,), 0, (ONE,)), 0)

    def bwd(self, x: Formula) -> int:
        got = self._bwd.get(x)
        if got is not None:
            return got
        b = self.b
        if not _val(x):
            out = b.bot((BOT,), 0, (x,))
        elif x is ONE:
            out = b.ident(ONE)
        elif x.kind == "and":
            out = b.rand(self.bwd(x.a), self.bwd(x.b))
        elif x.kind == "or":
            out = b.ror1(self.bwd(x.a), x.b) if _val(x.a) else b.ror2(self.bwd(x.b), x.a)
        else:
            raise ConstructionError(f"unexpected {x.kind} in a substituted monotone formula")
        self._bwd[x] = out
        return out


def _valuation(a: Formula, v) -> dict:
    v = dict(v)
    missing = [x for x in a.atoms() if x not in v]
    if missing:
        raise KeyError(f"valuation misses atom {missing[0]}")
    return v


def build_eval_proof(a: Formula, v) -> tuple[Proof, Proof]:
    """Proofs of A^v => c and c => A^v, where c is 1 if v makes A true and
    falsum otherwise."""
    if not _is_monotone(a):
        raise ConstructionError("build_eval_proof needs a monotone formula")
    x = subst_sigma_v(a, _valuation(a, v))
    b = ProofBuilder("WL")
    ev = _Eval(b)
    fwd, bwd = ev.fwd(x), ev.bwd(x)
    return b.proof(fwd), b.proof(bwd)


def minimal_valuation(atoms_true, a: Formula) -> dict:
    true = set(atoms_true)
    return {x: x in true for x in a.atoms()}


class _Monotone:
    """Proofs of F, A^v => A and F => A for a list F of factors x & 1, v
    being the valuation that makes exactly the factor atoms true."""

    def __init__(self, b: ProofBuilder, ev: _Eval):
        self.b = b
        self.ev = ev
        self._memo: dict = {}

    def _pad(self, p: int, factors, start: int, skip: int | None = None) -> int:
        # insert the factors (except index skip) into the antecedent, one 1w and L&2 each
        pos = start
        for j, f in enumerate(factors):
            if j == skip:
                pos += 1
                continue
            p = self.b.land2(self.b.w1(p, pos), pos, f.a)
            pos += 1
        return p

    def dagger(self, F: tuple, a: Formula, v: dict) -> int:
        key = (F, a)
        got = self._memo.get(key)
        if got is not None:
            return got
        b, n = self.b, len(F)
        x = subst_sigma_v(a, v)
        if not _val(x):
            if x is BOT:
                out = b.bot(F + (BOT,), n, (a,))
            else:
                out = b.cut(self.ev.fwd(x), b.bot(F + (BOT,), n, (a,)), n)
        elif a.kind == "atom":
            j = next(i for i, f in enumerate(F) if f.a is a)
            p = b.land1(b.ident(a), 0, ONE)
            p = b.w1(p, 1)
            # factors before j go in front, factors after j behind it
            p = self._pad(p, F[:j], 0)
            p = self._pad(p, F[j + 1:], j + 1)
            out = p
        elif a is ONE:
            out = self._pad(b.ident(ONE), F, 0)
        elif a.kind == "and":
            xa, xb = subst_sigma_v(a.a, v), subst_sigma_v(a.b, v)
            out = b.rand(b.land1(self.dagger(F, a.a, v), n, xb), b.land2(self.dagger(F, a.b, v), n, xa))
        elif a.kind == "or":
            out = b.lor(b.ror1(self.dagger(F, a.a, v), a.b), b.ror2(self.dagger(F, a.b, v), a.a), n)
        else:
            raise ConstructionError(f"{a} is not monotone")
        self._memo[key] = out
        return out

    def core(self, F, a: Formula) -> int:
        """F => A as a list antecedent."""
        F = tuple(F)
        for f in F:
            if not (f.kind == "and" and f.b is ONE and f.a.kind == "atom"):
                raise ConstructionError(f"factor {f} is not of the form x & 1")
        v = minimal_valuation([f.a for f in F], a)
        x = subst_sigma_v(a, v)
        if not _val(x):
            raise ConstructionError("the factor atoms do not imply the formula classically")
        star = self.b.cut(self.b.one(), self.ev.bwd(x), 0)
        return self.b.cut(star, self.dagger(F, a, v), len(F))


def build_monotone_proof(I, a: Formula) -> Proof:
    """WL proof of (x_1 & 1) * ... * (x_k & 1) => A for the atoms of I in order."""
    I = list(I)
    if not I:
        raise ConstructionError("need a nonempty atom list")
    if not _is_monotone(a) or "one" in a.kinds():
        raise ConstructionError("A must be monotone")
    b = ProofBuilder("WL")
    m = _Monotone(b, _Eval(b))
    F = [conj(x, ONE) for x in I]
    p = m.core(F, a)
    return b.proof(b.fold(p, 0, len(F)))


# distributivity ---------------------------------------------------------------

def _choices(n: int):
    # binary counter, first factor as the most significant bit; bit 0 picks A_i
    for t in range(1 << n):
        yield tuple((t >> (n - 1 - i)) & 1 for i in range(n))


def _disjuncts(pairs):
    return [fuse([pairs[i][c] for i, c in enumerate(ch)]) for ch in _choices(len(pairs))]


def _into_disjunction(b: ProofBuilder, p: int, items, t: int) -> int:
    """From Γ => items[t] derive Γ => items[0] | (items[1] | ...)."""
    m = len(items)
    if t < m - 1:
        p = b.ror1(p, big_disj(items[t + 1:]))
    for s in range(t - 1, -1, -1):
        p = b.ror2(p, items[s])
    return p


def _fusion_chain(b: ProofBuilder, leaves) -> int:
    # leaves: proofs of Γ_i => D_i; result Γ_1..Γ_n => D_1 * (D_2 * ...)
    p = leaves[-1]
    for q in reversed(leaves[:-1]):
        p = b.rfus(q, p)
    return p


def _lor_fan(b: ProofBuilder, proofs, pos: int) -> int:
    # proofs of ..., X_t, ... => C for each disjunct, combined into the right-nested disjunction
    p = proofs[-1]
    for q in reversed(proofs[:-1]):
        p = b.lor(q, p, pos)
    return p


def _distrib_fwd(b: ProofBuilder, pairs, memo: dict | None = None) -> int:
    """(A_1 | B_1) * ... * (A_n | B_n) => the disjunction over all choices."""
    n = len(pairs)
    items = _disjuncts(pairs)
    leaves = {}
    for t, ch in enumerate(_choices(n)):
        D = [pairs[i][c] for i, c in enumerate(ch)]
        p = _fusion_chain(b, [b.ident(d) for d in D])
        leaves[ch] = _into_disjunction(b, p, items, t)

    # fan in with L| from the last factor to the first
    def fan(prefix):
        if len(prefix) == n:
            return leaves[prefix]
        return b.lor(fan(prefix + (0,)), fan(prefix + (1,)), len(prefix))

    return b.fold(fan(()), 0, n)


def _distrib_bwd(b: ProofBuilder, pairs) -> int:
    n = len(pairs)
    per = []
    for ch in _choices(n):
        leaves = []
        for i, c in enumerate(ch):
            A, B = pairs[i]
            leaves.append(b.ror1(b.ident(A), B) if c == 0 else b.ror2(b.ident(B), A))
        per.append(b.fold(_fusion_chain(b, leaves), 0, n))
    return _lor_fan(b, per, 0)


def build_distrib_proof(pairs, direction: str = "fwd") -> Proof:
    """Fusion of disjunctions against the disjunction of fusions, in
    either direction.  Disjuncts follow the binary counter on choices with
    the first factor most significant and A_i as bit 0."""
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        raise ConstructionError("need at least one pair")
    b = ProofBuilder("WL")
    if direction == "fwd":
        root = _distrib_fwd(b, pairs)
    elif direction == "bwd":
        root = _distrib_bwd(b, pairs)
    else:
        raise ValueError("direction must be 'fwd' or 'bwd'")
    return b.proof(root)


def build_fusion_intro(a: Formula, c: Formula) -> Proof:
    b = ProofBuilder("WL")
    pf = b.proof(b.rfus(b.ident(a), b.ident(c)))
    top = pf.nodes[pf.root]
    # two separate axioms even when a is c, so the shape never varies
    nodes = [Node("id", (), (a,), (a,), ()), Node("id", (), (c,), (c,), ()), replace(top, premises=(0, 1))]
    return Proof(nodes, 2, pf.calculus, pf.flavor, dict(pf.params))


# the clique/colouring formulas ---------------------------------------------------------

def theta_star_partitions(n: int, k: int):
    """For every choice vector (M = p-factors, N = q-factors) in the
    distributivity order, the two classical implications and the side
    picked by disjunct selection."""
    from .search import craig_disjunct_select
    P, S, R = theta_star_blocks(n, k)
    alpha = translate_t(gen_alpha(n, k, base=1, unit=ONE))
    beta = translate_t(gen_beta(n, k + 1, base=1, unit=ONE))
    s_cov = big_conj(disj(atom("s", *il), atom("s'", *il)) for il in S)
    r_cov = big_conj(disj(atom("r", *il), atom("r'", *il)) for il in R)
    out = []
    for ch in _choices(len(P)):
        M = [P[i] for i, c in enumerate(ch) if c == 0]
        N = [P[i] for i, c in enumerate(ch) if c == 1]
        a1 = conj(big_conj(atom("p", *ij) for ij in M), s_cov)
        b1 = conj(big_conj(atom("q", *ij) for ij in N), r_cov)
        side = craig_disjunct_select(a1, alpha, b1, beta)
        out.append((ch, M, N, (a1, alpha), (b1, beta), side))
    return out


def build_theta_star_proof(n: int, k: int, cap: int | None = None) -> Proof:
    """WL proof of => Theta*_{n,k}.

    Each choice of p/q factors is decided by disjunct selection; the chosen
    side is proved by the monotone construction over every choice of the
    s (or r) block, collected with distributivity and L|, closed by R\\;
    the unused factors are padded in with 1w and L&2 at their slots, and
    the outer fan-in runs over all 2^((n-1)^2) choices."""
    P, S, R = theta_star_blocks(n, k)
    b = ProofBuilder("WL", cap=cap)
    ev = _Eval(b)
    mono = _Monotone(b, ev)
    alpha = gen_alpha(n, k, base=1, unit=ONE)
    beta = gen_beta(n, k + 1, base=1, unit=ONE)
    u1 = lambda x, y, idx: (conj(atom(x, *idx), ONE), conj(atom(y, *idx), ONE))
    ppairs = [u1("p", "q", ij) for ij in P]
    spairs = [u1("s", "s'", il) for il in S]
    rpairs = [u1("r", "r'", il) for il in R]
    sblock = fuse([disj(*pr) for pr in spairs])
    rblock = fuse([disj(*pr) for pr in rpairs])
    left, right = ldiv(sblock, alpha), ldiv(rblock, beta)

    dist: dict = {}

    def side_proof(G, pairs, goal):
        # the chosen p (or q) factors G prove block \ goal
        if not pairs:
            p = b.w1(mono.core(G, goal), 0)
        else:
            key = id(pairs)
            if key not in dist:
                dist[key] = _distrib_fwd(b, pairs)
            per = []
            for ch in _choices(len(pairs)):
                F = tuple(pairs[i][c] for i, c in enumerate(ch)) + tuple(G)
                per.append(b.fold(mono.core(F, goal), 0, len(pairs)))
            p = b.cut(dist[key], _lor_fan(b, per, 0), 0)
        return b.rldiv(p)

    per_choice = []
    for ch, M, N, _, _, side in theta_star_partitions(n, k):
        if side == "Neither":
            raise ConstructionError(f"no provable side for choice {ch}")
        if side == "Left":
            G = tuple(ppairs[i][0] for i, c in enumerate(ch) if c == 0)
            p = b.ror1(side_proof(G, spairs, alpha), right)
            pad = [(i, ppairs[i][1]) for i, c in enumerate(ch) if c == 1]
        else:
            G = tuple(ppairs[i][1] for i, c in enumerate(ch) if c == 1)
            p = b.ror2(side_proof(G, rpairs, beta), left)
            pad = [(i, ppairs[i][0]) for i, c in enumerate(ch) if c == 0]
        for i, f in pad:                    # lexicographic slot i
            p = b.land2(b.w1(p, i), i, f.a)
        per_choice.append(b.fold(p, 0, len(P)))
    root = b.rldiv(b.cut(_distrib_fwd(b, ppairs), _lor_fan(b, per_choice, 0), 0))
    proof = b.proof(root, {"n": n, "k": k})
    assert proof.end == ((), (gen_theta_star(n, k),))
    return proof


# translations -------------------------------------------------------------------------

def _bseq(ante, succ):
    return tuple(sorted(ante, key=str)), tuple(sorted(succ, key=str))


class _BPC:
    def __init__(self, b: ProofBuilder):
        self.b = b

    def add(self, rule, prems, ante, succ):
        a, s = _bseq(ante, succ)
        return self.b.add(rule, prems, a, s)

    def weaken_left(self, p: int, w: Formula) -> int:
        # cut Γ => A against the initial sequent W, A => A
        a, s = self.b.seq(p)
        (x,) = s
        ax = self.add("id", (), (w, x), (x,))
        return self.add("cut", (p, ax), a + (w,), (x,))

    def weaken_right(self, p: int, w: Formula) -> int:
        a, s = self.b.seq(p)
        (x,) = s
        ax = self.add("id", (), (x,), (x, w))
        return self.add("cut", (p, ax), a, (x, w))


def translation_bound(proof: Proof) -> int:
    """Upper bound on the size of the BPC image: each node costs at most
    3 + 2m nodes, m the largest antecedent length."""
    m = max((len(n.ante) for n in proof.nodes), default=0)
    return len(proof.nodes) * (3 + 2 * m)


def translate_proof_wl_to_bpc(proof: Proof) -> Proof:
    """BPC proof of the translated endsequent, node by node; the weakenings
    the induction needs are spelled out as cuts against initial sequents."""
    rep = check_proof(make_wl(), proof)
    if not rep.valid:
        raise ConstructionError(f"not a WL proof: node {rep.first_violation}")
    b = ProofBuilder("BPC", "multiset")
    B = _BPC(b)
    T: dict = {}
    img = []
    tr = lambda f: T.setdefault(f, translate_t(f))
    for i, n in enumerate(proof.nodes):
        if not n.succ:
            raise ConstructionError(f"node {i} has an empty succedent")
        ante = tuple(tr(f) for f in n.ante)
        (x,) = (tr(f) for f in n.succ)
        pr = [img[j] for j in n.premises]
        pn = [proof.nodes[j] for j in n.premises]
        inst = dict(n.inst)
        r = n.rule
        if r == "id":
            q = B.add("id", (), ante, (x,))
        elif r == "one":
            q = B.add("top", (), (), (TOP,))
        elif r == "bot":
            q = B.add("bot", (), ante, (x,))
        elif r == "1w":
            q = B.weaken_left(pr[0], TOP)
        elif r in ("Land1", "Land2"):
            g = inst["G"]
            c = n.ante[g]
            other = c.b if r == "Land1" else c.a
            q = B.weaken_left(pr[0], tr(other))
            q = B.add("Land", (q,), ante, (x,))
        elif r == "Lfus":
            q = B.add("Land", (pr[0],), ante, (x,))
        elif r == "Lor":
            q = B.add("Lor", tuple(pr), ante, (x,))
        elif r == "Rand":
            q = B.add("Rand", tuple(pr), ante, (x,))
        elif r in ("Ror1", "Ror2"):
            other = n.succ[0].b if r == "Ror1" else n.succ[0].a
            q = B.add("Ror", (B.weaken_right(pr[0], tr(other)),), ante, (x,))
        elif r == "Rfus":
            g1, g2 = pn[0].ante, pn[1].ante
            q1, q2 = pr
            for f in g2:
                q1 = B.weaken_left(q1, tr(f))
            for f in g1:
                q2 = B.weaken_left(q2, tr(f))
            q = B.add("Rand", (q1, q2), ante, (x,))
        elif r == "Rldiv":
            q = B.add("Rimp", (pr[0],), ante, (x,))
        elif r == "cut":
            q = B.add("cut", tuple(pr), ante, (x,))
        else:
            raise ConstructionError(f"rule {r} has no BPC image")
        img.append(q)
    return b.proof(img[proof.root], dict(proof.params))


def embed_wl_in_fl(proof: Proof) -> Proof:
    """The same nodes, revalidated as an FL_bot proof.  ``params['bot_free_end']``
    records whether the endsequent avoids falsum, in which case the proof's
    endsequent is also an FL theorem."""
    rep = check_proof(make_wl(), proof)
    if not rep.valid:
        raise ConstructionError(f"not a WL proof: node {rep.first_violation}")
    c = make_fl_bot()
    out = proof.retag(c.name)
    rep2 = check_proof(c, out)
    if not rep2.valid:
        raise ConstructionError(f"embedding failed at {rep2.first_violation}")
    ante, succ = out.end
    out.params["bot_free_end"] = int(all("bot" not in f.kinds() for f in ante + succ))
    return out


def commutative_reading(proof: Proof) -> Proof:
    """Read a WL proof in FL_e_bot: left division becomes implication and
    R\\ becomes R->."""
    memo: dict = {}

    def tr(f):
        return _map_memo(f, lambda g: g, lambda g, x, y: Formula("imp" if g.kind == "ldiv" else g.kind, x, y), memo)

    nodes = []
    for n in proof.nodes:
        if n.rule in ("Lldiv", "Lrdiv", "Rrdiv"):
            raise ConstructionError(f"rule {n.rule} has no commutative reading here")
        rule = "Rimp" if n.rule == "Rldiv" else n.rule
        inst = n.inst
        if n.rule == "Rldiv":
            inst = tuple(sorted(dict(n.inst, D=0).items()))
        nodes.append(Node(rule, n.premises, tuple(map(tr, n.ante)), tuple(map(tr, n.succ)), inst))
    return Proof(nodes, proof.root, "FL_e_bot", "single", dict(proof.params))
