"""Cut elimination for single-conclusion calculi without contraction.

Each cut is pushed upwards: first through the left proof while its cut
formula is not principal there, then through the right proof, and finally
reduced on the principal formula.  Rules are handled through their schemata,
so a permutation step only rewrites one context variable and re-instantiates.
"""

from __future__ import annotations

import sys

from .calculus import Calculus, drop_cut, instantiate, match_rule
from .proof import Proof, ProofBuilder, check_proof

__all__ = ["eliminate_cuts", "CutElimError"]


class CutElimError(ValueError):
    pass


class _Elim:
    def __init__(self, c: Calculus):
        self.c = c
        self.b = ProofBuilder(drop_cut(c).name, c.flavor, cap=1 << 40)
        self._info: dict = {}
        self._memo: dict = {}

    # node access ----------------------------------------------------------------

    def seq(self, i):
        return self.b.seq(i)

    def info(self, i):
        got = self._info.get(i)
        if got is None:
            n = self.b.nodes[i]
            rule = self.c.rules[n.rule]
            prems = [self.seq(p) for p in n.premises]
            m = match_rule(rule, n.sequent, prems, lengths=dict(n.inst))
            if m is None:
                raise CutElimError(f"node {i} does not match {n.rule}")
            got = self._info[i] = (rule, m[0], m[1])
        return got

    def apply(self, rule, bind, ctx, prems):
        for k, (sch, p) in enumerate(zip(rule.premises, prems)):
            want = instantiate(sch, bind, ctx)
            if self.seq(p) != want:
                raise CutElimError(f"premise {k} of {rule.name} does not fit after permutation")
        a, s = instantiate(rule.conclusion, bind, ctx)
        return self.b.add(rule.name, prems, a, s, {v: len(ctx[v]) for v in ctx})

    # the reduction ---------------------------------------------------------------

    def cut(self, d1: int, d2: int, pos: int) -> int:
        key = (d1, d2, pos)
        got = self._memo.get(key)
        if got is None:
            got = self._memo[key] = self._cut(d1, d2, pos)
            want = self._expected(d1, d2, pos)
            assert self.seq(got) == want, (self.b.nodes[got], want)
        return got

    def _expected(self, d1, d2, pos):
        g, _ = self.seq(d1)
        a, s = self.seq(d2)
        return a[:pos] + g + a[pos + 1:], s

    def _cut(self, d1, d2, pos):
        b = self.b
        n1, n2 = b.nodes[d1], b.nodes[d2]
        gamma, (A,) = n1.ante, n1.succ
        sigma, pi = n2.ante[:pos], n2.ante[pos + 1:]
        assert n2.ante[pos] is A
        if n1.rule == "id":
            return d2
        if n2.rule == "id":
            return d1
        if n1.rule == "bot":
            g = dict(n1.inst)["G"]
            ante = sigma + gamma + pi
            return b.add("bot", (), ante, n2.succ,
                         {"G": len(sigma) + g, "S": len(ante) - len(sigma) - g - 1, "D": len(n2.succ)})
        r1, bind1, ctx1 = self.info(d1)
        if all(isinstance(x, str) for x in r1.conclusion.succ):
            return self._into_left(d1, d2, pos)
        r2, bind2, ctx2 = self.info(d2)
        where = self._locate(r2, ctx2, bind2, pos)
        if isinstance(where, tuple):
            return self._into_right(d1, d2, pos, where)
        if r2.name == "Lw":
            p = n2.premises[0]
            for k, f in enumerate(gamma):
                p = b.lw(p, pos + k, f)
            return p
        if r2.name == "Le":
            return self._through_exchange(d1, d2, pos, dict(n2.inst)["G"])
        return self._principal(d1, d2, pos, r1.name, r2.name)

    def _locate(self, rule, ctx, bind, pos):
        """(variable, offset) if antecedent slot ``pos`` lies in a context
        variable, else the index of the pattern item."""
        at = 0
        for k, x in enumerate(rule.conclusion.ante):
            width = len(ctx[x]) if isinstance(x, str) else 1
            if pos < at + width:
                return (x, pos - at) if isinstance(x, str) else k
            at += width
        raise CutElimError("cut position outside the antecedent")

    def _into_left(self, d1, d2, pos):
        rule, bind, ctx = self.info(d1)
        n2 = self.b.nodes[d2]
        sigma, pi = n2.ante[:pos], n2.ante[pos + 1:]
        A = self.seq(d1)[1][0]
        dvar = next(x for x in rule.conclusion.succ if isinstance(x, str) and ctx[x] == (A,))
        ante = rule.conclusion.ante
        g0, gl = ante[0], ante[-1]
        if not (isinstance(g0, str) and isinstance(gl, str)):
            raise CutElimError(f"cannot permute a cut above {rule.name}")
        new = dict(ctx)
        new[dvar] = n2.succ
        new[g0] = sigma + new[g0]
        new[gl] = new[gl] + pi
        prems = []
        for sch, p in zip(rule.premises, self.b.nodes[d1].premises):
            if dvar in sch.succ:
                if not (sch.ante and sch.ante[0] == g0 and sch.ante[-1] == gl):
                    raise CutElimError(f"cannot permute a cut above {rule.name}")
                prems.append(self.cut(p, d2, pos))
            else:
                prems.append(p)
        return self.apply(rule, bind, new, prems)

    def _into_right(self, d1, d2, pos, where):
        x, off = where
        rule, bind, ctx = self.info(d2)
        gamma = self.seq(d1)[0]
        new = dict(ctx)
        new[x] = ctx[x][:off] + gamma + ctx[x][off + 1:]
        prems = []
        for sch, p in zip(rule.premises, self.b.nodes[d2].premises):
            if x in sch.ante:
                at = 0
                for y in sch.ante:
                    if y == x:
                        break
                    at += len(ctx[y]) if isinstance(y, str) else 1
                prems.append(self.cut(d1, p, at + off))
            else:
                prems.append(p)
        return self.apply(rule, bind, new, prems)

    def _swap(self, p, j):
        # exchange antecedent slots j and j+1
        a, s = self.seq(p)
        a = a[:j] + (a[j + 1], a[j]) + a[j + 2:]
        return self.b.add("Le", (p,), a, s, {"G": j, "S": len(a) - j - 2, "D": len(s)})

    def _through_exchange(self, d1, d2, pos, g):
        gamma = self.seq(d1)[0]
        prem = self.b.nodes[d2].premises[0]
        if pos == g:
            # cut formula sits at g + 1 in the premise; move the other one right past Γ
            p = self.cut(d1, prem, g + 1)
            for j in range(g, g + len(gamma)):
                p = self._swap(p, j)
        else:
            p = self.cut(d1, prem, g)
            for j in range(g + len(gamma) - 1, g - 1, -1):
                p = self._swap(p, j)
        return p

    def _principal(self, d1, d2, pos, r1, r2):
        b = self.b
        n1, n2 = b.nodes[d1], b.nodes[d2]
        p1, p2 = n1.premises, n2.premises
        if r1 == "one" and r2 == "1w":
            return p2[0]
        if r1 == "0w" and r2 == "zero":
            return p1[0]
        if r1 == "Rand" and r2 == "Land1":
            return self.cut(p1[0], p2[0], pos)
        if r1 == "Rand" and r2 == "Land2":
            return self.cut(p1[1], p2[0], pos)
        if r1 == "Ror1" and r2 == "Lor":
            return self.cut(p1[0], p2[0], pos)
        if r1 == "Ror2" and r2 == "Lor":
            return self.cut(p1[0], p2[1], pos)
        if r1 == "Rfus" and r2 == "Lfus":
            return self.cut(p1[0], self.cut(p1[1], p2[0], pos + 1), pos)
        if (r1, r2) in (("Rldiv", "Lldiv"), ("Rimp", "Limp")):
            plen = dict(n2.inst)["P"]
            x = self.cut(p1[0], p2[1], plen)
            return self.cut(p2[0], x, plen)
        if r1 == "Rrdiv" and r2 == "Lrdiv":
            plen = dict(n2.inst)["P"]
            glen = len(self.seq(p1[0])[0]) - 1
            x = self.cut(p1[0], p2[1], plen)
            return self.cut(p2[0], x, plen + glen)
        if r1 == "Rw":
            if "Lw" not in self.c.rules and (pos or len(n2.ante) > 1):
                raise CutElimError("right weakening against a left rule needs left weakening")
            p = p1[0]
            sigma, pi = n2.ante[:pos], n2.ante[pos + 1:]
            for k, f in enumerate(sigma):
                p = b.lw(p, k, f)
            for f in pi:
                p = b.lw(p, len(self.seq(p)[0]), f)
            if n2.succ:
                a, _ = self.seq(p)
                p = b.add("Rw", (p,), a, n2.succ, {"G": len(a), "D": 0, "L": 0})
            return p
        raise CutElimError(f"no reduction for {r1} against {r2}")


def eliminate_cuts(proof: Proof, c: Calculus) -> Proof:
    """Cut-free proof of the same endsequent in ``drop_cut(c)``."""
    if c.flavor != "single":
        raise CutElimError("cut elimination covers single-conclusion calculi only")
    if "c" in c.S:
        raise CutElimError("contraction is outside the supported scope")
    if any(r.group == "extra" for r in c.rules.values()):
        raise CutElimError("extra initial sequents are outside the supported scope")
    rep = check_proof(c, proof)
    if not rep.valid:
        raise CutElimError(f"input is not a proof in {c.name}: {rep.first_violation}")
    e = _Elim(c)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100_000))
    try:
        ids = []
        for n in proof.nodes:
            prems = tuple(ids[p] for p in n.premises)
            if n.rule == "cut":
                ids.append(e.cut(prems[0], prems[1], dict(n.inst)["S"]))
            else:
                ids.append(e.b.add(n.rule, prems, n.ante, n.succ, dict(n.inst)))
    finally:
        sys.setrecursionlimit(old)
    out = e.b.proof(ids[proof.root], dict(proof.params))
    return out
