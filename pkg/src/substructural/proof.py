"""Proof DAGs, the node builder used by every construction, the text
format, and the checker."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .calculus import Calculus, match_rule
from .formula import (
    BOT, ONE, ZERO, Formula, big_conj, big_disj, conj, disj, fus, fuse, imp, in_language,
    ldiv, parse,
)

__all__ = [
    "Node", "Proof", "ProofBuilder", "NodeCapExceeded", "Report", "check_proof", "interpret",
    "dumps", "loads", "DEFAULT_NODE_CAP", "node_cap", "seq_str", "parse_sequent",
]

DEFAULT_NODE_CAP = 1 << 22


def node_cap() -> int:
    """Node cap for builders; ``SUBSTRUCTURAL_NODE_CAP`` overrides it."""
    env = os.environ.get("SUBSTRUCTURAL_NODE_CAP")
    return int(env) if env else DEFAULT_NODE_CAP


class NodeCapExceeded(RuntimeError):
    def __init__(self, required: int, available: int, what: str = "proof"):
        super().__init__(f"{what} needs at least {required} nodes, cap is {available}")
        self.required = required
        self.available = available


@dataclass(frozen=True)
class Node:
    rule: str
    premises: tuple
    ante: tuple
    succ: tuple
    inst: tuple = ()          # sorted (context variable, length) pairs

    @property
    def sequent(self):
        return self.ante, self.succ


def seq_str(ante: Sequence[Formula], succ: Sequence[Formula]) -> str:
    return f"{', '.join(map(str, ante))} => {', '.join(map(str, succ))}".strip()


def _split_commas(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        depth += ch in "({"
        depth -= ch in ")}"
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x.strip() for x in out if x.strip()]


def parse_sequent(text: str, lang: str | None = None):
    """``"p, q => p * q"`` to a pair of formula tuples."""
    if "=>" not in text and "⇒" not in text:
        raise ValueError("sequent needs '=>'")
    left, right = text.replace("⇒", "=>").split("=>", 1)
    return (tuple(parse(x, lang) for x in _split_commas(left)),
            tuple(parse(x, lang) for x in _split_commas(right)))


@dataclass
class Proof:
    nodes: list
    root: int
    calculus: str = ""
    flavor: str = "single"
    params: dict = field(default_factory=dict)

    @property
    def end(self):
        n = self.nodes[self.root]
        return n.ante, n.succ

    @property
    def lines(self) -> int:
        return len(self.nodes)

    @property
    def length(self) -> int:
        # each sequent counts its arrow plus the symbols of its formulas
        return sum(1 + sum(f.size for f in n.ante) + sum(f.size for f in n.succ) for n in self.nodes)

    def __len__(self):
        return len(self.nodes)

    def rule_counts(self) -> dict:
        out: dict = {}
        for n in self.nodes:
            out[n.rule] = out.get(n.rule, 0) + 1
        return out

    def retag(self, calculus: str, flavor: str | None = None) -> "Proof":
        return Proof(list(self.nodes), self.root, calculus, flavor or self.flavor, dict(self.params))


class ProofBuilder:
    """Hash-consing node store.  Identical (rule, premises, sequent, record)
    tuples are stored once, so repeated subproofs become shared DAG nodes."""

    def __init__(self, calculus: str = "", flavor: str = "single", cap: int | None = None):
        self.calculus = calculus
        self.flavor = flavor
        self.cap = node_cap() if cap is None else cap
        self.nodes: list[Node] = []
        self._index: dict = {}

    def __len__(self):
        return len(self.nodes)

    def seq(self, i):
        n = self.nodes[i]
        return n.ante, n.succ

    def add(self, rule: str, premises=(), ante=(), succ=(), inst=None) -> int:
        node = Node(rule, tuple(premises), tuple(ante), tuple(succ),
                    tuple(sorted(inst.items())) if inst else ())
        i = self._index.get(node)
        if i is not None:
            return i
        if len(self.nodes) >= self.cap:
            raise NodeCapExceeded(len(self.nodes) + 1, self.cap)
        i = len(self.nodes)
        self.nodes.append(node)
        self._index[node] = i
        return i

    def proof(self, root: int, params: dict | None = None) -> Proof:
        """Keep only nodes reachable from ``root``, renumbered in creation order."""
        keep = set()
        stack = [root]
        while stack:
            i = stack.pop()
            if i in keep:
                continue
            keep.add(i)
            stack.extend(self.nodes[i].premises)
        order = sorted(keep)
        new = {old: k for k, old in enumerate(order)}
        nodes = []
        for old in order:
            n = self.nodes[old]
            nodes.append(Node(n.rule, tuple(new[p] for p in n.premises), n.ante, n.succ, n.inst))
        return Proof(nodes, new[root], self.calculus, self.flavor, dict(params or {}))

    def graft(self, proof: Proof) -> int:
        """Copy another proof's nodes in; returns the id of its root here."""
        ids = []
        for n in proof.nodes:
            ids.append(self.add(n.rule, tuple(ids[p] for p in n.premises), n.ante, n.succ, dict(n.inst)))
        return ids[proof.root]

    # single-conclusion rule helpers; each returns the new node id ------------

    def ident(self, a: Formula) -> int:
        return self.add("id", (), (a,), (a,))

    def one(self) -> int:
        return self.add("one", (), (), (ONE,))

    def bot(self, ante: Sequence[Formula], pos: int, succ=()) -> int:
        ante = tuple(ante)
        assert ante[pos] is BOT
        return self.add("bot", (), ante, succ, {"G": pos, "S": len(ante) - pos - 1, "D": len(succ)})

    def w1(self, p: int, pos: int) -> int:
        a, s = self.seq(p)
        return self.add("1w", (p,), a[:pos] + (ONE,) + a[pos:], s,
                        {"G": pos, "S": len(a) - pos, "D": len(s)})

    def lw(self, p: int, pos: int, f: Formula) -> int:
        a, s = self.seq(p)
        return self.add("Lw", (p,), a[:pos] + (f,) + a[pos:], s,
                        {"G": pos, "S": len(a) - pos, "D": len(s)})

    def _lreplace(self, rule, p, pos, new):
        a, s = self.seq(p)
        return self.add(rule, (p,), a[:pos] + (new,) + a[pos + 1:], s,
                        {"G": pos, "S": len(a) - pos - 1, "D": len(s)})

    def land1(self, p: int, pos: int, other: Formula) -> int:
        return self._lreplace("Land1", p, pos, conj(self.seq(p)[0][pos], other))

    def land2(self, p: int, pos: int, other: Formula) -> int:
        return self._lreplace("Land2", p, pos, conj(other, self.seq(p)[0][pos]))

    def lfus(self, p: int, pos: int) -> int:
        a, s = self.seq(p)
        return self.add("Lfus", (p,), a[:pos] + (fus(a[pos], a[pos + 1]),) + a[pos + 2:], s,
                        {"G": pos, "S": len(a) - pos - 2, "D": len(s)})

    def fold(self, p: int, pos: int, count: int) -> int:
        """Fuse ``count`` consecutive antecedent formulas from ``pos`` into
        one right-nested fusion (count 0 inserts the unit 1)."""
        if count == 0:
            return self.w1(p, pos)
        for j in range(pos + count - 2, pos - 1, -1):
            p = self.lfus(p, j)
        return p

    def lor(self, p1: int, p2: int, pos: int) -> int:
        a1, s = self.seq(p1)
        a2, s2 = self.seq(p2)
        assert a1[:pos] == a2[:pos] and a1[pos + 1:] == a2[pos + 1:] and s == s2
        return self.add("Lor", (p1, p2), a1[:pos] + (disj(a1[pos], a2[pos]),) + a1[pos + 1:], s,
                        {"G": pos, "S": len(a1) - pos - 1, "D": len(s)})

    def rand(self, p1: int, p2: int) -> int:
        a, (x,) = self.seq(p1)
        a2, (y,) = self.seq(p2)
        assert a == a2
        return self.add("Rand", (p1, p2), a, (conj(x, y),), {"G": len(a), "D": 0, "L": 0})

    def ror1(self, p: int, other: Formula) -> int:
        a, (x,) = self.seq(p)
        return self.add("Ror1", (p,), a, (disj(x, other),), {"G": len(a), "D": 0, "L": 0})

    def ror2(self, p: int, other: Formula) -> int:
        a, (x,) = self.seq(p)
        return self.add("Ror2", (p,), a, (disj(other, x),), {"G": len(a), "D": 0, "L": 0})

    def rfus(self, p1: int, p2: int) -> int:
        a1, (x,) = self.seq(p1)
        a2, (y,) = self.seq(p2)
        return self.add("Rfus", (p1, p2), a1 + a2, (fus(x, y),),
                        {"G": len(a1), "S": len(a2), "D1": 0, "D2": 0, "L1": 0, "L2": 0})

    def rldiv(self, p: int) -> int:
        a, (y,) = self.seq(p)
        return self.add("Rldiv", (p,), a[1:], (ldiv(a[0], y),), {"G": len(a) - 1})

    def rimp(self, p: int) -> int:
        a, s = self.seq(p)
        return self.add("Rimp", (p,), a[1:], (imp(a[0], s[0]),) + s[1:], {"G": len(a) - 1, "D": len(s) - 1})

    def cut(self, p1: int, p2: int, pos: int) -> int:
        """Cut the (single) succedent of ``p1`` against antecedent slot
        ``pos`` of ``p2``."""
        g, (x,) = self.seq(p1)
        a, s = self.seq(p2)
        assert a[pos] is x, (str(a[pos]), str(x))
        return self.add("cut", (p1, p2), a[:pos] + g + a[pos + 1:], s,
                        {"S": pos, "G": len(g), "P": len(a) - pos - 1, "D": len(s), "L": 0})


@dataclass
class Report:
    valid: bool
    first_violation: tuple | None      # (node id, reason)
    lines: int
    length: int
    cut_free: bool
    single_conclusion: bool
    zero_free: bool

    def __bool__(self):
        return self.valid


def _check_node(c: Calculus, proof: Proof, i: int) -> str | None:
    n = proof.nodes[i]
    rule = c.rules.get(n.rule)
    if rule is None:
        # a rule that exists but has no single-conclusion instance gets its own message
        from .calculus import STRUCTURAL
        if c.flavor == "single" and n.rule in STRUCTURAL and not STRUCTURAL[n.rule].single_instance:
            return "no single-conclusion instance"
        return f"rule {n.rule} not in {c.name}"
    if c.flavor == "single" and not rule.single_instance:
        return "no single-conclusion instance"
    for p in n.premises:
        if not (0 <= p < i):
            return f"premise {p} does not precede node {i}"
    if c.flavor == "single" and len(n.succ) > 1:
        return "succedent longer than one in a single-conclusion calculus"
    for f in n.ante + n.succ:
        if not in_language(f, c.lang):
            return f"formula {f} outside language {c.lang}"
    prems = [proof.nodes[p].sequent for p in n.premises]
    if c.flavor == "single" and any(len(s) > 1 for _, s in prems):
        return "premise succedent longer than one"
    got = match_rule(rule, n.sequent, prems, multiset=(c.flavor == "multiset"), lengths=dict(n.inst))
    if got is None:
        return f"sequent does not match rule {n.rule}"
    return None


def check_proof(c: Calculus, proof: Proof) -> Report:
    """Check every node against its rule in ``c``; report the first failure."""
    bad = None
    if not proof.nodes or not (0 <= proof.root < len(proof.nodes)):
        bad = (proof.root, "empty proof or bad root")
    else:
        for i in range(len(proof.nodes)):
            why = _check_node(c, proof, i)
            if why is not None:
                bad = (i, why)
                break
    nodes = proof.nodes
    return Report(
        valid=bad is None,
        first_violation=bad,
        lines=proof.lines,
        length=proof.length,
        cut_free=all(n.rule != "cut" for n in nodes),
        single_conclusion=all(len(n.succ) <= 1 for n in nodes),
        zero_free=all(not (f.kinds() & {"zero", "bot"}) for n in nodes for f in n.ante + n.succ),
    )


def interpret(ante: Sequence[Formula], succ: Sequence[Formula], flavor: str = "single") -> Formula:
    """Formula image of a sequent for the given flavour."""
    ante, succ = tuple(ante), tuple(succ)
    if flavor == "single":
        if len(succ) > 1:
            raise ValueError("single-conclusion interpretation needs at most one succedent formula")
        return ldiv(fuse(ante), succ[0] if succ else ZERO)
    if flavor == "multi":
        return imp(fuse(ante), imp(fuse([imp(d, ZERO) for d in succ]), ZERO))
    if flavor == "multiset":
        return imp(big_conj(sorted(ante, key=str)), big_disj(sorted(succ, key=str)))
    raise ValueError(f"unknown flavour {flavor!r}")


# text format ------------------------------------------------------------------

HEADER = "# substructural proof v1"


def _flist(fs) -> str:
    return "; ".join(map(str, fs)) if fs else "-"


def _parse_flist(text: str, cache: dict) -> tuple:
    if text == "-":
        return ()
    out = []
    for part in text.split("; "):
        f = cache.get(part)
        if f is None:
            f = cache[part] = parse(part, None)
        out.append(f)
    return tuple(out)


def dumps(proof: Proof) -> str:
    params = " ".join(f"{k}={v}" for k, v in sorted(proof.params.items())) or "-"
    out = [HEADER, f"calculus: {proof.calculus or '-'}", f"flavor: {proof.flavor}",
           f"params: {params}", f"root: {proof.root}", "id\trule\tpremises\tantecedent\tsuccedent\tinst"]
    for i, n in enumerate(proof.nodes):
        prem = ",".join(map(str, n.premises)) or "-"
        inst = " ".join(f"{k}={v}" for k, v in n.inst) or "-"
        out.append(f"{i}\t{n.rule}\t{prem}\t{_flist(n.ante)}\t{_flist(n.succ)}\t{inst}")
    return "\n".join(out) + "\n"


def loads(text: str) -> Proof:
    lines = text.split("\n")
    if not lines or lines[0] != HEADER:
        raise ValueError("not a proof file (bad header)")
    meta = {}
    for ln in lines[1:5]:
        k, _, v = ln.partition(": ")
        meta[k] = v
    if lines[5] != "id\trule\tpremises\tantecedent\tsuccedent\tinst":
        raise ValueError("missing node table header")
    params = {}
    if meta["params"] != "-":
        for kv in meta["params"].split(" "):
            k, _, v = kv.partition("=")
            params[k] = int(v) if v.lstrip("-").isdigit() else v
    cache: dict = {}
    nodes = []
    for k, ln in enumerate(lines[6:]):
        if ln == "":
            continue
        cols = ln.split("\t")
        if len(cols) != 6 or cols[0] != str(len(nodes)):
            raise ValueError(f"bad node line {k + 7}")
        _, rule, prem, ante, succ, inst = cols
        prem_t = () if prem == "-" else tuple(int(x) for x in prem.split(","))
        inst_t = () if inst == "-" else tuple((a, int(b)) for a, _, b in (kv.partition("=") for kv in inst.split(" ")))
        nodes.append(Node(rule, prem_t, _parse_flist(ante, cache), _parse_flist(succ, cache), inst_t))
    cal = "" if meta["calculus"] == "-" else meta["calculus"]
    return Proof(nodes, int(meta["root"]), cal, meta["flavor"], params)
