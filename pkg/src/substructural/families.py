"""Generators for the clique/colouring tautology families and a few
intermediate-logic axioms.

Two index conventions appear.  ``base=0`` ranges vertices over 0..n-1,
colours over 0..k-1 and clique slots over 0..k.  ``base=1`` reads every
bound ``i < n`` as ``1 <= i < n``, which is the range used by the
substructural formulas below (so vertices 1..n-1, colours 1..k-1 and
slots 1..k).
"""

from __future__ import annotations

from math import isqrt

from .formula import (
    BOT, ONE, TOP, Formula, atom, big_conj, big_disj, conj, disj, fuse, imp, ldiv, neg,
)

__all__ = [
    "gen_clique", "gen_color", "gen_alpha", "gen_beta", "gen_theta", "gen_theta_default",
    "gen_theta_bot", "gen_theta_star", "gen_theta_star_tilde", "gen_bd", "gen_tk",
    "gen_kc_axiom", "theta_star_blocks", "FAMILIES", "generate",
]


def _bounds(n, k, lo=1):
    if n < lo or k < 1 or k > n:
        raise ValueError(f"need {lo} <= n and 1 <= k <= n, got n={n}, k={k}")


def _orlist(families, empty=BOT):
    # drop empty families, then disjoin what is left
    parts = [big_disj(f) for f in families if f]
    return big_disj(parts, empty)


def gen_clique(n: int, k: int, edge: str = "p", pick: str = "q", edge_lit=None) -> Formula:
    """Clause set saying the graph on [n] has a k-clique, with q_{u,i}
    mapping clique slot u to vertex i.  ``edge_lit`` lets a caller put a
    formula in place of each edge atom."""
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    e = edge_lit or (lambda i, j: atom(edge, i, j))
    q = lambda u, i: atom(pick, u, i)
    V, K = range(1, n + 1), range(1, k + 1)
    clauses = [big_disj(q(u, i) for i in V) for u in K]
    clauses += [disj(neg(q(u, i)), neg(q(u, j))) for u in K for i in V for j in V if i < j]
    clauses += [disj(neg(q(u, i)), neg(q(v, i))) for u in K for v in K if u < v for i in V]
    clauses += [big_disj([neg(q(u, i)), neg(q(v, j)), e(i, j)])
                for u in K for v in K if u != v for i in V for j in V if i < j]
    return big_conj(clauses)


def gen_color(n: int, m: int, edge: str = "p", col: str = "r") -> Formula:
    """Clause set saying the graph on [n] is m-colourable via r_{i,a}."""
    if not (1 <= m <= n):
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    r = lambda i, a: atom(col, i, a)
    V, M = range(1, n + 1), range(1, m + 1)
    clauses = [big_disj(r(i, a) for a in M) for i in V]
    clauses += [disj(neg(r(i, a)), neg(r(i, b))) for i in V for a in M for b in M if a < b]
    clauses += [big_disj([neg(r(i, a)), neg(r(j, a)), neg(atom(edge, i, j))])
                for a in M for i in V for j in V if i < j]
    return big_conj(clauses)


def _ranges(n, k, base):
    if base == 0:
        return range(n), range(k)
    if base == 1:
        return range(1, n), range(1, k)
    raise ValueError("base must be 0 or 1")


def gen_alpha(n: int, k: int, base: int = 0, unit: Formula = TOP) -> Formula:
    """Some vertex gets no colour, or some edge is monochromatic."""
    _bounds(n, k)
    V, C = _ranges(n, k, base)
    first = [big_conj((atom("s'", i, l) for l in C), unit) for i in V]
    second = [big_conj([atom("s", i, l), atom("s", j, l), atom("p", i, j)])
              for i in V for j in V for l in C]
    return _orlist([first, second])


def gen_beta(n: int, k: int, base: int = 0, unit: Formula = TOP) -> Formula:
    """Some clique slot is empty, or two slots hold vertices joined by q."""
    if n < 1 or k < 1:
        raise ValueError(f"need n, k >= 1, got n={n}, k={k}")
    V, L = _ranges(n, k, base)
    first = [big_conj((atom("r'", i, l) for i in V), unit) for l in L]
    second = [big_conj([atom("r", i, l), atom("r", j, m), atom("q", i, j)])
              for i in V for j in V for l in L for m in L if l < m]
    return _orlist([first, second])


def _pairs(V, W):
    return [(i, j) for i in V for j in W]


def gen_theta(n: int, k: int, base: int = 0) -> Formula:
    """Negation-free clique/colouring tautology in the language L."""
    _bounds(n, k)
    V, C = _ranges(n, k, base)
    _, S = _ranges(n, k + 1, base)
    edges = big_conj(disj(atom("p", i, j), atom("q", i, j)) for i, j in _pairs(V, V))
    s_cov = big_conj(disj(atom("s", i, l), atom("s'", i, l)) for i, l in _pairs(V, C))
    r_cov = big_conj(disj(atom("r", i, l), atom("r'", i, l)) for i, l in _pairs(V, S))
    left = imp(s_cov, gen_alpha(n, k, base))
    right = imp(r_cov, gen_beta(n, k + 1, base))
    return imp(edges, disj(left, right))


def gen_theta_default(n: int) -> Formula:
    return gen_theta(n, isqrt(n))


def gen_theta_bot(n: int) -> Formula:
    """Negated clique/colour version with edge-indexed atoms and k = floor(sqrt n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    k = isqrt(n)
    V = range(1, n + 1)
    edges = big_conj(disj(atom("p", i, j), atom("q", i, j)) for i in V for j in V if i < j)
    color = gen_color(n, k, edge="p", col="s")
    clique = gen_clique(n, k + 1, pick="r", edge_lit=lambda i, j: neg(atom("q", i, j)))
    return imp(edges, disj(neg(color), neg(clique)))


def theta_star_blocks(n: int, k: int):
    """Index lists (pairs, s-block, r-block) of the fused antecedents, each
    in lexicographic order."""
    _bounds(n, k, lo=2)
    V, C = _ranges(n, k, 1)
    _, S = _ranges(n, k + 1, 1)
    return _pairs(V, V), _pairs(V, C), _pairs(V, S)


def _unit_or(x: str, y: str, idx) -> Formula:
    return disj(conj(atom(x, *idx), ONE), conj(atom(y, *idx), ONE))


def gen_theta_star(n: int, k: int, arrow: str = "ldiv") -> Formula:
    """Substructural clique/colouring formula built with left division
    (``arrow='imp'`` gives the commutative-implication reading)."""
    P, S, R = theta_star_blocks(n, k)
    op = ldiv if arrow == "ldiv" else imp
    pblock = fuse([_unit_or("p", "q", ij) for ij in P])
    sblock = fuse([_unit_or("s", "s'", il) for il in S])
    rblock = fuse([_unit_or("r", "r'", il) for il in R])
    alpha = gen_alpha(n, k, base=1, unit=ONE)
    beta = gen_beta(n, k + 1, base=1, unit=ONE)
    return op(pblock, disj(op(sblock, alpha), op(rblock, beta)))


def gen_theta_star_tilde(n: int, k: int) -> Formula:
    return gen_theta_star(n, k, arrow="imp")


def gen_bd(n: int) -> Formula:
    if n < 0:
        raise ValueError("need n >= 0")
    f = BOT
    for i in range(n):
        p = atom("p", i)
        f = disj(p, imp(p, f))
    return f


def gen_tk(k: int) -> Formula:
    if k < 0:
        raise ValueError("need k >= 0")
    ps = [atom("p", i) for i in range(k + 1)]
    body = []
    for i in range(k + 1):
        others = big_disj(ps[j] for j in range(k + 1) if j != i)
        body.append(imp(imp(ps[i], others), big_disj(ps)))
    return imp(big_conj(body), big_disj(ps))


def gen_kc_axiom() -> Formula:
    p = atom("p")
    return disj(neg(p), neg(neg(p)))


FAMILIES = {
    "clique": lambda n, k, m=None: gen_clique(n, k),
    "color": lambda n, k, m=None: gen_color(n, m if m is not None else k),
    "alpha": lambda n, k, m=None: gen_alpha(n, k),
    "beta": lambda n, k, m=None: gen_beta(n, k),
    "theta": lambda n, k, m=None: gen_theta(n, k),
    "theta-default": lambda n, k=None, m=None: gen_theta_default(n),
    "theta-bot": lambda n, k=None, m=None: gen_theta_bot(n),
    "theta-star": lambda n, k, m=None: gen_theta_star(n, k),
    "theta-star-tilde": lambda n, k, m=None: gen_theta_star_tilde(n, k),
    "bd": lambda n, k=None, m=None: gen_bd(n),
    "tk": lambda n, k=None, m=None: gen_tk(n if k is None else k),
    "kc": lambda n=None, k=None, m=None: gen_kc_axiom(),
}


def generate(family: str, n=None, k=None, m=None) -> Formula:
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    return FAMILIES[family](n, k, m)
