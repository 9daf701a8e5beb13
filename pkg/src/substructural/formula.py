"""Formulas over the substructural and intuitionistic languages.

Formulas are hash-consed: building the same tree twice returns the same
object, so equality is identity and hashing is cheap.  Binary chains are
right-associated and the printer parenthesizes every compound child.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Formula", "atom", "TOP", "BOT", "ONE", "ZERO",
    "conj", "disj", "fus", "ldiv", "rdiv", "imp", "neg",
    "big_conj", "big_disj", "fuse", "power",
    "parse", "ParseError", "LanguageError", "LANGUAGES", "in_language", "check_language",
    "translate_t", "subst_sigma_v", "eval_classical", "conjugate", "iterated_conjugate",
    "analyze", "atoms_of", "atom_key", "subst",
]

BINARY = ("and", "or", "fus", "ldiv", "rdiv", "imp")
CONSTS = ("top", "bot", "one", "zero")

_ASCII_OP = {"and": "&", "or": "|", "fus": "*", "ldiv": "\\", "rdiv": "/", "imp": "->"}
_UNI_OP = {"and": "∧", "or": "∨", "fus": "∗", "ldiv": "\\", "rdiv": "/", "imp": "→"}
_ASCII_CONST = {"top": "T", "bot": "F", "one": "1", "zero": "0"}
_UNI_CONST = {"top": "⊤", "bot": "⊥", "one": "1", "zero": "0"}

# connectives (and constants) allowed in each language; atoms are always allowed
LANGUAGES: dict[str, frozenset] = {
    "L*": frozenset({"and", "or", "fus", "top", "bot", "one", "zero", "rdiv", "ldiv", "imp"}),
    "L": frozenset({"and", "or", "imp", "top", "bot"}),
    "WL": frozenset({"one", "bot", "and", "or", "fus", "ldiv"}),
    "FL": frozenset({"and", "or", "fus", "ldiv", "rdiv", "one", "zero"}),
    "FL_bot": frozenset({"and", "or", "fus", "ldiv", "rdiv", "one", "zero", "bot"}),
    "FL_e": frozenset({"and", "or", "fus", "ldiv", "rdiv", "imp", "one", "zero"}),
    "FL_e_bot": frozenset({"and", "or", "fus", "ldiv", "rdiv", "imp", "one", "zero", "bot"}),
    "CFL": frozenset({"and", "or", "fus", "imp", "zero", "one"}),
}


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class LanguageError(ValueError):
    pass


class Formula:
    """Immutable, interned formula node.

    ``kind`` is one of ``atom``, the constants ``top bot one zero`` or a
    binary kind.  For ``rdiv`` the left child is the numerator, so
    ``rdiv(a, b)`` prints as ``a / b``.
    """

    __slots__ = ("kind", "a", "b", "name", "idx", "size", "uid", "_s", "_kinds", "_atoms", "__weakref__")
    _table: dict = {}
    _count = 0

    def __new__(cls, kind, a=None, b=None, name=None, idx=()):
        key = (kind, a, b, name, idx)
        f = cls._table.get(key)
        if f is not None:
            return f
        f = object.__new__(cls)
        f.kind, f.a, f.b, f.name, f.idx = kind, a, b, name, idx
        f.size = 1 if a is None else 1 + a.size + b.size
        f.uid = Formula._count
        Formula._count += 1
        f._s = None
        f._kinds = None
        f._atoms = None
        cls._table[key] = f
        return f

    def __reduce__(self):
        return (Formula, (self.kind, self.a, self.b, self.name, self.idx))

    def __repr__(self):
        return f"Formula({str(self)!r})"

    def __str__(self):
        if self._s is None:
            self._s = _render(self, _ASCII_OP, _ASCII_CONST)
        return self._s

    def __len__(self):
        return self.size

    def __lt__(self, other):
        return str(self) < str(other)

    def pretty(self) -> str:
        return _render(self, _UNI_OP, _UNI_CONST)

    @property
    def is_atom(self) -> bool:
        return self.kind == "atom"

    @property
    def is_compound(self) -> bool:
        return self.a is not None

    def kinds(self) -> frozenset:
        if self._kinds is None:
            if self.a is None:
                self._kinds = frozenset() if self.kind == "atom" else frozenset((self.kind,))
            else:
                self._kinds = self.a.kinds() | self.b.kinds() | {self.kind}
        return self._kinds

    def atoms(self) -> frozenset:
        if self._atoms is None:
            if self.kind == "atom":
                self._atoms = frozenset((self,))
            elif self.a is None:
                self._atoms = frozenset()
            else:
                self._atoms = self.a.atoms() | self.b.atoms()
        return self._atoms


def _atom_text(f: Formula) -> str:
    if not f.idx:
        return f.name
    return f"{f.name}_{{{','.join(map(str, f.idx))}}}"


def _render(f: Formula, ops, consts) -> str:
    # iterative on the right spine so long right-nested chains do not recurse deeply
    parts = []
    closers = 0
    while True:
        if f.kind == "atom":
            parts.append(_atom_text(f))
            break
        if f.a is None:
            parts.append(consts[f.kind])
            break
        left = _render(f.a, ops, consts) if ops is not _ASCII_OP else str(f.a)
        if f.a.is_compound:
            left = f"({left})"
        parts.append(f"{left} {ops[f.kind]} ")
        if f.b.is_compound:
            if ops is _ASCII_OP and f.b._s is not None:
                parts.append(f"({f.b._s})")
                break
            parts.append("(")
            closers += 1
            f = f.b
        else:
            parts.append(_render(f.b, ops, consts))
            break
    return "".join(parts) + ")" * closers


# constructors ---------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*'*\Z")


def atom(name: str, *idx: int) -> Formula:
    if not _NAME_RE.match(name) or name in ("T", "F"):
        raise ValueError(f"bad atom name {name!r}")
    return Formula("atom", name=name, idx=tuple(int(i) for i in idx))


TOP = Formula("top")
BOT = Formula("bot")
ONE = Formula("one")
ZERO = Formula("zero")


def conj(a, b): return Formula("and", a, b)
def disj(a, b): return Formula("or", a, b)
def fus(a, b): return Formula("fus", a, b)
def ldiv(a, b): return Formula("ldiv", a, b)      # a \ b
def rdiv(a, b): return Formula("rdiv", a, b)      # a / b
def imp(a, b): return Formula("imp", a, b)
def neg(a, falsum=BOT): return Formula("imp", a, falsum)


def _chain(kind, items, empty):
    items = list(items)
    if not items:
        return empty
    out = items[-1]
    for x in reversed(items[:-1]):
        out = Formula(kind, x, out)
    return out


def big_conj(items: Iterable[Formula], empty: Formula = TOP) -> Formula:
    return _chain("and", items, empty)


def big_disj(items: Iterable[Formula], empty: Formula = BOT) -> Formula:
    return _chain("or", items, empty)


def fuse(items: Sequence[Formula]) -> Formula:
    """Right-nested fusion; the empty fusion is the unit 1."""
    return _chain("fus", items, ONE)


def power(f: Formula, n: int) -> Formula:
    if n < 1:
        raise ValueError("power needs n >= 1")
    return fuse([f] * n)


# languages ------------------------------------------------------------------

def in_language(f: Formula, lang: str) -> bool:
    return f.kinds() <= LANGUAGES[lang]


def check_language(f: Formula, lang: str) -> None:
    bad = f.kinds() - LANGUAGES[lang]
    if bad:
        names = ", ".join(sorted(_ASCII_OP.get(k) or _ASCII_CONST[k] for k in bad))
        raise LanguageError(f"symbols {{{names}}} not in language {lang}")


# parsing --------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<atom>[A-Za-z][A-Za-z0-9]*'*(?:_\{\s*\d+(?:\s*,\s*\d+)*\s*\}|_\d+)?)
  | (?P<op>->|→|=>|&|∧|\||∨|\*|∗|·|\\|/|~|¬|\(|\)|⊤|⊥|1|0)
""", re.X)

_OP_ALIASES = {
    "&": "and", "∧": "and", "|": "or", "∨": "or", "*": "fus", "∗": "fus", "·": "fus",
    "\\": "ldiv", "/": "rdiv", "->": "imp", "→": "imp", "~": "neg", "¬": "neg",
    "(": "(", ")": ")", "⊤": "top", "⊥": "bot", "1": "one", "0": "zero",
}


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "atom":
            word = m.group()
            if word == "T":
                out.append(("top", pos, word))
            elif word == "F":
                out.append(("bot", pos, word))
            else:
                out.append(("atom", pos, word))
        elif m.lastgroup == "op":
            if m.group() == "=>":
                raise ParseError("sequent arrow inside a formula", pos)
            out.append((_OP_ALIASES[m.group()], pos, m.group()))
        pos = m.end()
    out.append(("eof", len(text), ""))
    return out


def _make_atom(word: str) -> Formula:
    if "_" in word:
        name, rest = word.split("_", 1)
        rest = rest.strip("{}")
        idx = tuple(int(x) for x in rest.split(","))
    else:
        name, idx = word, ()
    return atom(name, *idx)


class _Parser:
    IMPL_LEVEL = ("ldiv", "rdiv", "imp")

    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        t = self.toks[self.i]
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[2] or 'end of input'!r}", t[1])
        self.i += 1
        return t

    def parse(self):
        f = self.disj()
        t = self.peek()
        if t[0] != "eof":
            raise ParseError(f"unexpected {t[2]!r}", t[1])
        return f

    def disj(self):
        left = self.conj()
        if self.peek()[0] == "or":
            self.take()
            return disj(left, self.disj())
        return left

    def conj(self):
        left = self.impl()
        if self.peek()[0] == "and":
            self.take()
            return conj(left, self.conj())
        return left

    def impl(self):
        left = self.fusion()
        t = self.peek()
        if t[0] in self.IMPL_LEVEL:
            self.take()
            right = self.fusion()
            t2 = self.peek()
            if t2[0] in self.IMPL_LEVEL:
                raise ParseError("ambiguous chain of implications; add parentheses", t2[1])
            return Formula(t[0], left, right)
        return left

    def fusion(self):
        left = self.unary()
        if self.peek()[0] == "fus":
            self.take()
            return fus(left, self.fusion())
        return left

    def unary(self):
        t = self.take()
        k = t[0]
        if k == "neg":
            return neg(self.unary())
        if k == "(":
            f = self.disj()
            self.take(")")
            return f
        if k in CONSTS:
            return Formula(k)
        if k == "atom":
            return _make_atom(t[2])
        raise ParseError(f"unexpected {t[2] or 'end of input'!r}", t[1])


def parse(text: str, lang: str | None = "L*") -> Formula:
    """Parse ``text``; if ``lang`` is given the result must lie in it."""
    f = _Parser(text).parse()
    if lang is not None:
        if lang == "L*":
            check_language(f, "L*")
        else:
            check_language(f, lang)
    return f


# transformations ------------------------------------------------------------

def _map_memo(f: Formula, leaf, node, memo: dict) -> Formula:
    # post-order without Python recursion limits on long spines
    stack = [(f, False)]
    while stack:
        g, done = stack.pop()
        if g in memo:
            continue
        if g.a is None:
            memo[g] = leaf(g)
        elif done:
            memo[g] = node(g, memo[g.a], memo[g.b])
        else:
            stack.append((g, True))
            if g.b not in memo:
                stack.append((g.b, False))
            if g.a not in memo:
                stack.append((g.a, False))
    return memo[f]


_T_CONST = {"zero": BOT, "one": TOP}
_T_KIND = {"fus": "and", "ldiv": "imp", "imp": "imp", "and": "and", "or": "or"}


def translate_t(f: Formula) -> Formula:
    """Map a formula of L* into L: fusion becomes conjunction, both
    divisions become implication (``b/a`` and ``a\\b`` go to ``a -> b``),
    0 goes to falsum and 1 to verum."""
    def leaf(g):
        return _T_CONST.get(g.kind, g)

    def node(g, x, y):
        if g.kind == "rdiv":
            return imp(y, x)
        return Formula(_T_KIND[g.kind], x, y)

    return _map_memo(f, leaf, node, {})


def subst(f: Formula, mapping: Mapping[Formula, Formula]) -> Formula:
    """Simultaneous substitution of formulas for atoms."""
    return _map_memo(f, lambda g: mapping.get(g, g), lambda g, x, y: Formula(g.kind, x, y), {})


def subst_sigma_v(f: Formula, v: Mapping[Formula, bool]) -> Formula:
    """Replace true atoms by 1 and false atoms by falsum."""
    def leaf(g):
        if g.kind != "atom":
            return g
        if g not in v:
            raise KeyError(f"valuation misses atom {g}")
        return ONE if v[g] else BOT

    return _map_memo(f, leaf, lambda g, x, y: Formula(g.kind, x, y), {})


def eval_classical(f: Formula, v: Mapping[Formula, bool]) -> bool:
    """Truth-table value of a formula of L (1 and 0 read as verum and falsum)."""
    def leaf(g):
        k = g.kind
        if k == "atom":
            if g not in v:
                raise KeyError(f"valuation misses atom {g}")
            return bool(v[g])
        return k in ("top", "one")

    def node(g, x, y):
        k = g.kind
        if k == "and":
            return x and y
        if k == "or":
            return x or y
        if k == "imp":
            return (not x) or y
        raise LanguageError(f"connective {_ASCII_OP[k]} has no classical reading here")

    return _map_memo(f, leaf, node, {})


def conjugate(side: str, alpha: Formula, f: Formula) -> Formula:
    if side == "left":
        return conj(ldiv(alpha, fus(f, alpha)), ONE)
    if side == "right":
        return conj(rdiv(fus(alpha, f), alpha), ONE)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def iterated_conjugate(steps: Sequence[tuple[str, Formula]], f: Formula) -> Formula:
    # outermost first: steps[0] is applied last
    for side, alpha in reversed(list(steps)):
        f = conjugate(side, alpha, f)
    return f


def atom_key(a: Formula):
    return (a.name, a.idx)


def atoms_of(f: Formula) -> list[Formula]:
    return sorted(f.atoms(), key=atom_key)


def analyze(f: Formula) -> dict:
    kinds = f.kinds()
    return {
        "length": f.size,
        "zero_free": not (kinds & {"zero", "bot"}),
        "monotone": kinds <= {"and", "or"},
        "atoms": set(f.atoms()),
    }
