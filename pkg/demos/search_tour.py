"""A short tour of the decision procedures.

Cut-free search answers Provable, Refuted or BudgetExceeded.  The examples
below show how the structural rules change the answer for the same
sequent, how BPC proofs of implications can be inverted, and how the
disjunct selector picks a valid side of a disjunction of implications.

Run with ``python3 demos/search_tour.py``.
"""

from substructural.calculus import calculus_by_name
from substructural.formula import parse
from substructural.proof import parse_sequent
from substructural.search import bpc_invert_implication, craig_disjunct_select, decide_cutfree

# Exchange matters: without it, fusion is order-sensitive.
for name in ("FL", "FL_e", "FL_ew", "WL"):
    for text in ("p, q => p * q", "p, q => q * p", "p, q => p"):
        v = decide_cutfree(calculus_by_name(name), parse_sequent(text))
        print(f"{name:6} {text:16} {v.status}")
    print()

# Inversion: a BPC proof of => A -> B becomes a proof of A => B.
bpc = calculus_by_name("BPC")
v = decide_cutfree(bpc, parse_sequent("=> (p & q) -> (q & p)"))
inverted = bpc_invert_implication(v.proof)
ante, succ = inverted.end
print(f"inverted endsequent: {', '.join(map(str, ante))} => {', '.join(map(str, succ))}, lines {v.proof.lines} -> {inverted.lines}")

# Disjunct selection: when (A1 -> A2) | (B1 -> B2) is a tautology and the
# two sides share no atoms, one side is already a tautology on its own.
pick = craig_disjunct_select(parse("p & q"), parse("p"), parse("r"), parse("s"))
print(f"\nvalid side of ((p & q) -> p) | (r -> s): {pick}")
