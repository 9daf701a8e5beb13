"""Walk through the lifecycle of one Θ* tautology.

We generate the formula, build its polynomial-size proof in WL, check it,
and then carry the proof into three neighbouring systems: BPC (through the
t-translation), FL with a bottom constant, and the Frege system read off
the sequent rules.  At each stop we print the size so the reader can see
that nothing blows up along the way.

Run with ``python3 demos/theta_star_walkthrough.py``.
"""

from substructural.calculus import calculus_by_name, make_bpc, make_wl
from substructural.construct import (
    build_theta_star_proof, embed_wl_in_fl, translate_proof_wl_to_bpc, translation_bound,
)
from substructural.families import gen_theta_star
from substructural.formula import translate_t
from substructural.frege import check_frege_proof, frege_from_calculus, seqproof_to_fregeproof
from substructural.proof import check_proof

N, K = 3, 1

# The formula itself.  Its atoms encode "there is a k-clique" and "the graph
# is (k-1)-colourable", so classically one of the two disjunct groups holds.
theta = gen_theta_star(N, K)
print(f"Θ*_{N},{K} has {len(str(theta))} characters")
print(f"  {str(theta)[:100]}...")

# A proof in WL.  The builder never searches; it assembles the proof from
# small lemmas, so its size is polynomial in n.
proof = build_theta_star_proof(N, K)
report = check_proof(make_wl(), proof)
print(f"\nWL proof: valid={report.valid}, lines={proof.lines}, length={proof.length}")
print("  most used rules:", sorted(proof.rule_counts().items(), key=lambda kv: -kv[1])[:5])

# Into BPC.  Fusion becomes conjunction and the implications become ->.
bpc_proof = translate_proof_wl_to_bpc(proof)
print(f"\nBPC proof, ends in t(Θ*): {bpc_proof.end[1] == (translate_t(theta),)}")
print(f"  valid={check_proof(make_bpc(), bpc_proof).valid}, lines={bpc_proof.lines}, "
      f"bound={translation_bound(proof)}")

# Into FL with a bottom constant: the same proof, read in a richer language.
fl_bot = calculus_by_name("FL_bot")
fl_proof = embed_wl_in_fl(proof)
print(f"\nFL_bot proof: valid={check_proof(fl_bot, fl_proof).valid}, lines={fl_proof.lines}")

# Finally the Frege view.  Every sequent becomes one formula line, so the
# line count is unchanged.
F = frege_from_calculus(fl_bot)
fp = seqproof_to_fregeproof(fl_proof, F, fl_bot)
print(f"\nFrege proof: valid={check_frege_proof(F, fp).valid}, lines={len(fp)}")
print(f"  last line: {str(fp.lines[-1].formula)[:80]}...")
