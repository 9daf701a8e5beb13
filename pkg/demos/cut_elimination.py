"""Remove cuts from a small commutative proof and watch what survives.

The commutative reading of the Θ* proof at n=2 uses cut to glue lemmas
together.  Eliminating the cuts gives an analytic proof of the same
sequent.  That proof happens to use only rules shared with the classical
multi-conclusion calculus CFL_ew without contraction, so we can hand it to
the reclassifier, which turns a single-conclusion CFL proof into one for
intuitionistic FL_ew.

Run with ``python3 demos/cut_elimination.py``.
"""

import time

from substructural.calculus import drop_cut, make_cfl, make_fl
from substructural.construct import build_theta_star_proof, commutative_reading
from substructural.cutelim import eliminate_cuts
from substructural.proof import check_proof
from substructural.search import reclassify_cfl_to_fl

source = commutative_reading(build_theta_star_proof(2, 1))
fle = make_fl("e")
print(f"source proof: {source.lines} lines, {source.rule_counts().get('cut', 0)} cuts")

start = time.perf_counter()
cut_free = eliminate_cuts(source, fle)
took = time.perf_counter() - start

rep = check_proof(drop_cut(fle), cut_free)
print(f"after elimination: {cut_free.lines} lines, valid={rep.valid}, cut-free={rep.cut_free}, "
      f"{took:.3f}s")
print(f"same endsequent: {cut_free.end == source.end}")

# Same node list, different label: check it in CFL_ew- and reclassify.
as_cfl = cut_free.retag("CFL_ew-", "multi")
print(f"valid in CFL_ew- without cut: {check_proof(drop_cut(make_cfl('eio')), as_cfl).valid}")
fl = reclassify_cfl_to_fl(as_cfl)
print(f"reclassified into FL_ew: valid={check_proof(make_fl('eio'), fl).valid}")
