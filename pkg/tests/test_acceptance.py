"""Acceptance suite: one test per headline criterion.

Each test prints a single ``PASS`` or ``FAIL`` line (also collected into the
terminal summary) and then asserts, so a failure is never hidden.
"""

import itertools
import random
import time
from math import isqrt

from conftest import ACCEPTANCE_LINES
from corpus import corpus
from oracles import fl_ew_provable, random_formula, random_sequent, truth_table_valid, wl_provable
from substructural.calculus import drop_cut, make_bpc, make_cfl, make_fl, make_fl_bot, make_wl
from substructural.construct import (
    ConstructionError, build_distrib_proof, build_eval_proof, build_fusion_intro, build_monotone_proof,
    build_theta_star_proof, commutative_reading, embed_wl_in_fl, theta_star_partitions, translate_proof_wl_to_bpc,
)
from substructural.cutelim import eliminate_cuts
from substructural.families import FAMILIES, gen_theta, generate
from substructural.formula import (
    BOT, ONE, TOP, ZERO, Formula, analyze, atom, conj, disj, eval_classical, imp, subst_sigma_v, translate_t,
)
from substructural.frege import check_frege_proof, frege_from_calculus, seqproof_to_fregeproof
from substructural.proof import check_proof
from substructural.search import (
    bpc_invert_implication, classical_valid, craig_disjunct_select, decide_cutfree, reclassify_cfl_to_fl,
    verify_empty_succedent_free,
)

P3 = (atom("p"), atom("q"), atom("r"))


def report(capsys, number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  [{number}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    return ok


# enumeration of monotone formulas --------------------------------------------------------

def monotone_full(depth):
    """Every formula over p, q, r with & and | of depth at most ``depth``."""
    if depth == 0:
        return list(P3)
    sub = monotone_full(depth - 1)
    return list(P3) + [Formula(k, x, y) for k in ("and", "or") for x in sub for y in sub]


def monotone_canonical(depth):
    """One representative per class modulo swapping the children of any
    & or | node: children are drawn from the previous level with x <= y in
    enumeration order."""
    if depth == 0:
        return list(P3)
    sub = monotone_canonical(depth - 1)
    out = list(P3)
    for k in ("and", "or"):
        for i, x in enumerate(sub):
            for y in sub[i:]:
                out.append(Formula(k, x, y))
    return out


def _pairs(n):
    return [(atom("A", i), atom("B", i)) for i in range(1, n + 1)]


# 1 -----------------------------------------------------------------------------------------

def test_checker_soundness_sweep(capsys):
    wl, bpc, flb = make_wl(), make_bpc(), make_fl_bot()
    failures = []
    counts = dict.fromkeys(["eval", "monotone", "distrib", "fusion", "theta", "translate", "embed"], 0)
    downstream = []          # WL proofs that also go through translation and embedding

    def need(ok, what):
        if not ok:
            failures.append(what)

    valuations = [dict(zip(P3, bits)) for bits in itertools.product((False, True), repeat=3)]
    full2 = monotone_full(2)
    full2_set = set(full2)
    for a in full2 + [f for f in monotone_canonical(3) if f not in full2_set]:
        for v in valuations:
            fwd, bwd = build_eval_proof(a, v)
            unit = ONE if eval_classical(a, v) else BOT
            s = subst_sigma_v(a, v)
            need(fwd.end == ((s,), (unit,)) and bwd.end == ((unit,), (s,)), ("eval end", a, v))
            need(check_proof(wl, fwd).valid and check_proof(wl, bwd).valid, ("eval", a, v))
            counts["eval"] += 2
            if a in full2_set:
                downstream += [fwd, bwd]

    orders = [list(o) for k in (1, 2, 3) for o in itertools.permutations(P3, k)]
    for a in full2:
        for I in orders:
            v = {x: x in I for x in P3}
            if eval_classical(a, v):
                pf = build_monotone_proof(I, a)
                need(check_proof(wl, pf).valid, ("monotone", I, a))
                counts["monotone"] += 1
                downstream.append(pf)
            else:
                try:
                    build_monotone_proof(I, a)
                    failures.append(("monotone accepted an invalid I", I, a))
                except ConstructionError:
                    pass

    for n in (1, 2, 3):
        for d in ("fwd", "bwd"):
            pf = build_distrib_proof(_pairs(n), d)
            need(check_proof(wl, pf).valid, ("distrib", n, d))
            counts["distrib"] += 1
            downstream.append(pf)

    leaves = list(P3[:2]) + [ONE, BOT]
    small = leaves + [Formula(k, x, y) for k in ("and", "or", "fus", "ldiv") for x in leaves for y in leaves]
    for x in small:
        for y in leaves:
            pf = build_fusion_intro(x, y)
            need(pf.lines == 3 and check_proof(wl, pf).valid, ("fusion", x, y))
            counts["fusion"] += 1
            downstream.append(pf)

    for n in (2, 3):
        for k in sorted({1, isqrt(n)}):
            pf = build_theta_star_proof(n, k)
            need(check_proof(wl, pf).valid, ("theta", n, k))
            counts["theta"] += 1
            downstream.append(pf)

    for pf in downstream:
        if pf.end[1]:
            need(check_proof(bpc, translate_proof_wl_to_bpc(pf)).valid, ("translate", pf.end))
            counts["translate"] += 1
        need(check_proof(flb, embed_wl_in_fl(pf)).valid, ("embed", pf.end))
        counts["embed"] += 1

    detail = ", ".join(f"{k} {v}" for k, v in counts.items()) + f"; failures {len(failures)}"
    assert report(capsys, 1, "checker soundness sweep", not failures, detail), failures[:5]


# 2 -----------------------------------------------------------------------------------------

def test_theta_star_growth(capsys):
    rows, ok = [], True
    for n in (2, 3, 4):
        k = isqrt(n)
        pf = build_theta_star_proof(n, k)
        bound = 2 ** ((n - 1) ** 2)
        valid = check_proof(make_wl(), pf).valid
        ok &= pf.lines >= bound and valid
        rows.append(f"n={n} k={k} lines={pf.lines} >= {bound} valid={valid}")
    assert report(capsys, 2, "theta-star growth", ok, "; ".join(rows))


# 3 -----------------------------------------------------------------------------------------

def test_translation_length(capsys):
    rng = random.Random(2024)
    atoms = [atom("p"), atom("q"), atom("r"), atom("p", 1, 2)]
    ops = ["and", "or", "fus", "ldiv", "rdiv", "imp"]
    consts = [TOP, BOT, ONE, ZERO]
    bad = []
    forms = [random_formula(rng, rng.choice(range(1, 40, 2)), atoms, ops, consts) for _ in range(1000)]
    family_count = 0
    for name in sorted(FAMILIES):
        for n, k, m in ((2, 1, 1), (3, 1, 2), (3, 2, 2), (4, 2, 3)):
            try:
                forms.append(generate(name, n, k, m))
                family_count += 1
            except ValueError:
                pass
    for f in forms:
        if analyze(translate_t(f))["length"] != analyze(f)["length"]:
            bad.append(f)
    detail = f"{len(forms) - family_count} random + {family_count} family formulas, mismatches {len(bad)}"
    assert report(capsys, 3, "translation length identity", not bad, detail), bad[:3]


# 4 -----------------------------------------------------------------------------------------

def test_line_count_preservation(capsys):
    bad = []
    for label, c, pf in corpus():
        assert check_proof(c, pf).valid, label
        F = frege_from_calculus(c)
        fp = seqproof_to_fregeproof(pf, F, c)
        if len(fp) != pf.lines or not check_frege_proof(F, fp).valid:
            bad.append(label)
    detail = f"{len(corpus())} corpus proofs, mismatches {len(bad)}"
    assert report(capsys, 4, "line-count preservation", not bad, detail), bad


# 5 -----------------------------------------------------------------------------------------

def test_cut_elimination_pipeline(capsys):
    start = time.perf_counter()
    src = commutative_reading(build_theta_star_proof(2, 1))
    fle = make_fl("e")
    out = eliminate_cuts(src, fle)
    rep = check_proof(drop_cut(fle), out)
    cfl_rep = check_proof(drop_cut(make_cfl("eio")), out.retag("CFL_ew-", "multi"))
    fl = reclassify_cfl_to_fl(out.retag("CFL_ew-", "multi"))
    fl_ok = check_proof(make_fl("eio"), fl).valid
    took = time.perf_counter() - start
    ok = rep.valid and rep.cut_free and out.end == src.end and cfl_rep.valid and fl_ok and took <= 60
    detail = f"{src.lines} -> {out.lines} lines, cut-free {rep.cut_free}, FL_ew {fl_ok}, {took:.3f}s"
    assert report(capsys, 5, "cut-elimination pipeline at n=2", ok, detail)


# 6 -----------------------------------------------------------------------------------------

def test_empty_succedent_lemma(capsys):
    rep = verify_empty_succedent_free(8)
    detail = (f"{rep.checked} antecedents, {rep.refuted} refuted, static check "
              f"{sum(rep.static.values())}/{len(rep.static)} rules")
    assert report(capsys, 6, "0-free antecedents never prove the empty succedent", rep.ok, detail), rep.failures[:5]


# 7 -----------------------------------------------------------------------------------------

def _cross_validate(c, oracle, binary, consts, seed):
    rng = random.Random(seed)
    tally = {"Provable": 0, "Refuted": 0}
    bad = []
    for _ in range(200):
        seq = random_sequent(rng, 8, [atom("p"), atom("q")], binary, consts)
        v = decide_cutfree(c, seq)
        if v.status == "Provable":
            rep = check_proof(c, v.proof)
            if not (rep.valid and rep.cut_free and v.proof.end == seq and oracle(*seq, seed=1)):
                bad.append(seq)
        elif v.status == "Refuted":
            # re-search with two different shuffles of the move order
            if oracle(*seq, seed=2) or oracle(*seq, seed=3):
                bad.append(seq)
        else:
            bad.append(seq)
        tally[v.status] = tally.get(v.status, 0) + 1
    return tally, bad


def test_oracle_cross_validation(capsys):
    t1, b1 = _cross_validate(make_fl("eio"), fl_ew_provable, ["and", "or", "fus", "imp"], [ONE, ZERO], 71)
    t2, b2 = _cross_validate(make_wl(), wl_provable, ["and", "or", "fus", "ldiv"], [ONE, BOT], 72)
    detail = f"FL_ew {t1}, WL {t2}, disagreements {len(b1) + len(b2)}"
    assert report(capsys, 7, "oracle cross-validation", not (b1 or b2), detail), (b1 + b2)[:5]


# 8 -----------------------------------------------------------------------------------------

def test_bpc_inversion(capsys):
    rng = random.Random(8)
    bpc = make_bpc()
    seen, bad = set(), []
    tries = 0
    while len(seen) < 50 and tries < 5000:
        tries += 1
        a = random_formula(rng, rng.choice([1, 3, 5]), P3, ["and", "or", "imp"], [TOP, BOT])
        b = random_formula(rng, rng.choice([1, 3, 5]), P3, ["and", "or", "imp"], [TOP, BOT])
        f = imp(a, b)
        if f in seen:
            continue
        v = decide_cutfree(bpc, ((), (f,)), budget=20_000)
        if not v.provable:
            continue
        seen.add(f)
        out = bpc_invert_implication(v.proof)
        if out.end != ((a,), (b,)) or not check_proof(bpc, out).valid:
            bad.append(f)
    ok = len(seen) == 50 and not bad
    assert report(capsys, 8, "BPC implication inversion", ok, f"{len(seen)} proofs, failures {len(bad)}"), bad


# 9 -----------------------------------------------------------------------------------------

def test_classical_gate(capsys):
    problems = []
    theta = gen_theta(2, 1)
    if not (classical_valid(theta) and truth_table_valid(theta)):
        problems.append("theta(2,1)")
    rng = random.Random(9)
    atoms = sorted(theta.atoms(), key=str)
    for _ in range(2000):
        if not eval_classical(theta, {x: rng.random() < 0.5 for x in atoms}):
            problems.append("theta(2,1) eval")
            break
    checked = 0
    for n in (2, 3):
        for k in range(1, n + 1):
            for choice, M, N, (a1, a2), (b1, b2), side in theta_star_partitions(n, k):
                combined = imp(conj(a1, b1), disj(a2, b2))
                if len(combined.atoms()) <= 20:
                    whole = truth_table_valid(combined) and classical_valid(combined)
                else:
                    # the sides share no atom, so the combined implication holds iff one side does
                    whole = truth_table_valid(imp(a1, a2)) or truth_table_valid(imp(b1, b2))
                verdict = craig_disjunct_select(a1, a2, b1, b2)
                picked = imp(a1, a2) if verdict == "Left" else imp(b1, b2)
                if not whole or verdict == "Neither" or verdict != side or not truth_table_valid(picked):
                    problems.append((n, k, choice))
                checked += 1
    detail = f"theta(2,1) valid, {checked} partition implications, problems {len(problems)}"
    assert report(capsys, 9, "classical-validity gate", not problems, detail), problems[:5]
