"""Command line interface.  Each subcommand is a thin wrapper over a library call."""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import construct, families, frege, proof as prooflib, search
from .calculus import calculus_by_name
from .cutelim import eliminate_cuts
from .formula import atom, parse, translate_t

EXIT_OK, EXIT_NO, EXIT_BUDGET, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 64, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(text, path, out):
    if path in (None, "-"):
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _calc(name):
    try:
        return calculus_by_name(name)
    except (KeyError, ValueError) as e:
        raise UsageError(str(e)) from None


def _n_range(text):
    a, sep, b = text.partition("..")
    if not sep or not a.isdigit() or not b.isdigit() or int(a) > int(b):
        raise UsageError(f"bad range {text!r}; expected a..b")
    return range(int(a), int(b) + 1)


def _default_k(n, k):
    return math.isqrt(n) if k is None else k


# subcommands -----------------------------------------------------------------------------

def cmd_gen_formula(a, out):
    try:
        f = families.generate(a.family, a.n, a.k, a.m)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    except TypeError:
        raise UsageError(f"family {a.family} needs more parameters") from None
    out.write(f"{f}\n")
    return EXIT_OK


BUILDERS = ("theta-star", "theta-star-tilde", "distrib", "fusion-intro")


def cmd_gen_proof(a, out):
    if a.builder in ("theta-star", "theta-star-tilde"):
        if a.n is None:
            raise UsageError("--n is required")
        p = construct.build_theta_star_proof(a.n, _default_k(a.n, a.k))
        if a.builder == "theta-star-tilde":
            p = construct.commutative_reading(p)
    elif a.builder == "distrib":
        if a.n is None:
            raise UsageError("--n is required")
        pairs = [(atom("a", i), atom("b", i)) for i in range(1, a.n + 1)]
        p = construct.build_distrib_proof(pairs, a.direction)
    else:
        p = construct.build_fusion_intro(atom("p"), atom("q"))
    _write(prooflib.dumps(p), a.out, out)
    return EXIT_OK


def cmd_check(a, out):
    c = _calc(a.calculus)
    p = prooflib.loads(_read(a.proof))
    rep = prooflib.check_proof(c, p)
    out.write(f"valid: {str(rep.valid).lower()}\nlines: {rep.lines}\nlength: {rep.length}\n")
    if not rep.valid:
        out.write(f"violation: node {rep.first_violation[0]}: {rep.first_violation[1]}\n")
        return EXIT_NO
    return EXIT_OK


def cmd_translate(a, out):
    if a.what == "formula":
        if a.to != "L":
            raise UsageError("formulas translate to L")
        out.write(f"{translate_t(parse(a.input, 'L*'))}\n")
        return EXIT_OK
    if a.to != "BPC":
        raise UsageError("proofs translate to BPC")
    p = construct.translate_proof_wl_to_bpc(prooflib.loads(_read(a.input)))
    _write(prooflib.dumps(p), a.out, out)
    return EXIT_OK


def cmd_frege(a, out):
    c = _calc(a.calculus)
    F = frege.frege_from_calculus(c)
    if a.action == "derive":
        for r in F.rules.values():
            out.write(r.display() + "\n")
        return EXIT_OK
    if a.action == "transform":
        fp = frege.seqproof_to_fregeproof(prooflib.loads(_read(a.file)), F, c)
        _write(frege.dumps_frege(fp), a.out, out)
        return EXIT_OK
    hyps = [parse(h, None) for h in a.hyp]
    rep = frege.check_frege_proof(F, frege.loads_frege(_read(a.file)), hyps)
    out.write(f"valid: {str(rep.valid).lower()}\nlines: {rep.lines}\nlength: {rep.length}\n")
    if not rep.valid:
        out.write(f"violation: line {rep.first_violation[0]}: {rep.first_violation[1]}\n")
        return EXIT_NO
    return EXIT_OK


def cmd_search(a, out):
    c = _calc(a.calculus)
    try:
        seq = prooflib.parse_sequent(a.sequent, None)
    except ValueError as e:
        raise UsageError(str(e)) from None
    v = search.decide_cutfree(c, seq, a.budget, a.depth)
    out.write(f"verdict: {v.status}\nexplored: {v.explored}\n")
    if v.proof is not None and a.out:
        _write(prooflib.dumps(v.proof), a.out, out)
    return {"Provable": EXIT_OK, "Refuted": EXIT_NO}.get(v.status, EXIT_BUDGET)


def cmd_eliminate_cut(a, out):
    c = _calc(a.calculus)
    p = eliminate_cuts(prooflib.loads(_read(a.proof)), c)
    _write(prooflib.dumps(p), a.out, out)
    return EXIT_OK


def cmd_invert(a, out):
    p = search.bpc_invert_implication(prooflib.loads(_read(a.proof)))
    _write(prooflib.dumps(p), a.out, out)
    return EXIT_OK


def cmd_verify_lemma62(a, out):
    rep = search.verify_empty_succedent_free(a.size_cap, tuple(a.atoms.split(",")), a.budget)
    out.write(f"checked: {rep.checked}\nrefuted: {rep.refuted}\n"
              f"static: {str(all(rep.static.values())).lower()}\nok: {str(rep.ok).lower()}\n")
    for f in rep.failures[:10]:
        out.write(f"failure: {f}\n")
    return EXIT_OK if rep.ok else EXIT_NO


def cmd_measure(a, out):
    p = prooflib.loads(_read(a.proof))
    out.write(f"lines,length\n{p.lines},{p.length}\n")
    return EXIT_OK


def cmd_bench(a, out):
    out.write("n,k,lines,length,seconds\n")
    for n in _n_range(a.n_range):
        k = _default_k(n, a.k)
        t = time.perf_counter()
        p = construct.build_theta_star_proof(n, k)
        dt = time.perf_counter() - t
        out.write(f"{n},{k},{p.lines},{p.length},{dt:.3f}\n")
        out.flush()
    return EXIT_OK


# parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="substructural", description="Substructural proof complexity toolkit.")
    ap.add_argument("--seed", type=int, default=None, help="accepted for compatibility; builders are deterministic")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate formulas or proofs")
    gs = g.add_subparsers(dest="what", required=True, parser_class=_Parser)
    gf = gs.add_parser("formula")
    gf.add_argument("family", choices=sorted(families.FAMILIES))
    gf.add_argument("--n", type=int)
    gf.add_argument("--k", type=int)
    gf.add_argument("--m", type=int)
    gf.set_defaults(func=cmd_gen_formula)
    gp = gs.add_parser("proof")
    gp.add_argument("builder", choices=BUILDERS)
    gp.add_argument("--n", type=int)
    gp.add_argument("--k", type=int)
    gp.add_argument("--direction", choices=("fwd", "bwd"), default="fwd")
    gp.add_argument("--out")
    gp.set_defaults(func=cmd_gen_proof)

    c = sub.add_parser("check", help="check a proof file")
    c.add_argument("--calculus", required=True)
    c.add_argument("proof")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("translate", help="the t-translation of a formula or a WL proof")
    t.add_argument("what", choices=("formula", "proof"))
    t.add_argument("input", help="formula text, or a proof file")
    t.add_argument("--to", required=True, choices=("L", "BPC"))
    t.add_argument("--out")
    t.set_defaults(func=cmd_translate)

    f = sub.add_parser("frege", help="Frege systems from sequent calculi")
    fs = f.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for action in ("derive", "transform", "check"):
        fa = fs.add_parser(action)
        fa.add_argument("--calculus", required=True)
        if action != "derive":
            fa.add_argument("file")
        if action == "transform":
            fa.add_argument("--out")
        if action == "check":
            fa.add_argument("--hyp", action="append", default=[], help="hypothesis formula (repeatable)")
        fa.set_defaults(func=cmd_frege)

    s = sub.add_parser("search", help="cut-free proof search")
    s.add_argument("--calculus", required=True)
    s.add_argument("--sequent", required=True)
    s.add_argument("--budget", type=int, default=200_000)
    s.add_argument("--depth", type=int, default=12)
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("eliminate-cut", help="cut elimination")
    e.add_argument("--calculus", required=True)
    e.add_argument("proof")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eliminate_cut)

    i = sub.add_parser("invert", help="BPC proof of A => B from one of => A -> B")
    i.add_argument("proof")
    i.add_argument("--out")
    i.set_defaults(func=cmd_invert)

    v = sub.add_parser("verify-lemma62", help="no 0-free antecedent proves the empty succedent")
    v.add_argument("--size-cap", type=int, default=8)
    v.add_argument("--atoms", default="p,q")
    v.add_argument("--budget", type=int, default=10_000_000)
    v.set_defaults(func=cmd_verify_lemma62)

    m = sub.add_parser("measure", help="lines and length of a proof as CSV")
    m.add_argument("proof")
    m.set_defaults(func=cmd_measure)

    b = sub.add_parser("bench", help="timing tables")
    bs = b.add_subparsers(dest="what", required=True, parser_class=_Parser)
    bt = bs.add_parser("theta-star")
    bt.add_argument("--n-range", required=True)
    bt.add_argument("--k", type=int)
    bt.set_defaults(func=cmd_bench)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except (prooflib.NodeCapExceeded, search.BudgetExceeded, search.AtomCapExceeded) as e:
        err.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET
    except (ValueError, KeyError, OSError) as e:
        # bad parameters, unparsable input or a proof that does not meet a precondition
        err.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except Exception as e:
        err.write(f"internal error: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())
