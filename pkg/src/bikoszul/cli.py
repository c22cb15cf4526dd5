"""Command-line interface.

Exit codes: 0 success, 2 when the command found a mathematical
counterexample (non-Koszul, non-linear, not Cohen-Macaulay, ...), 1 on any
error.  ``--json`` switches the report to JSON with sorted keys.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bipoly import Polynomial, RingPresentation
from .constructions import (DiagonalSpec, Offset, diagonal_presentation,
                            product_algebra, rees_presentation,
                            strand_betti, strand_linearity_test, strand_module,
                            symmetric_algebra_presentation,
                            theorem32_candidate_basis, theorem32_pipeline)
from .errors import AlgebraError
from .gradedlin import GradedModulePresentation, hilbert_value
from .groebner import (buchberger, condition_star, generic_initial_ideal,
                       is_groebner_basis, normal_form)
from .resolution import (CertifiedNonKoszul, betti, koszul_test,
                         linearity_test, regularity)
from .semigroup import cm_scan, semigroup_diagonal, validate
from .textio import (parse_polynomial, parse_ring_file, parse_semigroup,
                     serialize_ring, serialize_semigroup)

OK, COUNTEREXAMPLE, ERROR = 0, 2, 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(json.dumps({"error": "UsageError", "message": message}), file=sys.stderr)
        raise SystemExit(ERROR)


def _fmt(f: Polynomial, names) -> str:
    return f.format(names)


def _build_module(ring: RingPresentation, kind: str, gens, twist) -> GradedModulePresentation:
    if kind == "ring":
        M = GradedModulePresentation.free(ring)
    elif kind == "residue":
        M = GradedModulePresentation.residue_field(ring)
    elif kind == "nx":
        M = GradedModulePresentation.x_ideal(ring)
    elif kind == "ny":
        M = GradedModulePresentation.y_ideal(ring)
    elif kind == "max":
        M = GradedModulePresentation.maximal_ideal(ring)
    elif kind == "ideal":
        M = GradedModulePresentation.ideal(ring, gens)
    elif kind == "quotient":
        M = GradedModulePresentation.quotient(ring, gens)
    else:
        raise ValueError(f"unknown module kind {kind!r}")
    if twist:
        M = M.twist(*twist)
    return M


def _spec(args) -> DiagonalSpec:
    return DiagonalSpec(args.a, args.b, args.mode)


def _table_text(table) -> str:
    lines = [f"betti table (i <= {table.max_i}, total degree <= {table.max_total_degree})"]
    for i, j, k, v in table.nonzero():
        lines.append(f"  i={i} ({j},{k}) {v}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Commands; each returns (exit code, report dict, text)

def cmd_gb(args, rf):
    R = rf.ring
    gb = buchberger(list(R.relations))
    names = R.variable_names()
    polys = [_fmt(g, names) for g in gb]
    return OK, {"gb": polys}, "\n".join(polys)


def cmd_nf(args, rf):
    R = rf.ring
    if args.poly is None:
        raise AlgebraError("nf needs --poly")
    f = parse_polynomial(args.poly, R)
    r = normal_form(f, buchberger(list(R.relations)))
    text = _fmt(r, R.variable_names())
    return OK, {"normal_form": text}, text


def cmd_gin(args, rf):
    R = rf.ring
    gens = rf.gens or list(R.relations)
    gin = generic_initial_ideal(gens, trials=args.trials, seed=args.seed)
    names = R.variable_names()
    mons = [_fmt(Polynomial.monomial(e, R.n, R.m, R.p), names) for e in gin.sorted_generators()]
    report = {"gin": mons, "seed": args.seed, "trials": args.trials}
    if all(sum(e) == 2 for e in gin.minimal_generators):
        report["condition_star"] = condition_star(gin)
    return OK, report, "\n".join(mons)


def cmd_diag(args, rf):
    D = diagonal_presentation(rf.ring, _spec(args))
    src = rf.ring.variable_names()
    names = D.ring.variable_names()
    vars_ = [{"name": z, "image": _fmt(Polynomial.monomial(u, rf.ring.n, rf.ring.m, rf.ring.p), src),
              "block": "x" if k < D.ring.n else "y"}
             for k, (z, u) in enumerate(zip(names, D.segment_map))]
    kernel = [_fmt(f, names) for f in D.kernel]
    report = {"variables": vars_, "kernel": kernel, "spec": {"a": args.a, "b": args.b, "mode": args.mode}}
    text = "\n".join([f"{v['name']} -> {v['image']}" for v in vars_] + ["kernel:"] + kernel)
    return OK, report, text


def cmd_strand(args, rf):
    M = _build_module(rf.ring, args.module, rf.gens, args.twist)
    P = strand_module(M, _spec(args), Offset(args.c, args.d), args.max_deg, args.max_deg)
    names = P.ring.variable_names()
    rels = [[_fmt(f, names) for f in col] for col in P.relation_matrix]
    shifts = [list(s) for s in P.generator_shifts]
    report = {"generator_degrees": shifts, "relations": rels,
              "truncation": list(P.truncation)}
    text = f"generators in degrees {shifts}\n" + "\n".join(" , ".join(r) for r in rels)
    return OK, report, text


def cmd_betti(args, rf):
    M = _build_module(rf.ring, args.module, rf.gens, args.twist)
    if args.a is not None:
        table = strand_betti(M, _spec(args), Offset(args.c, args.d), args.max_i, args.max_deg)
    else:
        table = betti(M, args.max_i, args.max_deg)
    return OK, table.to_json(), _table_text(table)


def cmd_reg(args, rf):
    M = _build_module(rf.ring, args.module, rf.gens, args.twist)
    if args.a is not None:
        table = strand_betti(M, _spec(args), Offset(args.c, args.d), args.max_i, args.max_deg)
    else:
        table = betti(M, args.max_i, args.max_deg)
    rep = regularity(table)
    text = (f"reg {rep.reg}{' (truncated)' if rep.reg_truncated else ''}, indeg {rep.indeg}, "
            f"rate {rep.rate}")
    return OK, rep.to_json(), text


def cmd_koszul(args, rf):
    verdict = koszul_test(rf.ring, args.max_i)
    code = COUNTEREXAMPLE if isinstance(verdict, CertifiedNonKoszul) else OK
    return code, verdict.to_json(), json.dumps(verdict.to_json(), sort_keys=True)


def cmd_linearity(args, rf):
    M = _build_module(rf.ring, args.module, rf.gens, args.twist)
    if args.a is not None:
        res = strand_linearity_test(M, _spec(args), Offset(args.c, args.d), args.expected,
                                    args.max_i)
    else:
        res = linearity_test(M, args.expected, args.max_i)
    linear, witness = res.linear, res.witness
    report = {"linear": linear, "expected": args.expected, "max_i": args.max_i,
              "witness": None if witness is None else list(witness)}
    return (OK if linear else COUNTEREXAMPLE), report, f"linear: {linear}"


def cmd_sym(args, rf):
    A = rf.ring
    if args.theorem32:
        G = theorem32_candidate_basis(A)
        names = [f"x{i + 1}" for i in range(A.n)] + [f"y{i + 1}" for i in range(A.n)]
        ok = is_groebner_basis(G)
        report = {"candidate": [_fmt(g, names) for g in G], "is_groebner_basis": ok}
        return (OK if ok else COUNTEREXAMPLE), report, "\n".join(report["candidate"])
    M = _build_module(A, args.module if args.module != "ring" else "max", rf.gens, None)
    S = symmetric_algebra_presentation(A, M)
    rels = [_fmt(f, S.variable_names()) for f in S.relations]
    return OK, {"relations": rels, "n": S.n, "m": S.m}, serialize_ring(S)


def cmd_rees(args, rf):
    A = rf.ring
    gens = rf.gens or A.variables()
    P = rees_presentation(A, gens)
    names = P.ring.variable_names()
    rels = [_fmt(f, names) for f in P.ring.relations]
    return OK, {"relations": rels, "kernel": [_fmt(f, names) for f in P.kernel]}, serialize_ring(P.ring)


def cmd_product(args, rf):
    A = rf.ring
    B = parse_ring_file(Path(args.other).read_text()).ring if args.other else None
    kind = args.kind if args.kind != "Veronese" else ("Veronese", args.d if args.d is not None else 2)
    out = product_algebra(A, B, kind)
    ring = out if isinstance(out, RingPresentation) else out.ring
    rels = [_fmt(f, ring.variable_names()) for f in ring.relations]
    return OK, {"n": ring.n, "m": ring.m, "relations": rels}, serialize_ring(ring)


def cmd_semigroup_cm(args, L):
    validate(L, max(1, args.max_deg + 1))
    scan = cm_scan(L, args.max_deg)
    code = OK if scan.verdict == "AllCM" else COUNTEREXAMPLE
    text = scan.verdict if scan.witness is None else f"{scan.verdict} at {scan.witness[0]}"
    return code, scan.to_json(), text


def cmd_semigroup_diag(args, L):
    D = semigroup_diagonal(L, _spec(args))
    rep = {"x_generators": [list(v) for v in D.x_generators],
           "y_generators": [list(v) for v in D.y_generators]}
    return OK, rep, serialize_semigroup(D)


RING_COMMANDS = {
    "gb": cmd_gb, "nf": cmd_nf, "gin": cmd_gin, "diag": cmd_diag, "strand": cmd_strand,
    "betti": cmd_betti, "reg": cmd_reg, "koszul": cmd_koszul, "linearity": cmd_linearity,
    "sym": cmd_sym, "rees": cmd_rees, "product": cmd_product,
}
SEMIGROUP_COMMANDS = {"semigroup-cm": cmd_semigroup_cm, "semigroup-diag": cmd_semigroup_diag}


def _twist(text):
    try:
        p, q = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("twist must look like P,Q") from exc
    return (p, q)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bikoszul", description="Bigraded Koszul algebra computations.")
    ap.add_argument("command", choices=sorted(RING_COMMANDS) + sorted(SEMIGROUP_COMMANDS))
    ap.add_argument("input", help="ring or semigroup file")
    ap.add_argument("other", nargs="?", help="second ring file (product)")
    ap.add_argument("--a", type=int)
    ap.add_argument("--b", type=int)
    ap.add_argument("--c", type=int, default=0)
    ap.add_argument("--d", type=int)
    ap.add_argument("--mode", choices=["Delta", "DeltaTilde"], default="Delta")
    ap.add_argument("--max-i", type=int, default=4)
    ap.add_argument("--max-deg", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--module", default="ring",
                    choices=["ring", "residue", "nx", "ny", "max", "ideal", "quotient"])
    ap.add_argument("--twist", type=_twist, help="twist M(P,Q)")
    ap.add_argument("--expected", type=int, default=0)
    ap.add_argument("--poly", help="polynomial for nf")
    ap.add_argument("--theorem32", action="store_true", help="sym: explicit quadratic basis")
    ap.add_argument("--kind", default="Tensor", choices=["Tensor", "Segre", "Veronese"])
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--output", help="write the report here instead of stdout")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # --d doubles as the Veronese degree for `product`; as an offset it defaults to 0
    if args.command != "product" and args.d is None:
        args.d = 0
    try:
        text = Path(args.input).read_text()
        if args.command in SEMIGROUP_COMMANDS:
            if args.a is None or args.b is None:
                if args.command == "semigroup-diag":
                    raise AlgebraError("semigroup-diag needs --a and --b")
            code, report, human = SEMIGROUP_COMMANDS[args.command](args, parse_semigroup(text))
        else:
            if (args.a is None) != (args.b is None):
                raise AlgebraError("--a and --b go together")
            if args.command in ("diag", "strand") and args.a is None:
                raise AlgebraError(f"{args.command} needs --a and --b")
            code, report, human = RING_COMMANDS[args.command](args, parse_ring_file(text))
    except AlgebraError as exc:
        err = {"error": exc.code, "message": str(exc)}
        err.update({k: v for k, v in exc.details.items() if isinstance(v, (int, str, list))})
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return ERROR
    except (OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True),
              file=sys.stderr)
        return ERROR
    out = json.dumps(report, sort_keys=True) if args.json else human.rstrip("\n")
    if args.output:
        Path(args.output).write_text(out + "\n")
    else:
        print(out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
