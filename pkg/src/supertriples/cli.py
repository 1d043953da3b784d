"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 parse error,
3 constraint violation, 4 budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .algebra import check_antisymmetry, check_jacobi, commutant_series
from .catalog import (appendix_certificate, automorphisms, catalog,
                      catalog_triple, get_catalog, list_algebras,
                      list_certificates, table_rows)
from .classify import (DEFAULT_SEARCH_BUDGET, REPORT_TARGETS, classify_doubles,
                       enumerate_duals, match_22, reduce_orbits, report)
from .errors import (BudgetExceeded, ConstraintViolation, InconsistentRadical,
                     ParseError, SuperTriplesError, UnknownId, UnknownName)
from .forms import canonical_form, check_ad_invariance
from .iso import NoSolution, odd_action_matrices, solve_r, verify_certificate
from .parsing import parse_catalog
from .triples import build_double, check_compatibility

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_CONSTRAINT = 3
EXIT_BUDGET = 4


def _parse_bindings(pairs):
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ConstraintViolation("--bind expects name=value, got %r" % item)
        name, _, value = item.partition("=")
        try:
            parsed = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ConstraintViolation("--bind %s: %r is not an exact rational"
                                      % (name.strip(), value.strip()))
        out.setdefault(name.strip(), []).append(parsed)
    return out


def _single_bindings(multi):
    return {k: v[-1] for k, v in multi.items()}


def _emit(args, text):
    print(text)


def cmd_check(args):
    status = EXIT_OK
    fmt = args.format
    if args.algebra:
        A = catalog(args.algebra, _single_bindings(_parse_bindings(args.bind)))
        anti = check_antisymmetry(A)
        jac = check_jacobi(A)
        ok = not anti and not jac
        if fmt == "machine":
            _emit(args, "check algebra=%s antisymmetry=%s jacobi=%s"
                  % (args.algebra, "pass" if not anti else "fail",
                     "pass" if not jac else "fail"))
        else:
            _emit(args, "antisymmetry: %s (%d residuals)"
                  % ("PASS" if not anti else "FAIL", len(anti)))
            _emit(args, "jacobi: %s (%d residuals)"
                  % ("PASS" if not jac else "FAIL", len(jac)))
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    if args.triple:
        t = catalog_triple(args.triple, _single_bindings(_parse_bindings(args.bind)))
        res = check_compatibility(t)
        m, n = t.superdim()
        ad = check_ad_invariance(build_double(t), canonical_form(m, n))
        ok = not res and not ad
        if fmt == "machine":
            _emit(args, "check triple=%s compatibility=%s ad_invariance=%s"
                  % (args.triple, "pass" if not res else "fail",
                     "pass" if not ad else "fail"))
        else:
            _emit(args, "compatibility: %s (%d residuals)"
                  % ("PASS" if not res else "FAIL", len(res)))
            _emit(args, "ad-invariance: %s (%d residuals)"
                  % ("PASS" if not ad else "FAIL", len(ad)))
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    if args.file:
        with open(args.file) as fh:
            text = fh.read()
        decls = parse_catalog(text)
        from .catalog import AlgebraEntry, TripleEntry, get_catalog
        from .parsing import AlgebraDecl, TripleDecl
        known = dict(get_catalog().algebras)
        ok = True
        for decl in decls:
            if isinstance(decl, AlgebraDecl):
                entry = AlgebraEntry(decl)
                known[decl.name] = entry
                bad = (check_antisymmetry(entry.algebra)
                       or check_jacobi(entry.algebra))
                ok = ok and not bad
                _emit(args, "algebra %s: %s" % (decl.name,
                                                "PASS" if not bad else "FAIL"))
            elif isinstance(decl, TripleDecl):
                t = TripleEntry(decl, known).triple
                bad = check_compatibility(t)
                ok = ok and not bad
                _emit(args, "triple %s: %s" % (decl.id,
                                               "PASS" if not bad else "FAIL"))
        _emit(args, "parsed %d declarations" % len(decls))
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    raise ConstraintViolation("check needs --algebra, --triple or --file")


def cmd_double(args):
    t = catalog_triple(args.triple, _single_bindings(_parse_bindings(args.bind)))
    D = build_double(t)
    if args.format == "machine":
        for (i, j, k, c) in D.nonzero():
            if i <= j:
                _emit(args, "bracket i=%s j=%s k=%s coeff=%s"
                      % (D.names[i], D.names[j], D.names[k],
                         str(c).replace(" ", "")))
    else:
        _emit(args, D.describe_brackets())
    return EXIT_OK


def cmd_invariants(args):
    t = catalog_triple(args.triple)
    fp = commutant_series(build_double(t),
                          _single_bindings(_parse_bindings(args.bind)))
    if args.format == "machine":
        _emit(args, "fingerprint triple=%s dims=%s totals=%s"
              % (args.triple, ";".join("%d,%d" % mn for mn in fp.dims),
                 ",".join(str(x) for x in fp.totals())))
    else:
        _emit(args, "commutant superdimensions: %s  (totals %s)"
              % (fp, fp.totals()))
    return EXIT_OK


def cmd_verify_iso(args):
    cert = appendix_certificate(args.cert,
                                _single_bindings(_parse_bindings(args.bind)))
    ok, residuals = verify_certificate(cert)
    form_fail = [r for r in residuals if r[0] == "form"]
    bracket_fail = [r for r in residuals if r[0] == "bracket"]
    if args.format == "machine":
        _emit(args, "verify cert=%s form=%s transport=%s"
              % (args.cert, "pass" if not form_fail else "fail",
                 "pass" if not bracket_fail else "fail"))
    else:
        _emit(args, "cpodm(i): %s, cpodm(ii): %s"
              % ("PASS" if not form_fail else "FAIL",
                 "PASS" if not bracket_fail else "FAIL"))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_solve_r(args):
    bindings = _single_bindings(_parse_bindings(args.bind))
    seed = catalog(args.algebra, bindings)
    if seed.superdim()[0] != 1:
        raise ConstraintViolation("solve-r needs a (1,n) seed algebra")
    H = odd_action_matrices(seed)[0]
    ctx = seed.ctx
    if args.g:
        vals = [Fraction(x) for x in args.g.split(",")]
        if len(vals) != 3:
            raise ConstraintViolation("--g expects alpha,beta,gamma")
        a, b, c = (ctx.const(v) for v in vals)
    else:
        from .scalars import Domain, ParamContext
        gctx = ParamContext([(n, Domain.free()) for n in
                             tuple(ctx.params) + ("alpha", "beta", "gamma")])
        mapper = ctx.bind_scalars(gctx, {})
        H = [[mapper(x) for x in row] for row in H]
        ctx = gctx
        a, b, c = (gctx.param(n) for n in ("alpha", "beta", "gamma"))
    G = [[a, b], [b, c]]
    res = solve_r(H, G)
    if isinstance(res, NoSolution):
        if args.format == "machine":
            _emit(args, "solve_r algebra=%s status=nosolution witness=%s"
                  % (args.algebra, str(res.witness).replace(" ", "")))
        else:
            _emit(args, "NoSolution: requires %s = 0" % res.witness)
        return EXIT_CHECK_FAILED
    if args.format == "machine":
        flat = ";".join(str(x).replace(" ", "") for row in res.R for x in row)
        _emit(args, "solve_r algebra=%s status=ok R=%s" % (args.algebra, flat))
    else:
        for row in res.R:
            _emit(args, "  [ %s ]" % ", ".join(str(x) for x in row))
    return EXIT_OK


def cmd_enumerate(args):
    bindings = _single_bindings(_parse_bindings(args.bind))
    seed = catalog(args.seed, bindings)
    sols = enumerate_duals(seed, budget=args.budget)
    fam = automorphisms(args.seed)
    orbits = reduce_orbits(sols, fam)
    if args.format == "machine":
        _emit(args, "enumerate seed=%s solutions=%d orbits=%d"
              % (args.seed, len(sols), len(orbits)))
    else:
        _emit(args, "%d solutions, %d orbit representatives" % (len(sols), len(orbits)))
    for rep, members in orbits:
        label = ""
        if seed.superdim() == (1, 1) and args.seed in ("A11", "N11", "S11"):
            m = match_22(args.seed, rep)
            label = m[0] if m else "unmatched"
        line = ("orbit rep=%s members=%d class=%s"
                % (rep.describe_brackets().replace(" ", ""), len(members), label)
                if args.format == "machine"
                else "  rep %-28s members %d  %s"
                % (rep.describe_brackets(), len(members), label))
        _emit(args, line)
    return EXIT_OK


def cmd_classify(args):
    bindings = _single_bindings(_parse_bindings(args.bind))
    specs = []
    for rid in args.rows.split(","):
        rid = rid.strip()
        entry = get_catalog().triples.get(rid)
        if entry is None:
            raise UnknownId(rid)
        sub = {k: v for k, v in bindings.items() if k in entry.ctx.params}
        specs.append((rid, sub))
    result = classify_doubles(specs, budget=args.budget,
                              strategy=args.strategy)
    for line in result.lines(args.format):
        _emit(args, line)
    return EXIT_OK


def cmd_report(args):
    bindings = _parse_bindings(args.bind)
    flat = {}
    for k, v in bindings.items():
        flat[k] = v if len(v) > 1 else v[0]
    rep = report(args.target, flat or None, budget=args.budget)
    _emit(args, rep.render(args.format))
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


def cmd_list(args):
    _emit(args, "algebras: %s" % ", ".join(list_algebras()))
    for table in ("22", "42", "24"):
        _emit(args, "triples (%s): %s" % (table, ", ".join(table_rows(table))))
    _emit(args, "certificates: %s" % ", ".join(list_certificates()))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="supertriples",
        description="Exact computations with Manin supertriples and "
                    "Drinfel'd superdoubles in low dimensions.")
    ap.add_argument("--format", choices=("text", "machine"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="axioms of an algebra / compatibility of a triple")
    p.add_argument("--algebra")
    p.add_argument("--triple")
    p.add_argument("--file")
    p.add_argument("--bind", action="append")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("double", help="print the double's brackets")
    p.add_argument("--triple", required=True)
    p.add_argument("--bind", action="append")
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("invariants", help="commutant fingerprint at numeric bindings")
    p.add_argument("--triple", required=True)
    p.add_argument("--bind", action="append")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify-iso", help="verify a certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--bind", action="append")
    p.set_defaults(func=cmd_verify_iso)

    p = sub.add_parser("solve-r", help="solve the shear equation for a (1,n) seed")
    p.add_argument("--algebra", required=True)
    p.add_argument("--g", help="numeric alpha,beta,gamma (default: symbolic)")
    p.add_argument("--bind", action="append")
    p.set_defaults(func=cmd_solve_r)

    p = sub.add_parser("enumerate", help="enumerate dual algebras for a seed")
    p.add_argument("--seed", required=True)
    p.add_argument("--bind", action="append")
    p.add_argument("--budget", type=int, default=300000)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="group triples into double classes")
    p.add_argument("--rows", required=True, help="comma separated triple ids")
    p.add_argument("--bind", action="append")
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--strategy", choices=("auto", "sweep", "seeded", "grid"),
                   default="auto")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("report", help="reproduce a table or theorem")
    p.add_argument("--target", required=True, choices=REPORT_TARGETS)
    p.add_argument("--bind", action="append")
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("list", help="list catalog contents")
    p.set_defaults(func=cmd_list)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print("budget exhausted: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except (ConstraintViolation, InconsistentRadical, UnknownId,
            UnknownName) as exc:
        print("constraint violation: %s" % exc, file=sys.stderr)
        return EXIT_CONSTRAINT
    except SuperTriplesError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
