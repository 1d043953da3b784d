"""Shipped catalogs: the superalgebras of superdimension (1,1), (2,1) and
(1,2) with their automorphism families, the triple lists of superdimension
(2,2), (4,2) and (2,4), and the certificate library.

Extra catalog directories can be supplied through the environment variable
SUPERTRIPLES_CATALOG_PATH (colon separated); their files extend or override
the shipped ones by id.
"""

from __future__ import annotations

import os
from fractions import Fraction

from .algebra import AutoBranch, AutomorphismFamily, Grading, SuperAlgebra
from .errors import ConstraintViolation, ParseError, UnknownId, UnknownName
from .iso import IsoCertificate
from .parsing import (AlgebraDecl, CertDecl, TripleDecl, build_context,
                      eval_ast, eval_generator_combo, parse_catalog)
from .scalars import Scalar
from .triples import ManinTriple, build_double

__all__ = ["get_catalog", "catalog", "automorphisms", "catalog_triple",
           "appendix_certificate", "table_rows", "list_algebras",
           "list_certificates"]

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
ENV_PATH = "SUPERTRIPLES_CATALOG_PATH"


def _simple_expr(ast):
    if ast[0] == "num":
        return ("const", Fraction(ast[1]))
    if ast[0] == "name":
        return ("var", ast[1])
    if ast[0] == "neg":
        inner = _simple_expr(ast[1])
        if inner[0] == "var":
            return ("negvar", inner[1])
        if inner[0] == "const":
            return ("const", -inner[1])
    return ("complex", ast)


class AlgebraEntry:
    def __init__(self, decl):
        self.decl = decl
        self.name = decl.name
        self.grading = Grading(decl.m, decl.n)
        self.ctx = decl.ctx
        genmap = {n: i for i, n in enumerate(self.grading.names(False))}
        brackets = {}
        for (a, b, ast) in decl.brackets:
            if a not in genmap or b not in genmap:
                raise ParseError("unknown generator in %s" % decl.name)
            comps = eval_generator_combo(ast, decl.ctx, genmap)
            key = (genmap[a], genmap[b])
            tgt = brackets.setdefault(key, {})
            for k, c in comps.items():
                tgt[k] = tgt.get(k, decl.ctx.zero()) + c
        self.algebra = SuperAlgebra.from_brackets(self.grading, decl.ctx,
                                                  brackets, name=decl.name)
        self._autos = None

    def automorphisms(self):
        if self._autos is None:
            branches = []
            for br in self.decl.autos:
                params = [(n, self.ctx.domains[n]) for n in self.ctx.params]
                params += br.params
                ctx = build_context(params, br.radicals)
                matrix = [[eval_ast(ast, ctx) for ast in row] for row in br.matrix]
                constraints = [eval_ast(ast, ctx) for ast in br.constraints]
                branches.append(AutoBranch(ctx, matrix, constraints,
                                           [n for n, _ in br.params]))
            self._autos = AutomorphismFamily(self.name, self.grading, branches)
        return self._autos

    def lift_algebra(self, target_ctx, bindings):
        """Algebra tensor mapped into target_ctx under param bindings."""
        mapper = self.ctx.bind_scalars(target_ctx, bindings)
        return self.algebra.map_scalars(target_ctx, mapper)


class TripleEntry:
    def __init__(self, decl, algebras):
        self.decl = decl
        self.id = decl.id
        self.grading = Grading(decl.m, decl.n)
        self.ctx = decl.ctx
        self.label = decl.label
        self.left_ref = decl.left if decl.left[0] == "ref" else None
        S = self._build_side(decl.left, dual=False, algebras=algebras)
        Sd = self._build_side(decl.right, dual=True, algebras=algebras)
        self.triple = ManinTriple(S, Sd, ident=decl.id, label=decl.label)

    def _build_side(self, side, dual, algebras):
        names = self.grading.names(dual)
        if side[0] == "ref":
            _, aname, bexprs = side
            if aname not in algebras:
                raise UnknownName(aname)
            entry = algebras[aname]
            if entry.grading != self.grading:
                raise ConstraintViolation("side %s has wrong superdimension" % aname)
            bindings = {n: eval_ast(ast, self.ctx) for n, ast in bexprs.items()}
            alg = entry.lift_algebra(self.ctx, bindings)
            return SuperAlgebra(self.grading, self.ctx, alg.F, names=names,
                                name=aname, dual_role=dual)
        _, bracket_decls = side
        genmap = {n: i for i, n in enumerate(names)}
        brackets = {}
        for (a, b, ast) in bracket_decls:
            if a not in genmap or b not in genmap:
                raise ParseError("unknown generator %r in triple %s" % (a, self.id))
            comps = eval_generator_combo(ast, self.ctx, genmap)
            key = (genmap[a], genmap[b])
            tgt = brackets.setdefault(key, {})
            for k, c in comps.items():
                tgt[k] = tgt.get(k, self.ctx.zero()) + c
        return SuperAlgebra.from_brackets(self.grading, self.ctx, brackets,
                                          names=names, dual_role=dual)

    def build(self, bindings=None):
        if not bindings:
            return self.triple
        return self.triple.substitute(bindings)

    def lift_triple(self, target_ctx, bindings):
        mapper = self.ctx.bind_scalars(target_ctx, bindings)
        S = self.triple.S.map_scalars(target_ctx, mapper)
        Sd = self.triple.S_dual.map_scalars(target_ctx, mapper)
        return ManinTriple(S, Sd, ident=self.id, label=self.label)


class CertEntry:
    def __init__(self, decl, triples):
        self.decl = decl
        self.id = decl.id
        self.ctx = decl.ctx
        self.source_id, src_exprs = decl.source
        self.target_id, tgt_exprs = decl.target
        if self.source_id not in triples or self.target_id not in triples:
            raise UnknownId("cert %s references unknown triples" % decl.id)
        self.source_bindings = {n: _simple_expr(a) for n, a in src_exprs.items()}
        self.target_bindings = {n: _simple_expr(a) for n, a in tgt_exprs.items()}
        src_vals = {n: eval_ast(a, self.ctx) for n, a in src_exprs.items()}
        tgt_vals = {n: eval_ast(a, self.ctx) for n, a in tgt_exprs.items()}
        src_triple = triples[self.source_id].lift_triple(self.ctx, src_vals)
        tgt_triple = triples[self.target_id].lift_triple(self.ctx, tgt_vals)
        matrix = [[eval_ast(ast, self.ctx) for ast in row] for row in decl.matrix]
        self.certificate = IsoCertificate(self.ctx, matrix,
                                          build_double(src_triple),
                                          build_double(tgt_triple),
                                          note=decl.id)

    def build(self, bindings=None):
        """Instantiate at the given parameter bindings; when they turn the
        radicand into a perfect rational square, the radical is bound to the
        positive root automatically."""
        if not bindings:
            return self.certificate
        bindings = dict(bindings)
        ctx = self.ctx
        if ctx.radical_name is not None and ctx.radical_name not in bindings:
            shadow = Scalar(ctx, (ctx.radicand, ctx.one().re[1]), None)
            partial = {k: v for k, v in bindings.items() if k in ctx.params}
            value = shadow.substitute(partial)
            if value.is_constant():
                q = value.as_fraction()
                if q < 0:
                    raise ConstraintViolation(
                        "radicand of %s is negative at these bindings" % ctx.radical_name)
                root = _exact_sqrt(q)
                if root is not None:
                    bindings[ctx.radical_name] = root
        return self.certificate.substitute(bindings)


def _exact_sqrt(q):
    from math import isqrt
    rn = isqrt(q.numerator)
    rd = isqrt(q.denominator)
    if rn * rn != q.numerator or rd * rd != q.denominator:
        return None
    return Fraction(rn, rd)


class Catalog:
    def __init__(self, texts):
        self.algebras = {}
        self.triples = {}
        self.certs = {}
        decls = []
        for text in texts:
            decls.extend(parse_catalog(text))
        for decl in decls:
            if isinstance(decl, AlgebraDecl):
                self.algebras[decl.name] = AlgebraEntry(decl)
        for decl in decls:
            if isinstance(decl, TripleDecl):
                self.triples[decl.id] = TripleEntry(decl, self.algebras)
        for decl in decls:
            if isinstance(decl, CertDecl):
                self.certs[decl.id] = CertEntry(decl, self.triples)

    def table_rows(self, table):
        prefix = "MT%s_" % table
        rows = [k for k in self.triples if k.startswith(prefix)]
        return sorted(rows, key=lambda k: int(k.split("_")[1]))


_CATALOG = None


def _catalog_texts():
    texts = []
    names = sorted(os.listdir(DATA_DIR))
    for fn in names:
        if fn.endswith(".cat"):
            with open(os.path.join(DATA_DIR, fn), "r") as fh:
                texts.append(fh.read())
    extra = os.environ.get(ENV_PATH, "")
    for d in filter(None, extra.split(os.pathsep)):
        if not os.path.isdir(d):
            continue
        for fn in sorted(os.listdir(d)):
            if fn.endswith(".cat"):
                with open(os.path.join(d, fn), "r") as fh:
                    texts.append(fh.read())
    return texts


def get_catalog(refresh=False):
    global _CATALOG
    if _CATALOG is None or refresh:
        _CATALOG = Catalog(_catalog_texts())
    return _CATALOG


def catalog(name, bindings=None):
    """A catalog superalgebra, optionally at parameter bindings."""
    cat = get_catalog()
    if name not in cat.algebras:
        raise UnknownName(name)
    alg = cat.algebras[name].algebra
    if bindings:
        alg = alg.substitute(bindings)
    return alg


def automorphisms(name):
    cat = get_catalog()
    if name not in cat.algebras:
        raise UnknownName(name)
    return cat.algebras[name].automorphisms()


def catalog_triple(ident, bindings=None):
    cat = get_catalog()
    if ident not in cat.triples:
        raise UnknownId(ident)
    return cat.triples[ident].build(bindings)


def appendix_certificate(pair_id, bindings=None):
    cat = get_catalog()
    if pair_id not in cat.certs:
        raise UnknownId(pair_id)
    return cat.certs[pair_id].build(bindings)


def table_rows(table):
    return get_catalog().table_rows(table)


def list_algebras():
    return sorted(get_catalog().algebras)


def list_certificates():
    return sorted(get_catalog().certs)
