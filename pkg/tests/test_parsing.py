from fractions import Fraction

import pytest

from supertriples.catalog import get_catalog
from supertriples.errors import ParseError
from supertriples.parsing import (Tokenizer, eval_ast, parse_catalog,
                                  parse_expr, parse_scalar, render_brackets,
                                  render_params)
from supertriples.scalars import Domain, ParamContext


def test_expression_basics():
    ctx = ParamContext([("p", Domain.free())])
    p = ctx.param("p")
    assert parse_scalar(ctx, "1/2") == Fraction(1, 2)
    assert parse_scalar(ctx, "p^2 - 1") == p * p - 1
    assert parse_scalar(ctx, "-(p + 1)/(2*p)") == -(p + 1) / (2 * p)
    assert parse_scalar(ctx, "sqrt(9/4)") == Fraction(3, 2)


def test_expression_radical():
    base = ParamContext([("g", Domain.free())])
    radicand = base.param("g").re[0]
    ctx = ParamContext([("g", Domain.free())], radicals=[("s", radicand)])
    s = ctx.param("s")
    assert parse_scalar(ctx, "sqrt(g)") == s
    assert parse_scalar(ctx, "1/s") == s.inv()
    with pytest.raises(ParseError):
        parse_scalar(ctx, "sqrt(g + 1)")


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_catalog("algebra X super_dim (1, ?)")
    assert "line 1" in str(err.value)


def test_trailing_input_rejected():
    ctx = ParamContext()
    with pytest.raises(ParseError):
        parse_scalar(ctx, "1 + 2 junk")


def test_domain_forms():
    text = """
    algebra T super_dim (1, 2)
      params { eps : sign; delta : {0, 1}; p : (-1, 1); q : [0, inf);
               k : free \\ {0, -1} }
      brackets { }
    """
    decl = parse_catalog(text)[0]
    ctx = decl.ctx
    assert ctx.domains["eps"].is_sign
    assert ctx.domains["delta"].values == (Fraction(0), Fraction(1))
    assert not ctx.domains["p"].allows(1)
    assert ctx.domains["q"].allows(0) and not ctx.domains["q"].allows(-1)
    assert not ctx.domains["k"].allows(0) and not ctx.domains["k"].allows(-1)


def test_bracket_combos():
    text = """
    algebra T super_dim (1, 2)
      params { a : free }
      brackets { [b1, f1] = a*f1 - f2; [f1, f2] = (a/2)*b1 }
    """
    decl = parse_catalog(text)[0]
    assert len(decl.brackets) == 2


def test_shipped_catalogs_roundtrip():
    """Parse -> re-render -> re-parse equals the original in memory."""
    cat = get_catalog()
    # algebras
    for name, entry in cat.algebras.items():
        alg = entry.algebra
        text = "algebra %s super_dim (%d, %d) %s %s" % (
            name, entry.grading.m, entry.grading.n,
            render_params(entry.ctx),
            render_brackets(alg.names, sorted(alg.brackets_dict().items())))
        redecl = parse_catalog(text)[0]
        from supertriples.catalog import AlgebraEntry
        rebuilt = AlgebraEntry(redecl).algebra
        assert rebuilt.ctx == alg.ctx
        assert rebuilt.tensor_equal(alg), name
    # triples
    for tid, entry in cat.triples.items():
        t = entry.triple
        left = render_brackets(t.S.names, sorted(t.S.brackets_dict().items()))
        right = render_brackets(t.S_dual.names,
                                sorted(t.S_dual.brackets_dict().items()))
        text = "triple %s super_dim (%d, %d) %s left %s right %s" % (
            tid, entry.grading.m, entry.grading.n, render_params(entry.ctx),
            left[len("brackets "):] and left.replace("brackets ", "", 1),
            right.replace("brackets ", "", 1))
        redecl = parse_catalog(text)[0]
        from supertriples.catalog import TripleEntry
        rebuilt = TripleEntry(redecl, cat.algebras).triple
        assert rebuilt.S.tensor_equal(t.S), tid
        assert rebuilt.S_dual.tensor_equal(t.S_dual), tid
    # automorphism blocks
    for name, entry in cat.algebras.items():
        if not entry.decl.autos:
            continue
        blocks = []
        for branch in entry.automorphisms():
            fam_params = "; ".join(
                "%s : %s" % (n, branch.ctx.domains[n].describe())
                for n in branch.family_params)
            matrix = "[%s]" % ", ".join(
                "[%s]" % ", ".join(str(x) for x in row)
                for row in branch.matrix)
            cons = "; ".join(str(c) for c in branch.constraints)
            blocks.append("automorphism { params { %s } matrix %s"
                          " constraints { %s } }" % (fam_params, matrix, cons))
        alg = entry.algebra
        text = "algebra %s super_dim (%d, %d) %s %s %s" % (
            name, entry.grading.m, entry.grading.n,
            render_params(entry.ctx),
            render_brackets(alg.names, sorted(alg.brackets_dict().items())),
            " ".join(blocks))
        from supertriples.catalog import AlgebraEntry
        rebuilt = AlgebraEntry(parse_catalog(text)[0])
        for old, new in zip(entry.automorphisms().branches,
                            rebuilt.automorphisms().branches):
            assert old.ctx == new.ctx, name
            assert all((a - b).is_zero() for ra, rb in zip(old.matrix, new.matrix)
                       for a, b in zip(ra, rb)), name
            assert len(old.constraints) == len(new.constraints)
    # certificates re-render through scalar syntax
    for cid, entry in cat.certs.items():
        cert = entry.certificate
        for row in cert.matrix:
            for x in row:
                assert cert.ctx.parse(str(x)) == x, cid


def test_comments_and_strings():
    text = '# leading comment\nalgebra A super_dim (1, 0) brackets { } comment "abelian"\n'
    decl = parse_catalog(text)[0]
    assert decl.comment == "abelian"


def test_tokenizer_unterminated_string():
    with pytest.raises(ParseError):
        Tokenizer('label "oops')
