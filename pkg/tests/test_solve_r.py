"""The shear solver against the certificate library's lower-left blocks.

The expected values are read off the shipped appendix matrices rather than
retyped, so the solver is checked against the independently entered data.
"""

from fractions import Fraction

import pytest

from supertriples.catalog import appendix_certificate, catalog, catalog_triple, get_catalog
from supertriples.errors import ConstraintViolation
from supertriples.iso import (NoSolution, RSolution, odd_action_matrices,
                              r_to_certificate, solve_r, verify_certificate)
from supertriples.scalars import Domain, ParamContext


def _symbolic_setup(seed_name, seed_params=(), seed_bind=None):
    params = [(n, Domain.free()) for n in seed_params]
    params += [(n, Domain.free()) for n in ("alpha", "beta", "gamma")]
    ctx = ParamContext(params)
    seed = get_catalog().algebras[seed_name].lift_algebra(ctx, seed_bind or {})
    H = odd_action_matrices(seed)[0]
    a, b, g = (ctx.param(n) for n in ("alpha", "beta", "gamma"))
    return ctx, seed, H, [[a, b], [b, g]]


def _appendix_block(cert_id, ctx):
    """Rows 5,6 x columns 2,3 of an appendix matrix, mapped into ctx."""
    cert = appendix_certificate(cert_id)
    mapper = cert.ctx.bind_scalars(ctx, {})
    return [[mapper(cert.matrix[4][1]), mapper(cert.matrix[4][2])],
            [mapper(cert.matrix[5][1]), mapper(cert.matrix[5][2])]]


def _eq_matrix(A, B):
    return all((x - y).is_zero() for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def test_block_II_p():
    ctx, _, H, G = _symbolic_setup("C2_p", ("p",))
    r = solve_r(H, G)
    assert isinstance(r, RSolution) and r.check()
    assert _eq_matrix(r.R, _appendix_block("DD24_IIp_1", ctx))


def test_block_II_1():
    ctx, _, H, G = _symbolic_setup("C2_1")
    r = solve_r(H, G)
    assert _eq_matrix(r.R, _appendix_block("DD24_II1_1", ctx))
    # H = identity: the equation degenerates to 2R = G
    two_r = [[x * 2 for x in row] for row in r.R]
    assert _eq_matrix(two_r, G)


def test_block_II_0():
    ctx, _, H, G = _symbolic_setup("C2_p", seed_bind={"p": 0})
    G0 = [[G[0][0], G[0][1]], [G[1][0], ctx.zero()]]
    r = solve_r(H, G0)
    expected = _appendix_block("DD24_II0", ctx)
    assert _eq_matrix(r.R, expected)


def test_block_III():
    ctx, _, H, G = _symbolic_setup("C3")
    G0 = [[G[0][0], G[0][1]], [G[1][0], ctx.zero()]]
    r = solve_r(H, G0)
    assert _eq_matrix(r.R, _appendix_block("DD24_III_1", ctx))


def test_block_IV():
    ctx, _, H, G = _symbolic_setup("C4")
    r = solve_r(H, G)
    assert _eq_matrix(r.R, _appendix_block("DD24_IV_1", ctx))


def test_block_V_p():
    ctx, _, H, G = _symbolic_setup("C5_p", ("p",))
    r = solve_r(H, G)
    assert _eq_matrix(r.R, _appendix_block("DD24_Vp", ctx))


def test_block_V_0():
    ctx, _, H, G = _symbolic_setup("C5_0")
    G0 = [[G[0][0], G[0][1]], [G[1][0], -G[0][0]]]
    r = solve_r(H, G0)
    assert _eq_matrix(r.R, _appendix_block("DD24_V0", ctx))


def test_exceptional_witnesses():
    ctx, _, H20, G = _symbolic_setup("C2_p", seed_bind={"p": 0})
    res = solve_r(H20, G)
    assert isinstance(res, NoSolution) and res.witness == ctx.param("gamma")

    ctx, _, H3, G = _symbolic_setup("C3")
    res = solve_r(H3, G)
    assert isinstance(res, NoSolution) and res.witness == ctx.param("gamma")

    ctx, _, Hm1, G = _symbolic_setup("C2_m1")
    res = solve_r(Hm1, G)
    assert isinstance(res, NoSolution) and res.witness == ctx.param("beta")

    ctx, _, H50, G = _symbolic_setup("C5_0")
    res = solve_r(H50, G)
    assert isinstance(res, NoSolution)
    assert res.witness == ctx.param("alpha") + ctx.param("gamma")


def test_numeric_exceptional_example():
    """H = diag(1,0) with gamma = 1 has no solution."""
    ctx = ParamContext([(n, Domain.free()) for n in ("alpha", "beta")])
    one, zero = ctx.one(), ctx.zero()
    H = [[one, zero], [zero, zero]]
    G = [[ctx.param("alpha"), ctx.param("beta")],
         [ctx.param("beta"), ctx.one()]]
    res = solve_r(H, G)
    assert isinstance(res, NoSolution)
    assert res.witness.is_one()


def test_r_to_certificate_zero_is_identity():
    t = catalog_triple("MT24_23")
    ctx = t.ctx
    H = odd_action_matrices(t.S)[0]
    zero_G = [[ctx.zero()] * 2 for _ in range(2)]
    r = solve_r(H, zero_G)
    cert = r_to_certificate(r, t)
    d = 6
    for i in range(d):
        for j in range(d):
            want = 1 if i == j else 0
            assert (cert.matrix[i][j] - want).is_zero()
    assert cert.verify()


def test_r_to_certificate_c4_matches_appendix():
    ctx, _, H, G = _symbolic_setup("C4")
    t = get_catalog().triples["MT24_23"].lift_triple(ctx, {})
    cert = r_to_certificate(solve_r(H, G), t)
    ref = appendix_certificate("DD24_IV_1")
    mapper = ref.ctx.bind_scalars(ctx, {})
    for i in range(6):
        for j in range(6):
            assert (cert.matrix[i][j] - mapper(ref.matrix[i][j])).is_zero()
    assert cert.verify()
    assert cert.target.triple.S_dual.tensor_equal(
        get_catalog().triples["FAM24_C4_G"].lift_triple(ctx, {}).S_dual)


def test_r_to_certificate_c5p_matches_appendix():
    ctx, _, H, G = _symbolic_setup("C5_p", ("p",))
    t = get_catalog().triples["MT24_27"].lift_triple(ctx, {})
    cert = r_to_certificate(solve_r(H, G), t)
    ref = appendix_certificate("DD24_Vp")
    mapper = ref.ctx.bind_scalars(ctx, {})
    for i in range(6):
        for j in range(6):
            assert (cert.matrix[i][j] - mapper(ref.matrix[i][j])).is_zero()


def test_solve_then_certify_satisfies_cpodm():
    """Generic-H seeds: solve_r output pushed through r_to_certificate
    verifies symbolically."""
    seeds = (("C2_p", ("p",), "MT24_4"), ("C4", (), "MT24_23"),
             ("C5_p", ("p",), "MT24_27"), ("C2_1", (), "MT24_9"))
    for name, ps, rid in seeds:
        ctx, _, H, G = _symbolic_setup(name, ps)
        t = get_catalog().triples[rid].lift_triple(ctx, {})
        cert = r_to_certificate(solve_r(H, G), t)
        ok, rep = verify_certificate(cert)
        assert ok, (name, rep[:2])


def test_odd_action_requires_no_odd_odd_brackets():
    with pytest.raises(ConstraintViolation):
        odd_action_matrices(catalog("F"))
