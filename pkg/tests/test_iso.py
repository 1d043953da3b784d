import random
from fractions import Fraction

import pytest

from supertriples.algebra import commutant_series
from supertriples.catalog import (appendix_certificate, automorphisms, catalog,
                                  catalog_triple, get_catalog, list_certificates)
from supertriples.errors import (ConstraintViolation, DimensionMismatch,
                                 NotAutomorphism)
from supertriples.iso import (Exhausted, IsoCertificate, from_automorphism,
                              search_iso, t_dual_certificate,
                              verify_certificate)
from supertriples.matrices import s_identity
from supertriples.triples import build_double, t_dual


def test_identity_certificate():
    D = build_double(catalog_triple("MT42_3"))
    ctx = D.ctx
    cert = IsoCertificate(ctx, s_identity(ctx, 6), D, D)
    ok, rep = verify_certificate(cert)
    assert ok and rep == []


def test_tfn11_both_branches():
    cert = appendix_certificate("TFN11")
    ok, _ = verify_certificate(cert)
    assert ok
    for eps in (1, -1):
        ok, _ = verify_certificate(appendix_certificate("TFN11", {"eps": eps}))
        assert ok


def test_appendix_a_s21_to_s21():
    ok, _ = verify_certificate(appendix_certificate("DD42_III_2"))
    assert ok


def test_appendix_b_radical_certificate():
    cert = appendix_certificate("DD24_III_2")
    assert cert.ctx.radical_name == "rho"
    ok, _ = verify_certificate(cert)
    assert ok
    # numeric instantiation with a perfect-square radicand binds the radical
    num = appendix_certificate("DD24_III_2",
                               {"lambda": 1, "kappa": 0, "gamma": -1})
    assert num.ctx.radical_name is None
    assert num.verify()


def test_appendix_b_sign_split_radical():
    cert = appendix_certificate("DD24_VIII")
    assert cert.ctx.radical_name == "s"
    ok, _ = verify_certificate(cert)
    assert ok


def test_all_appendix_certificates_symbolic():
    for cid in list_certificates():
        ok, rep = verify_certificate(appendix_certificate(cid))
        assert ok, (cid, rep[:2])


def test_composition_and_inverse_closure():
    c1 = appendix_certificate("DD42_III_1", {"eps": 1})
    c2 = appendix_certificate("DD42_III_2")
    assert c1.invert().verify()
    assert c2.invert().verify()
    # 4 -> 3 -> 5
    chain = c2.compose(c1.invert())
    assert chain.verify()
    assert chain.source.triple.id == "MT42_4"
    assert chain.target.triple.id == "MT42_5"


def test_composition_dimension_mismatch():
    c1 = appendix_certificate("TFN11", {"eps": 1})
    c2 = appendix_certificate("DD42_III_1", {"eps": 1})
    with pytest.raises(DimensionMismatch):
        c2.compose(c1)


def test_certificate_evenness_enforced():
    D = build_double(catalog_triple("MT22_1"))
    ctx = D.ctx
    C = s_identity(ctx, 4)
    C = [list(r) for r in C]
    C[0][1] = ctx.one()  # b row picks up an f column
    with pytest.raises(ConstraintViolation):
        IsoCertificate(ctx, C, D, D)


def test_t_duality_certificate_all_rows():
    cat = get_catalog()
    for table in ("22", "42", "24"):
        for rid in cat.table_rows(table):
            cert = t_dual_certificate(catalog_triple(rid))
            ok, _ = verify_certificate(cert)
            assert ok, rid


def test_from_automorphism_identity():
    t = catalog_triple("MT42_3")
    cert = from_automorphism(s_identity(t.ctx, 3), t)
    assert cert.verify()
    assert cert.target.triple.S_dual.tensor_equal(t.S_dual)


def test_from_automorphism_s21_example():
    t = catalog_triple("MT42_3")
    fam = automorphisms("S21").branches[0]
    _, A = fam.instantiate({"b": 0, "c": 2, "d": 1})
    lifted = [[t.ctx.const(x.as_fraction()) for x in row] for row in A]
    cert = from_automorphism(lifted, t)
    assert cert.verify()


def test_from_automorphism_rejects_non_automorphism():
    t = catalog_triple("MT42_3")
    ctx = t.ctx
    one, zero = ctx.one(), ctx.zero()
    swapped = [[zero, one, zero], [one, zero, zero], [zero, zero, one]]
    with pytest.raises(NotAutomorphism):
        from_automorphism(swapped, t)


def test_from_automorphism_form_condition_symbolic():
    """blockdiag(A, (A^{-1})^T) satisfies condition (i) identically."""
    for name, rid in (("S21", "MT42_3"), ("C3", "MT24_18")):
        entry = get_catalog().algebras[name]
        branch = entry.automorphisms().branches[0]
        triple = get_catalog().triples[rid].lift_triple(branch.ctx, {})
        cert = from_automorphism(branch.matrix, triple)
        _, residuals = verify_certificate(cert)
        assert not [r for r in residuals if r[0] == "form"]


def test_fingerprint_preserved_by_verified_certificates():
    rng = random.Random(2)
    samples = [("TFN11", {"eps": -1}), ("DD42_VI_2", {"p": 3, "eps": 1}),
               ("DD24_IIp_1", {"p": Fraction(1, 2), "alpha": 2, "beta": 1,
                               "gamma": -1}),
               ("DD24_IV_2", {"alpha": 1, "kappa": 2, "gamma": 5})]
    for cid, bind in samples:
        cert = appendix_certificate(cid, bind)
        assert cert.verify()
        assert commutant_series(cert.source) == commutant_series(cert.target), cid


def test_search_rediscovers_shear():
    src = build_double(catalog_triple("MT22_3"))
    tgt = build_double(catalog_triple("MT22_4", {"eps": 1}))
    res = search_iso(src, tgt, budget=3000)
    assert isinstance(res, IsoCertificate)
    assert res.verify()
    # the found matrix is of the shear form: identity plus an ft-row entry
    C = [[x.as_fraction() for x in row] for row in res.matrix]
    assert C[0][0] == C[1][1] == C[2][2] == C[3][3] == 1
    assert C[3][1] != 0


def test_search_finds_partial_duality_dd42v():
    src = build_double(catalog_triple("MT42_7", {"p": 0, "eps": 1}))
    tgt = build_double(catalog_triple("MT42_7", {"p": 0, "eps": -1}))
    res = search_iso(src, tgt, budget=4000)
    assert isinstance(res, IsoCertificate)
    assert res.verify()


def test_search_fingerprint_filter_dd42_iii_vs_iv0():
    src = build_double(catalog_triple("MT42_3"))
    tgt = build_double(catalog_triple("MT42_6", {"p": 0}))
    res = search_iso(src, tgt, budget=50)
    assert isinstance(res, Exhausted)
    assert "fingerprint" in res.reason
    assert res.budget == 50


def test_search_requires_numeric():
    src = build_double(catalog_triple("MT42_6"))
    with pytest.raises(ConstraintViolation):
        search_iso(src, src, budget=10)


def test_exhausted_carries_budget():
    src = build_double(catalog_triple("MT24_4", {"p": Fraction(1, 2)}))
    tgt = build_double(catalog_triple("MT24_9"))
    res = search_iso(src, tgt, budget=60)
    assert isinstance(res, Exhausted)
    assert res.budget == 60 and res.tried <= 60


def test_search_strategy_sweep_standalone():
    src = build_double(catalog_triple("MT42_7", {"p": 0, "eps": 1}))
    tgt = build_double(catalog_triple("MT42_7", {"p": 0, "eps": -1}))
    res = search_iso(src, tgt, strategy="sweep", budget=2000)
    assert isinstance(res, IsoCertificate) and res.verify()


def test_search_strategy_seeded_standalone():
    src = build_double(catalog_triple("MT22_3"))
    tgt = build_double(catalog_triple("MT22_4", {"eps": 1}))
    res = search_iso(src, tgt, strategy="seeded", budget=3000)
    assert isinstance(res, IsoCertificate) and res.verify()


def test_search_strategy_grid_standalone():
    src = build_double(catalog_triple("MT22_3"))
    tgt = build_double(catalog_triple("MT22_4", {"eps": 1}))
    res = search_iso(src, tgt, strategy="grid", budget=5000)
    assert isinstance(res, IsoCertificate) and res.verify()
