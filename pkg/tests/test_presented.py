from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfforge.exact import cyclo_root
from hopfforge.fraction import validate_fraction
from hopfforge.presented import (GI, NoCompatibleRoot, ParityViolation, PresentationError, G, U,
                                 X, XI, Y, build_family, mono_character, verify_associativity,
                                 verify_central, verify_coassoc_counit_antipode,
                                 verify_relation_compatibility, verify_squared_antipode,
                                 winding_automorphisms, winding_order)


def taft(m, parts, t, k=1, rule="reduced"):
    return build_family("taft", validate_fraction(m, parts), t=t, xi=cyclo_root(m * t, k),
                        exponent_rule=rule)


def liu(m, parts, omega, k=1):
    return build_family("liu", validate_fraction(m, parts), omega=omega, gamma=cyclo_root(m, k))


def dfam(m, parts, d, k=1, **kw):
    return build_family("dfrac", validate_fraction(m, parts), d=d, gamma=cyclo_root(m, k), **kw)


CASES = {
    "T(3;1,t=2)": lambda: taft(3, (1,), 2),
    "T(6;2,3)": lambda: taft(6, (2, 3), 1),
    "T(3;2,t=2)": lambda: taft(3, (2,), 2),
    "T(3;2,t=2,plain)": lambda: taft(3, (2,), 2, rule="plain"),
    "B(6;2,3)": lambda: liu(6, (2, 3), 1),
    "B(3;2)": lambda: liu(3, (2,), 3),
    "B(5;1,k=2)": lambda: liu(5, (1,), 2, k=2),
    "D(2;1,d=2)": lambda: dfam(2, (1,), 2),
    "D(3;1,d=1)": lambda: dfam(3, (1,), 1),
    "D(6;2,3,d=2)": lambda: dfam(6, (2, 3), 2),
    "D(1;1,d=3)": lambda: dfam(1, (1,), 3),
    "D(4;1,d=2)": lambda: dfam(4, (1,), 2, k=3),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_relations_respected(name):
    P = CASES[name]()
    rel = verify_relation_compatibility(P)
    axioms = verify_coassoc_counit_antipode(P)
    assert rel.passed, [c.to_json() for c in rel.checks if c.status == "fail"]
    assert axioms.passed, [c.to_json() for c in axioms.checks if c.status == "fail"]


@pytest.mark.parametrize("name", ["D(2;1,d=2)", "D(1;1,d=3)", "B(3;2)", "T(3;1,t=2)"])
def test_associativity_on_bounded_monomials(name):
    P = CASES[name]()
    ok, witness = verify_associativity(P, P.basis_sample())
    assert ok, witness


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_associativity_sampled_d6(data):
    P = _d6()
    sample = P.basis_sample()
    triple = [data.draw(st.sampled_from(sample)) for _ in range(3)]
    ok, witness = verify_associativity(P, triple)
    # the triple check runs over all 27 orderings of the three monomials
    assert ok, witness


_D6 = []


def _d6():
    if not _D6:
        _D6.append(dfam(6, (2, 3), 2))
    return _D6[0]


@pytest.mark.parametrize("name", ["D(2;1,d=2)", "D(3;1,d=1)"])
def test_products_respect_bigrading(name):
    P = CASES[name]()
    sample = P.basis_sample()
    two_m = 2 * P.m
    for m1, m2 in itertools.product(sample, repeat=2):
        b1, b2 = P.bidegree(m1), P.bidegree(m2)
        for term in P.mul_mono(m1, m2):
            b = P.bidegree(term)
            assert b == ((b1[0] + b2[0]) % two_m, (b1[1] + b2[1]) % two_m)


@pytest.mark.parametrize("name", [n for n in CASES if n.startswith("D")])
def test_squared_antipode_is_conjugation_by_pivot(name):
    ok, witness = verify_squared_antipode(CASES[name]())
    assert ok, witness


def test_winding_orders():
    assert winding_order(taft(3, (1,), 2)) == 6
    assert winding_order(taft(6, (2, 3), 1)) == 6
    assert winding_order(liu(6, (2, 3), 1)) == 6
    assert winding_order(liu(5, (1,), 2)) == 5
    for m, parts, d in [(2, (1,), 2), (3, (1,), 1), (6, (2, 3), 2)]:
        P = dfam(m, parts, d)
        assert winding_order(P, "left") == 2 * m
        assert winding_order(P, "right") == 2 * m


def test_winding_maps_are_automorphisms():
    for name in ("D(2;1,d=2)", "B(6;2,3)", "T(6;2,3)"):
        P = CASES[name]()
        for side in ("left", "right"):
            winding_automorphisms(P, side)


def test_group_likes_and_coproducts():
    P = dfam(2, (1,), 6)
    g = P.gen_element(G)
    assert P.coproduct(g).terms == {((0, P.zero_ys, 1, -1), (0, P.zero_ys, 1, -1)): P.c(1)}
    assert P.counit(g) == 1
    # S(g) = g^-1 = x^(-md) g^(m-1)
    assert P.antipode(g) == P.from_monomial((-P.m * P.d, P.zero_ys, P.m - 1, -1))
    assert P.gen_element(GI) * g == P.one()
    # g^m = x^(md)
    assert g ** P.m == P.from_monomial((P.m * P.d, P.zero_ys, 0, -1))


def test_counit_and_antipode_on_u():
    P = dfam(3, (1,), 1)
    for j in range(P.m):
        u = P.gen_element(U(j))
        assert P.counit(u) == (1 if j == 0 else 0)
        # (eps (x) id) Delta = id
        acc = P.scalar(0)
        for (a, b), c in P.coproduct(u).terms.items():
            acc = acc + P.from_monomial(b, c * P.mono_counit(a))
        assert acc == u
        # sum S(u_1) u_2 = eps(u) 1
        conv = P.scalar(0)
        for (a, b), c in P.coproduct(u).terms.items():
            conv = conv + c * (P.mono_antipode(a) * P.from_monomial(b))
        assert conv == P.scalar(P.counit(u))


def test_skew_primitive_y():
    # Delta(y_k) = y_k (x) g^(m_k) + 1 (x) y_k
    P = liu(6, (2, 3), 1)
    one = (0, P.zero_ys, 0, -1)
    for k, p in enumerate(P.spec.parts):
        ys = tuple(1 if i == k else 0 for i in range(P.spec.theta))
        y = (0, ys, 0, -1)
        (gp, c), = P.g_power(p).terms.items()
        assert P.coproduct(P.gen_element(Y(k))).terms == {(y, gp): c, (one, y): P.c(1)}
        assert P.counit(P.gen_element(Y(k))) == 0


def test_u_products_example():
    P = dfam(2, (1,), 6)
    u0, u1 = P.gen_element(U(0)), P.gen_element(U(1))
    half = P.c(1) / 2
    g = (0, P.zero_ys, 1, -1)
    assert (u0 * u0).terms == {(-9, P.zero_ys, 1, -1): half, (-3, P.zero_ys, 1, -1): half}
    assert (u0 * u1).terms == {(-9, (1,), 1, -1): -half * cyclo_root(4, 1)}
    assert P.a == -9
    assert g in P.g_power(1).terms


def test_centrality():
    D = dfam(2, (1,), 2)
    x, xi = D.gen_element(X), D.gen_element(XI)
    assert verify_central(D, x + xi)
    assert not verify_central(D, x)
    assert not verify_central(D, D.gen_element(G))
    B = liu(6, (2, 3), 1)
    assert verify_central(B, B.gen_element(X))
    assert not verify_central(B, B.gen_element(G))


def test_canonical_character():
    D = dfam(2, (1,), 2)
    assert mono_character(D, (0, D.zero_ys, 0, 0)) == D.zeta
    assert D.zeta.multiplicative_order() == 2 * D.m
    assert D.zeta ** 2 == D.gamma
    assert mono_character(D, (0, D.zero_ys, 0, 1)) == 0
    assert mono_character(D, (0, (1,), 0, -1)) == 0


def test_errors():
    with pytest.raises(NoCompatibleRoot):
        taft(6, (3, 4), 2)
    with pytest.raises(ParityViolation):
        dfam(2, (1,), 1)
    with pytest.raises(PresentationError):
        build_family("taft", validate_fraction(3, (1,)), t=1, xi=cyclo_root(6, 1))
    with pytest.raises(PresentationError):
        build_family("liu", validate_fraction(3, (1,)), omega=0, gamma=cyclo_root(3, 1))
    with pytest.raises(ValueError):
        build_family("nope", validate_fraction(3, (1,)))


def test_corrupted_structure_constant_is_detected():
    bad = dfam(2, (1,), 2, uu_override={(0, 1): 2})
    report = verify_relation_compatibility(bad)
    assert not report.passed
    failing = [c.name for c in report.checks if c.status == "fail"]
    assert failing and all(name.startswith("u") for name in failing)
    assert any(name.startswith("u0u1:") for name in failing)


def test_keep_bracket_reading_is_rejected():
    bad = dfam(2, (1,), 2, bracket="keep")
    assert not verify_relation_compatibility(bad).passed
    assert verify_relation_compatibility(dfam(2, (1,), 2, bracket="omit")).passed
