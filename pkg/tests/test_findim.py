from __future__ import annotations

import csv
import io
import math
import random
from collections import Counter

import pytest

from conftest import dbar, dt, taftfin
from hopfforge.exact import CyclotomicNumber, cyclo_root, parse_cyclotomic
from hopfforge.findim import (DimensionTooLarge, FinDimHopf, GcdNotOne,
                              IntegralSpaceNotOneDimensional, NotAHopfIdeal, build_dbar,
                              coradical_dimension, dbar_explicit_integral, dt_pivot_element,
                              dual_block_algebra, generated_ideal, group_likes, is_cocommutative,
                              is_commutative, is_left_integral, is_semisimple, jacobson_radical,
                              left_integral, pivotal_grouplike, quotient_hopf, same_subspace,
                              skew_primitives, verify_hopf)
from hopfforge.fraction import validate_fraction
from hopfforge.presented import ParityViolation
from hopfforge.suite import group_element_orders


def dihedral_orders(n: int) -> Counter:
    """Element orders of the dihedral group of order 2n."""
    out = Counter({2: n})
    for k in range(n):
        out[n // math.gcd(n, k)] += 1
    return out


# -- dimensions and axioms ----------------------------------------------------------

@pytest.mark.parametrize("m,d", [(1, 1), (1, 3), (2, 2), (3, 1), (2, 4), (4, 2)])
def test_dbar_dimension(m, d):
    assert dbar(m, d).dim == 2 * m * m * d


@pytest.mark.parametrize("m,d,t", [(2, 6, 3), (1, 1, 4), (2, 2, 1), (3, 1, 2)])
def test_dt_dimension(m, d, t):
    assert dt(m, d, t).dim == 2 * m * m * t


@pytest.mark.parametrize("m,parts", [(2, (1,)), (3, (1,)), (6, (2, 3)), (1, (1,))])
def test_finite_taft_dimension(m, parts):
    assert taftfin(m, parts).dim == m * m


@pytest.mark.parametrize("build", [lambda: dbar(2, 2), lambda: dbar(3, 1), lambda: dt(2, 6, 3),
                                   lambda: taftfin(6, (2, 3)), lambda: dt(1, 1, 4)],
                         ids=["dbar22", "dbar31", "dt263", "taft6", "dt114"])
def test_hopf_axioms_exhaustive(build):
    report = verify_hopf(build(), "exhaustive")
    assert report.passed, [c.to_json() for c in report.checks if c.status == "fail"]


def test_generator_mode_agrees(dbar22):
    assert verify_hopf(dbar22, "generators").passed


def test_dimension_cap(monkeypatch):
    monkeypatch.setenv("HOPFFORGE_MAX_DIM", "10")
    with pytest.raises(DimensionTooLarge):
        build_dbar(validate_fraction(2, (1,)), 2, cyclo_root(2, 1))


def test_gcd_and_parity_guards():
    with pytest.raises(GcdNotOne):
        build_dbar(validate_fraction(3, (2,)), 1, cyclo_root(3, 1))
    with pytest.raises(ParityViolation):
        build_dbar(validate_fraction(2, (1,)), 1, cyclo_root(2, 1))


# -- integrals -------------------------------------------------------------------------

@pytest.mark.parametrize("m,d", [(2, 2), (3, 1), (1, 3), (2, 4)])
def test_explicit_integral(m, d):
    H = dbar(m, d)
    lam = dbar_explicit_integral(H)
    assert is_left_integral(H, lam)
    assert H.eps(lam) == 2 * m * m * d
    solved = left_integral(H).vector
    # the integral space is one-dimensional, so the two agree up to scale
    k = next(iter(lam))
    assert {a: c * lam[k] for a, c in solved.items()} == {a: c * solved[k] for a, c in lam.items()}


def test_semisimplicity(dbar22, dt263):
    assert is_semisimple(dbar22)
    assert not is_semisimple(dt263)
    assert dt263.eps(left_integral(dt263).vector) == 0


def test_integral_space_must_be_one_dimensional():
    zero = CyclotomicNumber.rational(0)
    one = CyclotomicNumber.rational(1)
    H = FinDimHopf(["a", "b"], [[{}, {}], [{}, {}]], {0: one}, [{}, {}], [zero, zero],
                   [{}, {}])
    with pytest.raises(IntegralSpaceNotOneDimensional):
        left_integral(H)


# -- coradical and group-likes ------------------------------------------------------------

@pytest.mark.parametrize("m,d", [(2, 2), (3, 1), (2, 4)])
def test_group_likes_of_dbar(m, d):
    H = dbar(m, d)
    gl = group_likes(H)
    assert len(gl.elements) == m * m * d
    assert gl.certified
    assert coradical_dimension(H) == H.dim


def test_matrix_blocks(dbar22):
    gamma = dbar22.meta["presentation"].gamma
    for blk in dbar22.meta["blocks"]:
        cert = dual_block_algebra(dbar22, blk["vectors"], gamma)
        assert cert.ok and cert.matrix_size == 2 and cert.dim == 4
    one_dim = dual_block_algebra(dbar22, {(0, 0): dbar22.unit}, None)
    assert one_dim.ok and one_dim.matrix_size == 1


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_m_one_dbar_is_dihedral(d):
    H = dbar(1, d)
    gl = group_likes(H)
    assert len(gl.elements) == 2 * d and gl.certified
    assert is_cocommutative(H)[0]
    assert group_element_orders(H, gl.elements) == dihedral_orders(d)


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_m_one_dt_is_dihedral(t):
    H = dt(1, 1, t)
    gl = group_likes(H)
    assert len(gl.elements) == 2 * t
    assert is_cocommutative(H)[0]
    assert is_semisimple(H)
    assert group_element_orders(H, gl.elements) == dihedral_orders(t)


def test_dt_coradical_is_proper(dt263):
    assert coradical_dimension(dt263) < dt263.dim
    gl = group_likes(dt263)
    assert gl.certified


def test_y_is_skew_primitive(dt263):
    space = skew_primitives(dt263, dt263.unit, dt263.gens["g"])
    assert same_subspace(space, [dt263.gens["y1"]])


# -- pivots ------------------------------------------------------------------------------

def test_dt_pivot(dt263):
    assert pivotal_grouplike(dt263, [dt_pivot_element(dt263)]) is not None


@pytest.mark.parametrize("m,parts", [(3, (1,)), (6, (2, 3)), (5, (2,))])
def test_finite_taft_pivot(m, parts):
    H = taftfin(m, parts)
    g = H.gens["g"]
    g0 = H.unit
    for _ in range(sum(parts)):
        g0 = H.multiply(g0, g)
    assert pivotal_grouplike(H, [g0]) is not None
    assert pivotal_grouplike(H, [H.unit]) is None


def test_cocommutative_pivot_is_trivial():
    H = dbar(1, 3)
    assert pivotal_grouplike(H, [H.unit]) is not None


# -- radicals and quotients ------------------------------------------------------------

@pytest.mark.parametrize("m,parts", [(3, (1,)), (6, (2, 3)), (4, (1,))])
def test_finite_taft_radical_and_quotient(m, parts):
    H = taftfin(m, parts)
    rad = jacobson_radical(H)
    ideal = generated_ideal(H, [H.gens[f"y{k + 1}"] for k in range(len(parts))])
    assert same_subspace(rad, ideal.basis())
    Q, _ = quotient_hopf(H, ideal.basis())
    assert Q.dim == m
    assert is_commutative(Q)[0] and is_cocommutative(Q)[0]
    assert len(group_likes(Q).elements) == m
    assert verify_hopf(Q).passed


def test_dt_radical_and_quotient(dt263):
    rad = jacobson_radical(dt263)
    gens = [dt263.gens["y1"], dt263.gens["u1"]]
    assert same_subspace(rad, generated_ideal(dt263, gens).basis())
    Q, _ = quotient_hopf(dt263, gens)
    assert Q.dim == 12
    assert is_semisimple(Q)
    assert verify_hopf(Q).passed


def test_dbar_radical_vanishes(dbar22):
    assert jacobson_radical(dbar22) == []


def test_quotient_needs_hopf_ideal(dbar22):
    # g - 1 has counit zero but g - gamma does not
    bad = dict(dbar22.gens["g"])
    bad[0] = bad.get(0, CyclotomicNumber.rational(0)) + 1
    with pytest.raises(NotAHopfIdeal):
        quotient_hopf(dbar22, [bad])


# -- negative controls -------------------------------------------------------------------

def test_single_product_corruption_detected(dbar22):
    rng = random.Random(3)
    for _ in range(5):
        a, b = rng.randrange(dbar22.dim), rng.randrange(dbar22.dim)
        k = rng.randrange(dbar22.dim)
        report = verify_hopf(dbar22.corrupt_product(a, b, k), "exhaustive")
        assert not report.passed
        assert any(c.witness for c in report.checks if c.status == "fail")


def test_single_coproduct_corruption_detected(dt263):
    bad = dt263.corrupt_coproduct(3, (1, 2))
    assert not verify_hopf(bad, "exhaustive").passed
    assert verify_hopf(dt263, "exhaustive").passed


# -- export --------------------------------------------------------------------------------

def test_csv_round_trip(dbar31):
    rows = list(csv.DictReader(io.StringIO(dbar31.to_csv())))
    index = {label: i for i, label in enumerate(dbar31.labels)}
    rebuilt = [[{} for _ in range(dbar31.dim)] for _ in range(dbar31.dim)]
    for row in rows:
        rebuilt[index[row["row"]]][index[row["col"]]][index[row["result"]]] = \
            parse_cyclotomic(row["scalar"])
    assert rebuilt == dbar31.mult


def test_basis_starts_with_unit(dbar22, dt263):
    for H in (dbar22, dt263, taftfin(3)):
        assert H.labels[0] == "1"
        assert H.unit == {0: CyclotomicNumber.rational(1)}


def test_dt_example_relations(dt263):
    H = dt263
    x, g, y, u0, u1 = (H.gens[k] for k in ("x", "g", "y1", "u0", "u1"))
    i = cyclo_root(4, 1)
    scale = lambda v, c: {k: c * w for k, w in v.items()}
    assert H.multiply(u0, u0) == g
    assert H.multiply(u0, u1) == scale(H.multiply(y, g), -i / 2)
    assert H.multiply(y, u0) == scale(u1, 2)
    assert H.multiply(y, u0) == scale(H.multiply(u0, y), i)
    assert H.multiply(u1, g) == scale(H.multiply(g, u1), -1)
    assert H.multiply(x, u0) == H.multiply(u0, H.multiply(x, x))
