from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hopfforge.exact import (CyclotomicNumber, DivisionByZero, LaurentElement, cyclo_root,
                             cyclotomic_polynomial, euler_phi, format_cyclotomic, laurent_x,
                             parse_cyclotomic, units_mod)

conductors = st.integers(min_value=1, max_value=60)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def cyclotomics(draw, conductor=None):
    n = draw(conductors) if conductor is None else conductor
    coeffs = draw(st.dictionaries(st.integers(0, n - 1), rationals, max_size=4))
    return CyclotomicNumber(n, coeffs)


def close(a: complex, b: complex) -> bool:
    return abs(a - b) < 1e-7 * (1 + abs(a) + abs(b))


# -- worked examples ---------------------------------------------------------

def test_small_roots():
    assert cyclo_root(1, 0) == 1
    assert cyclo_root(2, 1) == -1
    assert cyclo_root(6, 3) == -1
    assert cyclo_root(4, 1) * cyclo_root(4, 1) == -1


def test_cube_root_sum():
    z3 = cyclo_root(3, 1)
    assert z3 + z3 ** 2 == -1


def test_inverse_is_fourth_power():
    z5 = cyclo_root(5, 1)
    assert z5 ** -1 == z5 ** 4
    assert z5.inverse() * z5 == 1


def test_laurent_difference_of_squares():
    x = laurent_x()
    assert (1 - x) * (1 + x) == 1 - x ** 2
    assert (x ** -2) * (x ** 2) == LaurentElement.constant(1)


def test_laurent_bar_and_evaluate():
    x = laurent_x()
    p = 1 - cyclo_root(3, 1) * x ** 2
    assert p.bar() == 1 - cyclo_root(3, 1) * x ** -2
    assert p.evaluate(cyclo_root(6, 1)) == 1 - cyclo_root(3, 1) * cyclo_root(3, 1)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        CyclotomicNumber.rational(0).inverse()
    with pytest.raises(ZeroDivisionError):
        cyclo_root(5, 1) / (cyclo_root(5, 1) - cyclo_root(5, 1))


def test_cyclotomic_polynomial_degrees():
    for n in range(1, 61):
        assert len(cyclotomic_polynomial(n)) - 1 == euler_phi(n)
    assert cyclotomic_polynomial(4) == (1, 0, 1)


def test_cyclotomic_polynomial_matches_sympy():
    sympy = pytest.importorskip("sympy")
    x = sympy.Symbol("x")
    for n in range(1, 41):
        coeffs = tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, x)).all_coeffs()))
        assert cyclotomic_polynomial(n) == coeffs


@pytest.mark.parametrize("n", range(1, 61))
def test_primitive_roots_have_exact_order(n):
    for k in units_mod(n):
        assert cyclo_root(n, k).multiplicative_order() == n


def test_order_of_non_roots():
    assert CyclotomicNumber.rational(2).multiplicative_order() is None
    assert (1 + cyclo_root(5, 1)).multiplicative_order() is None


# -- field axioms (hypothesis, conductors up to 60) -------------------------

@st.composite
def triples(draw, pool=conductors):
    """Three numbers at conductors whose lcm stays at most 60."""
    n = draw(pool)
    subs = [k for k in range(1, n + 1) if n % k == 0]
    return tuple(draw(cyclotomics(draw(st.sampled_from(subs)))) for _ in range(3))


@given(triples())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(abc):
    a, b, c = abc
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == 0


@given(cyclotomics())
@settings(max_examples=80, deadline=None)
def test_multiplicative_inverse(a):
    assume(not a.is_zero())
    assert a * a.inverse() == 1


@given(triples())
@settings(max_examples=80, deadline=None)
def test_complex_embedding_is_a_homomorphism(abc):
    a, b, _ = abc
    assert close((a + b).to_complex(), a.to_complex() + b.to_complex())
    assert close((a * b).to_complex(), a.to_complex() * b.to_complex())


@given(conductors, st.integers(-100, 100))
def test_roots_match_complex_exponential(n, k):
    assert close(cyclo_root(n, k).to_complex(), cmath.exp(2j * math.pi * k / n))


# -- canonical form ----------------------------------------------------------

@given(cyclotomics(), st.integers(1, 4))
@settings(max_examples=80, deadline=None)
def test_lift_preserves_value_and_hash(a, factor):
    lifted = a.lift(a.conductor * factor)
    assert lifted == a
    assert hash(lifted) == hash(a)


@given(cyclotomics())
@settings(max_examples=80, deadline=None)
def test_minimize_idempotent(a):
    small = a.minimize()
    assert small == a
    assert small.minimize().conductor == small.conductor
    assert a.conductor % small.conductor == 0 or small.conductor % 4 == 2 or a.is_rational()


def test_minimal_conductor_examples():
    assert (cyclo_root(12, 4)).minimize().conductor == 3
    assert cyclo_root(6, 3).minimize().is_rational()
    assert (cyclo_root(8, 1) + cyclo_root(8, 7)).minimize() ** 2 == 2


# -- text round trip ---------------------------------------------------------

@given(cyclotomics())
@settings(max_examples=100, deadline=None)
def test_format_parse_round_trip(a):
    assert parse_cyclotomic(format_cyclotomic(a)) == a


def test_rational_text():
    assert parse_cyclotomic(format_cyclotomic(CyclotomicNumber.rational(Fraction(-3, 7)))) \
        == Fraction(-3, 7)


# -- square roots used by the representation layer --------------------------

@given(st.integers(1, 30), st.integers(0, 60))
def test_principal_sqrt_squares_back(n, k):
    r = cyclo_root(n, k)
    s = r.principal_sqrt()
    assert s * s == r
    arg = cmath.phase(s.to_complex())
    # chosen branch: argument in [0, pi)
    assert -1e-9 < arg < math.pi - 1e-9


def test_galois_conjugation():
    z = cyclo_root(7, 1)
    assert z.galois(3) == z ** 3
    assert z.conjugate() == z ** 6
    assert (z + z.conjugate()).conjugate() == z + z.conjugate()
