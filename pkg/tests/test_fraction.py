from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfforge.exact import cyclo_root, units_mod
from hopfforge.fraction import (ConditionFailed, FractionSpec, d_iso, enumerate_fractions,
                                exponent, is_fraction, liu_basic_form, liu_iso,
                                taft_fraction_iso, validate_fraction)


def oracle_is_fraction(m: int, parts) -> bool:
    """Direct reading of the four conditions."""
    es = [m // math.gcd(m, p) for p in parts]
    if any(math.gcd(e, p) != 1 for e, p in zip(es, parts)):
        return False
    if any((a * b) % m for a, b in itertools.combinations(parts, 2)):
        return False
    if math.prod(es) != m:
        return False
    sums = {sum(c * p for c, p in zip(box, parts)) % m
            for box in itertools.product(*(range(e) for e in es))}
    return len(sums) == m


def test_exponent_example():
    assert exponent(30, 12) == 5
    assert exponent(6, 6) == 1
    assert exponent(7, 3) == 7


def test_coordinates_example():
    spec = validate_fraction(6, (2, 3))
    assert list(spec.coordinates(-1)) == [1, 1]
    assert spec.exponents == (3, 2)


def test_enumerate_six():
    found = {f.parts for f in enumerate_fractions(6)}
    assert found == {(1,), (5,), (2, 3), (3, 4)}


def test_m_one():
    assert [f.parts for f in enumerate_fractions(1)] == [(1,)]
    assert validate_fraction(1, (1,)).coordinates(0) == (0,)


@pytest.mark.parametrize("m", range(2, 31))
def test_enumeration_matches_oracle(m):
    got = {f.parts for f in enumerate_fractions(m)}
    expected = set()
    for k in range(1, 5):
        for combo in itertools.combinations_with_replacement(range(1, m), k):
            if oracle_is_fraction(m, combo):
                expected.add(combo)
    assert got == expected


@pytest.mark.parametrize("m", range(2, 31))
def test_length_one_fractions_are_units(m):
    assert [f.parts[0] for f in enumerate_fractions(m, theta=1)] == units_mod(m)


@pytest.mark.parametrize("m", range(1, 31))
def test_box_is_bijective_and_sum_is_a_unit(m):
    for spec in enumerate_fractions(m):
        values = [spec.value(box) for box in spec.box()]
        assert sorted(values) == list(range(m))
        assert math.gcd(sum(spec.parts), m) == 1
        for j in range(-m, 2 * m):
            assert spec.value(spec.coordinates(j)) == j % m


def test_condition_order_reported():
    with pytest.raises(ConditionFailed) as info:
        validate_fraction(6, (2, 2))
    assert info.value.index == 2
    assert 3 in info.value.failed
    assert info.value.failed == (2, 3, 4)


def test_condition_one_witness():
    with pytest.raises(ConditionFailed) as info:
        validate_fraction(4, (2,))
    assert info.value.index == 1
    assert info.value.witness["part"] == 2


def test_invalid_input():
    with pytest.raises(ValueError):
        validate_fraction(0, (1,))
    with pytest.raises(ValueError):
        validate_fraction(3, ())
    assert not is_fraction(6, (2, 2))


def test_taft_isomorphism_examples():
    a, b = validate_fraction(5, (1,)), validate_fraction(5, (2,))
    z5 = cyclo_root(5, 1)
    ok, x0 = taft_fraction_iso(a, z5 ** 2, b, z5)
    assert ok and x0 == 2
    assert taft_fraction_iso(a, z5 ** 2, b, z5 ** 2) == (False, None)
    six = validate_fraction(6, (2, 3))
    assert taft_fraction_iso(six, cyclo_root(6, 1), six, cyclo_root(6, 1)) == (True, 1)
    assert taft_fraction_iso(a, z5, a, z5, t_a=1, t_b=2) == (False, None)


def test_liu_basic_form_example():
    z3 = cyclo_root(3, 1)
    spec, omega, gamma = liu_basic_form(validate_fraction(3, (2,)), 3, z3)
    assert spec.parts == (1,)
    assert omega == 6
    assert gamma == z3


def test_d_iso_example():
    spec = validate_fraction(2, (1,))
    assert not d_iso((spec, 2, cyclo_root(2, 1)), (spec, 4, cyclo_root(2, 1)))
    assert d_iso((spec, 2, cyclo_root(2, 1)), (spec, 2, cyclo_root(2, 1)))


fraction_cases = st.sampled_from([f for m in range(1, 25) for f in enumerate_fractions(m)])


@given(fraction_cases, st.integers(1, 6), st.data())
@settings(max_examples=60, deadline=None)
def test_basic_form_is_idempotent_and_isomorphic(spec, omega, data):
    k = data.draw(st.sampled_from(units_mod(spec.m) if spec.m > 1 else [0]))
    gamma = cyclo_root(spec.m, k)
    once = liu_basic_form(spec, omega, gamma)
    assert liu_basic_form(*once) == once
    assert once[0].m0 == 1
    assert liu_iso((spec, omega, gamma), once)
    assert liu_iso(once, (spec, omega, gamma))


def test_spec_is_hashable_and_serializable():
    spec = validate_fraction(6, (2, 3))
    assert spec == FractionSpec(6, (2, 3))
    assert {spec: 1}[FractionSpec(6, (2, 3))] == 1
    assert spec.to_json() == {"m": 6, "parts": [2, 3], "exponents": [3, 2], "m0": 1}
