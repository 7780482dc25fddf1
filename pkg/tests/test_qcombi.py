from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfforge.exact import CyclotomicNumber, LaurentElement, cyclo_root, units_mod
from hopfforge.fraction import enumerate_fractions, validate_fraction
from hopfforge.qcombi import PhiContext, bracket_keep, bracket_omit, phi, qbinomial, verify_identities

X = LaurentElement.monomial


def subset_qbinomial(n: int, k: int, q: CyclotomicNumber) -> CyclotomicNumber:
    """[n choose k]_q as a sum over k-subsets of {0..n-1} weighted by q^(sum - k(k-1)/2)."""
    total = CyclotomicNumber.rational(0)
    for subset in itertools.combinations(range(n), k):
        total = total + q ** (sum(subset) - k * (k - 1) // 2)
    return total


def ctx_for(m, parts, d=1, k=1):
    return PhiContext(validate_fraction(m, parts), d, cyclo_root(m, k))


# -- phi -----------------------------------------------------------------------

def test_phi_example():
    ctx = ctx_for(6, (2, 3))
    assert phi(ctx, 0, 0) == 1 - cyclo_root(3, 1) * X(2)


def test_phi_vanishing_index():
    # j = -m_i gives the coordinate e_i - 1, hence the factor 1 - x^(m_i d)
    ctx = ctx_for(6, (2, 3), d=2)
    for i, p in enumerate(ctx.spec.parts):
        assert phi(ctx, i, -p) == 1 - X(p * 2)


@pytest.mark.parametrize("m,parts", [(6, (2, 3)), (5, (1,)), (12, (3, 4)), (4, (3,))])
def test_phi_periodic(m, parts):
    ctx = ctx_for(m, parts, d=3)
    for i in range(len(parts)):
        for j in range(m):
            assert phi(ctx, i, j) == phi(ctx, i, j + m) == phi(ctx, i, j - 5 * m)


def test_gamma_order_enforced():
    with pytest.raises(ValueError):
        PhiContext(validate_fraction(4, (1,)), 1, cyclo_root(2, 1))


# -- brackets --------------------------------------------------------------------

@pytest.mark.parametrize("m,parts", [(6, (2, 3)), (5, (1,)), (12, (3, 4)), (8, (1,))])
def test_keep_and_omit_partition_the_cycle(m, parts):
    ctx = ctx_for(m, parts)
    for i, e in enumerate(ctx.spec.exponents):
        for s in range(-e, 2 * e):
            for t in range(-e, 2 * e):
                keep, omit = ctx.keep_indices(i, s, t), ctx.omit_indices(i, s, t)
                assert not set(keep) & set(omit)
                union = sorted(keep + omit)
                if (s - t - 1) % e == 0:
                    # s = t + 1: the empty range, or the whole cycle when it wraps
                    assert union in ([], list(range(e)))
                    if not union:
                        continue
                assert union == list(range(e))
                assert bracket_keep(ctx, i, s, t) * bracket_omit(ctx, i, s, t) \
                    == ctx.full_product(i)


def test_bracket_examples():
    ctx = ctx_for(3, (1,))
    g = ctx.gammas[0]
    p = [1 - g ** (1 + k) * X(1) for k in range(3)]
    assert bracket_keep(ctx, 0, 1, 2) == p[1] * p[2]
    assert bracket_omit(ctx, 0, 1, 2) == p[0]
    assert bracket_omit(ctx, 0, 0, 0) == p[1] * p[2]
    assert bracket_keep(ctx, 0, 2, 0) == p[2] * p[0]
    assert ctx.full_product(0) == 1 - X(3)


# -- q-binomials -------------------------------------------------------------------

roots = [cyclo_root(n, k) for n in range(1, 13) for k in range(n)]


@pytest.mark.parametrize("q", roots, ids=str)
def test_q_pascal_and_subset_oracle(q):
    for n in range(0, 13):
        for k in range(0, n + 1):
            value = qbinomial(n, k, q)
            if 0 < k < n:
                assert value == qbinomial(n - 1, k - 1, q) + q ** k * qbinomial(n - 1, k, q)
            if n <= 9:
                assert value == subset_qbinomial(n, k, q)


def test_qbinomial_examples():
    assert qbinomial(4, 2, -1) == 2
    assert qbinomial(4, 2, 1) == 6
    assert qbinomial(3, 4, cyclo_root(3, 1)) == 0
    # [3 choose 1]_q at a primitive cube root vanishes
    assert qbinomial(3, 1, cyclo_root(3, 1)) == 0


@given(st.integers(1, 12), st.integers(0, 12), st.data())
@settings(max_examples=60, deadline=None)
def test_qbinomial_symmetry(n, k, data):
    q = cyclo_root(n, data.draw(st.integers(0, n - 1)))
    top = data.draw(st.integers(k, 12))
    assert qbinomial(top, k, q) == qbinomial(top, top - k, q)


# -- the identity report -------------------------------------------------------------

identity_cases = [(f.m, f.parts) for m in range(2, 13) for f in enumerate_fractions(m)]


@pytest.mark.parametrize("m,parts", identity_cases)
def test_identities_hold(m, parts):
    for k in units_mod(m)[:2]:
        for d in (1, 2):
            report = verify_identities(ctx_for(m, parts, d, k))
            failing = [c.name for c in report.checks if c.status == "fail"]
            assert not failing


@pytest.mark.parametrize("m,parts", [(6, (2, 3)), (12, (3, 4)), (10, (2, 5))])
def test_binomial_modulus_readings_agree(m, parts):
    a = verify_identities(ctx_for(m, parts), "exponent")
    b = verify_identities(ctx_for(m, parts), "m")
    assert a.passed and b.passed
    assert [c.status for c in a.checks] == [c.status for c in b.checks]


def test_exponent_one_checks_are_skipped():
    report = verify_identities(ctx_for(6, (2, 3)))
    assert report.passed
    assert all(c.status != "fail" for c in report.checks)
    statuses = {c.name: c.status for c in report.checks}
    assert statuses["part2:shifted-omit-sum"] == "pass"
