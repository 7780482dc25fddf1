"""Fractions of a natural number and the parameter-level isomorphism tests.

A fraction of ``m`` is a list of parts ``m_1, ..., m_theta`` whose exponents
``e_i`` (least ``e`` with ``m | e * m_i``) multiply to ``m`` and such that
every residue mod ``m`` has a unique coordinate vector in the box
``0 <= a_i < e_i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterator, Sequence

from .exact import CyclotomicNumber


class ConditionFailed(ValueError):
    """A fraction condition is violated.

    ``index`` is the first failing condition (1-4); ``failed`` lists every
    failing condition and ``witness`` carries data locating the failure.
    """

    def __init__(self, index: int, witness, failed: Sequence[int] = ()):
        self.index = index
        self.witness = witness
        self.failed = tuple(failed) or (index,)
        super().__init__(f"condition ({index}) failed: {witness!r}")


def exponent(m: int, mi: int) -> int:
    """Least positive e with m | e * mi."""
    if m < 1 or mi < 1:
        raise ValueError("m and mi must be positive")
    return m // math.gcd(m, mi)


def _failures(m: int, parts: Sequence[int]) -> list[tuple[int, object]]:
    exps = [exponent(m, p) for p in parts]
    out: list[tuple[int, object]] = []
    bad = [(i, p, e) for i, (p, e) in enumerate(zip(parts, exps)) if math.gcd(e, p) != 1]
    if bad:
        i, p, e = bad[0]
        out.append((1, {"part_index": i, "part": p, "exponent": e}))
    pairs = [(i, j) for i, j in itertools.combinations(range(len(parts)), 2)
             if (parts[i] * parts[j]) % m]
    if pairs:
        i, j = pairs[0]
        out.append((2, {"pair": (i, j), "product": parts[i] * parts[j]}))
    if math.prod(exps) != m:
        out.append((3, {"exponents": exps, "product": math.prod(exps)}))
    seen: dict[int, tuple[int, ...]] = {}
    for box in itertools.product(*(range(e) for e in exps)):
        r = sum(a * p for a, p in zip(box, parts)) % m
        if r in seen:
            out.append((4, {"colliding": (seen[r], box), "residue": r}))
            break
        seen[r] = box
    return out


@dataclass(frozen=True)
class FractionSpec:
    """A validated fraction ``(m; m_1, ..., m_theta)``; parts are stored as given."""

    m: int
    parts: tuple[int, ...]
    _coords: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        table = {}
        for box in itertools.product(*(range(e) for e in self.exponents)):
            table[sum(a * p for a, p in zip(box, self.parts)) % self.m] = box
        object.__setattr__(self, "_coords", table)

    @cached_property
    def exponents(self) -> tuple[int, ...]:
        return tuple(exponent(self.m, p) for p in self.parts)

    @property
    def theta(self) -> int:
        return len(self.parts)

    @cached_property
    def m0(self) -> int:
        return reduce(math.gcd, self.parts)

    def coordinates(self, j: int) -> tuple[int, ...]:
        """The unique box vector (j_1..j_theta) with sum j_i m_i = j mod m."""
        return self._coords[j % self.m]

    def value(self, coords: Sequence[int]) -> int:
        return sum(a * p for a, p in zip(coords, self.parts)) % self.m

    def box(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(e) for e in self.exponents))

    def residues(self, modulus: int | None = None) -> list[int]:
        modulus = modulus or self.m
        return sorted(p % modulus for p in self.parts)

    def to_json(self) -> dict:
        return {"m": self.m, "parts": list(self.parts),
                "exponents": list(self.exponents), "m0": self.m0}


def validate_fraction(m: int, parts: Sequence[int]) -> FractionSpec:
    """Return the FractionSpec or raise ConditionFailed for the first broken condition."""
    if m < 1 or not parts or any(p < 1 for p in parts):
        raise ValueError("m and all parts must be positive and parts nonempty")
    fails = _failures(m, list(parts))
    if fails:
        index, witness = fails[0]
        raise ConditionFailed(index, witness, [f[0] for f in fails])
    return FractionSpec(m, tuple(parts))


def is_fraction(m: int, parts: Sequence[int]) -> bool:
    return not _failures(m, list(parts))


def enumerate_fractions(m: int, theta: int | None = None) -> list[FractionSpec]:
    """All fractions of m with parts in [1, m], as sorted multisets.

    Parts congruent to 0 (exponent 1) are excluded for m > 1, so lengths are
    bounded by the number of prime factors of m.  For m = 1 the unique
    fraction is {1}.
    """
    if m == 1:
        found = [FractionSpec(1, (1,))]
        return [f for f in found if theta in (None, 1)]
    candidates = list(range(1, m))
    max_len = sum(1 for _ in _prime_factors_with_multiplicity(m))
    lengths = [theta] if theta is not None else range(1, max_len + 1)
    result = []
    for k in lengths:
        if k < 1 or k > max_len:
            continue
        for combo in itertools.combinations_with_replacement(candidates, k):
            if math.prod(exponent(m, p) for p in combo) != m:
                continue
            if is_fraction(m, combo):
                result.append(FractionSpec(m, combo))
    return result


def _prime_factors_with_multiplicity(n: int) -> Iterator[int]:
    p = 2
    while p * p <= n:
        while n % p == 0:
            yield p
            n //= p
        p += 1
    if n > 1:
        yield n


def _root_power(xi: CyclotomicNumber, k: int) -> CyclotomicNumber:
    return xi ** k


def taft_fraction_iso(spec_a: FractionSpec, xi_a: CyclotomicNumber,
                      spec_b: FractionSpec, xi_b: CyclotomicNumber,
                      t_a: int | None = None, t_b: int | None = None) -> tuple[bool, int | None]:
    """Isomorphism test for (finite or infinite) fraction Taft algebras.

    Returns (True, x0) for a witness unit x0 with parts_b = x0 * parts_a
    (mod n, up to order) and xi_a = xi_b^x0, where n = m (finite, no t) or
    n = m t.
    """
    if spec_a.m != spec_b.m or spec_a.theta != spec_b.theta or t_a != t_b:
        return False, None
    n = spec_a.m * (t_a or 1)
    target = sorted(p % n for p in spec_b.parts)
    for x0 in range(1, n + 1):
        if math.gcd(x0, n) != 1:
            continue
        if sorted((p * x0) % n for p in spec_a.parts) != target:
            continue
        if xi_a == _root_power(xi_b, x0):
            return True, x0
    return False, None


def liu_basic_form(spec: FractionSpec, omega: int, gamma: CyclotomicNumber):
    """The normalized triple ({m_i/m0}, omega*m0, gamma^(m0^2))."""
    m0 = spec.m0
    parts = tuple(p // m0 for p in spec.parts)
    return FractionSpec(spec.m, parts), omega * m0, gamma ** (m0 * m0)


def liu_iso(a: tuple[FractionSpec, int, CyclotomicNumber],
            b: tuple[FractionSpec, int, CyclotomicNumber]) -> bool:
    """m = m', theta = theta', omega m0 = omega' m0' and gamma^(m0^2) = gamma'^(m0'^2)."""
    (sa, wa, ga), (sb, wb, gb) = a, b
    return (sa.m == sb.m and sa.theta == sb.theta and wa * sa.m0 == wb * sb.m0
            and ga ** (sa.m0 ** 2) == gb ** (sb.m0 ** 2))


def d_iso(a: tuple[FractionSpec, int, CyclotomicNumber],
          b: tuple[FractionSpec, int, CyclotomicNumber]) -> bool:
    """Same test as :func:`liu_iso` with the step d in place of omega."""
    return liu_iso(a, b)
