"""Exact arithmetic in cyclotomic fields and Laurent polynomial rings.

A :class:`CyclotomicNumber` is an element of ``Q(z_N)`` stored as integer
numerators over the power basis ``1, z, ..., z^(phi(N)-1)`` together with a
single positive denominator.  Arithmetic between different conductors lifts
both operands to the least common multiple.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


class DivisionByZero(ZeroDivisionError):
    """Raised when inverting the zero element."""


# ---------------------------------------------------------------------------
# elementary number theory


def divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def euler_phi(n: int) -> int:
    result, k, p = n, n, 2
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    return result


def moebius(n: int) -> int:
    result, k, p = 1, n, 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1
    if k > 1:
        result = -result
    return result


def units_mod(n: int) -> list[int]:
    return [k for k in range(n) if math.gcd(k, n) == 1] if n > 1 else [0]


# ---------------------------------------------------------------------------
# cyclotomic polynomials and per-conductor tables


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (low-to-high) by a monic divisor."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


_phi_cache: dict[int, tuple[int, ...]] = {}
_table_cache: dict[int, "_Conductor"] = {}
_cache_lock = threading.Lock()


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    cached = _phi_cache.get(n)
    if cached is not None:
        return cached
    p = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        p = _poly_divexact(p, list(cyclotomic_polynomial(d)))
    result = tuple(p)
    with _cache_lock:
        _phi_cache.setdefault(n, result)
    return _phi_cache[n]


class _Conductor:
    """Precomputed data for one conductor N: reductions of z^k for 0 <= k < N."""

    __slots__ = ("n", "deg", "powers", "root_index", "units")

    def __init__(self, n: int):
        self.n = n
        phi = cyclotomic_polynomial(n)
        deg = len(phi) - 1
        self.deg = deg
        powers = []
        cur = [0] * deg
        cur[0] = 1
        for _ in range(n):
            powers.append(tuple(cur))
            # multiply by z and reduce with the monic relation
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(deg):
                    cur[j] -= top * phi[j]
        self.powers = tuple(powers)
        index: dict[tuple[int, ...], int] = {}
        # roots of unity in Q(z_N) form the group of order lcm(2, N)
        full = n if n % 2 == 0 else 2 * n
        for k, vec in enumerate(powers):
            j = k if n % 2 == 0 else 2 * k
            index.setdefault(vec, j)
            neg = tuple(-c for c in vec)
            index.setdefault(neg, (j + full // 2) % full)
        self.root_index = index
        self.units = units_mod(n)

    def reduce(self, coeffs: list[int]) -> list[int]:
        deg = self.deg
        if len(coeffs) <= deg:
            return coeffs + [0] * (deg - len(coeffs))
        out = coeffs[:deg]
        powers = self.powers
        n = self.n
        for k in range(deg, len(coeffs)):
            c = coeffs[k]
            if c:
                vec = powers[k % n]
                for j in range(deg):
                    if vec[j]:
                        out[j] += c * vec[j]
        return out


def _conductor(n: int) -> _Conductor:
    table = _table_cache.get(n)
    if table is None:
        table = _Conductor(n)
        with _cache_lock:
            table = _table_cache.setdefault(n, table)
    return table


# ---------------------------------------------------------------------------
# cyclotomic numbers


class CyclotomicNumber:
    """An exact element of the cyclotomic field Q(z_N).

    ``coefficients`` maps exponents ``k`` to rationals and denotes
    ``sum c_k z_N^k``; any exponents are accepted and reduced.
    """

    __slots__ = ("_n", "_num", "_den", "_hash")

    def __init__(self, conductor: int = 1, coefficients: Mapping[int, Rational] | None = None):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        table = _conductor(conductor)
        coefficients = coefficients or {}
        fracs = {k: Fraction(v) for k, v in coefficients.items() if v}
        den = 1
        for v in fracs.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        raw = [0] * table.deg
        for k, v in fracs.items():
            c = v.numerator * (den // v.denominator)
            vec = table.powers[k % conductor]
            for j in range(table.deg):
                if vec[j]:
                    raw[j] += c * vec[j]
        self._set(conductor, raw, den)

    def _set(self, n: int, num: list[int], den: int) -> None:
        g = den
        for c in num:
            if c:
                g = math.gcd(g, c)
                if g == 1:
                    break
        if not any(num):
            den, g = 1, 1
        if g != 1:
            num = [c // g for c in num]
            den //= g
        self._n = n
        self._num = tuple(num)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, n: int, num: list[int], den: int) -> "CyclotomicNumber":
        obj = cls.__new__(cls)
        obj._set(n, num, den)
        return obj

    # -- construction helpers -------------------------------------------------

    @classmethod
    def rational(cls, q: Rational, conductor: int = 1) -> "CyclotomicNumber":
        q = Fraction(q)
        deg = _conductor(conductor).deg
        return cls._raw(conductor, [q.numerator] + [0] * (deg - 1), q.denominator)

    @classmethod
    def coerce(cls, value: "Scalar", conductor: int = 1) -> "CyclotomicNumber":
        if isinstance(value, CyclotomicNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value, conductor)
        raise TypeError(f"cannot coerce {type(value).__name__} to CyclotomicNumber")

    # -- accessors ----------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return {k: Fraction(c, self._den) for k, c in enumerate(self._num) if c}

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self) -> bool:
        return any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def to_complex(self) -> complex:
        n = self._n
        return sum(c * complex(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n))
                   for k, c in enumerate(self._num) if c) / self._den

    # -- conductors -----------------------------------------------------------

    def lift(self, conductor: int) -> "CyclotomicNumber":
        """Re-express in Q(z_M) for a multiple M of the current conductor."""
        n = self._n
        if conductor == n:
            return self
        if conductor % n:
            raise ValueError(f"conductor {conductor} is not a multiple of {n}")
        step = conductor // n
        table = _conductor(conductor)
        raw = [0] * table.deg
        for k, c in enumerate(self._num):
            if c:
                vec = table.powers[(k * step) % conductor]
                for j in range(table.deg):
                    if vec[j]:
                        raw[j] += c * vec[j]
        return CyclotomicNumber._raw(conductor, raw, self._den)

    def galois(self, k: int) -> "CyclotomicNumber":
        """Apply the automorphism z_N -> z_N^k (k coprime to N)."""
        n = self._n
        table = _conductor(n)
        raw = [0] * table.deg
        for e, c in enumerate(self._num):
            if c:
                vec = table.powers[(e * k) % n]
                for j in range(table.deg):
                    if vec[j]:
                        raw[j] += c * vec[j]
        return CyclotomicNumber._raw(n, raw, self._den)

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def minimize(self) -> "CyclotomicNumber":
        """Return the same value expressed over the smallest possible conductor."""
        n = self._n
        for cand in divisors(n):
            if cand == n:
                return self
            fixing = [k for k in units_mod(n) if k % cand == 1 % cand]
            if all(self.galois(k) == self for k in fixing):
                return _solve_in_subfield(self, cand)
        return self

    # -- arithmetic ---------------------------------------------------------

    def _common(self, other) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if not isinstance(other, CyclotomicNumber):
            other = CyclotomicNumber.coerce(other, self._n)
        if other._n == self._n:
            return self, other
        lcm = self._n * other._n // math.gcd(self._n, other._n)
        return self.lift(lcm), other.lift(lcm)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            num = list(self._num)
            den = self._den * q.denominator
            num = [c * q.denominator for c in num]
            num[0] += q.numerator * self._den
            return CyclotomicNumber._raw(self._n, num, den)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        if a._den == b._den:
            return CyclotomicNumber._raw(a._n, [x + y for x, y in zip(a._num, b._num)], a._den)
        return CyclotomicNumber._raw(
            a._n, [x * b._den + y * a._den for x, y in zip(a._num, b._num)], a._den * b._den)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self._n, [-c for c in self._num], self._den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CyclotomicNumber._raw(self._n, [c * q.numerator for c in self._num],
                                         self._den * q.denominator)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        if b.is_rational():
            return CyclotomicNumber._raw(a._n, [c * b._num[0] for c in a._num], a._den * b._den)
        if a.is_rational():
            return CyclotomicNumber._raw(a._n, [c * a._num[0] for c in b._num], a._den * b._den)
        table = _conductor(a._n)
        deg = table.deg
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicNumber._raw(a._n, table.reduce(prod), a._den * b._den)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return CyclotomicNumber.rational(Fraction(self._den, self._num[0]), self._n)
        # product of the non-trivial Galois conjugates, divided by the norm
        acc = None
        for k in _conductor(self._n).units:
            if k == 1:
                continue
            conj = self.galois(k)
            acc = conj if acc is None else acc * conj
        norm = (self * acc).to_fraction()
        return acc * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = CyclotomicNumber.rational(1, self._n)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison and hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if other._n == self._n:
            return self._den == other._den and self._num == other._num
        a, b = self._common(other)
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    def normalized_trace(self) -> Fraction:
        """Trace to Q divided by the field degree; independent of the conductor."""
        n = self._n
        total = Fraction(0)
        for k, c in enumerate(self._num):
            if c:
                g = math.gcd(n, k)
                total += Fraction(c * moebius(n // g), euler_phi(n // g))
        return total / self._den

    # -- roots of unity -----------------------------------------------------

    def root_of_unity_exponent(self) -> tuple[int, int] | None:
        """Return (M, j) with self == z_M^j, or None if not a root of unity."""
        if self._den != 1:
            return None
        table = _conductor(self._n)
        j = table.root_index.get(self._num)
        if j is None:
            return None
        return (self._n if self._n % 2 == 0 else 2 * self._n), j

    def multiplicative_order(self) -> int | None:
        found = self.root_of_unity_exponent()
        if found is None:
            return None
        full, j = found
        return full // math.gcd(full, j)

    def principal_sqrt(self) -> "CyclotomicNumber":
        """Square root of a root of unity, chosen with argument in [0, pi)."""
        found = self.root_of_unity_exponent()
        if found is None:
            raise ValueError(f"{self} is not a root of unity")
        full, j = found
        return cyclo_root(2 * full, j)

    # -- formatting -----------------------------------------------------------

    def __str__(self) -> str:
        return format_cyclotomic(self)

    def __repr__(self) -> str:
        return f"CyclotomicNumber({format_cyclotomic(self)!r}, conductor={self._n})"


Scalar = Union[CyclotomicNumber, int, Fraction]


def _solve_in_subfield(value: CyclotomicNumber, sub: int) -> CyclotomicNumber:
    """Coordinates of ``value`` (known to lie in Q(z_sub)) in the basis of Q(z_sub)."""
    n = value.conductor
    deg_sub = euler_phi(sub)
    columns = [CyclotomicNumber(sub, {k: 1}).lift(n) for k in range(deg_sub)]
    # least-squares free: the lifted basis is linearly independent, so solve
    # the overdetermined system by elimination on the rational columns
    rows = len(value._num)
    mat = [[Fraction(columns[c]._num[r], columns[c]._den) for c in range(deg_sub)]
           + [Fraction(value._num[r], value._den)] for r in range(rows)]
    piv_cols = []
    rank = 0
    for c in range(deg_sub):
        p = next((r for r in range(rank, rows) if mat[r][c]), None)
        if p is None:
            continue
        mat[rank], mat[p] = mat[p], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [v * inv for v in mat[rank]]
        for r in range(rows):
            if r != rank and mat[r][c]:
                f = mat[r][c]
                mat[r] = [v - f * w for v, w in zip(mat[r], mat[rank])]
        piv_cols.append(c)
        rank += 1
    coeffs = {c: mat[i][-1] for i, c in enumerate(piv_cols)}
    result = CyclotomicNumber(sub, coeffs)
    if result.lift(n) != value:
        raise ArithmeticError("value does not lie in the requested subfield")
    return result


def cyclo_root(n: int, k: int) -> CyclotomicNumber:
    """The root of unity z_n^k in canonical reduced form."""
    if n < 1:
        raise ValueError("conductor must be positive")
    table = _conductor(n)
    return CyclotomicNumber._raw(n, list(table.powers[k % n]), 1)


def zero(conductor: int = 1) -> CyclotomicNumber:
    return CyclotomicNumber.rational(0, conductor)


def one(conductor: int = 1) -> CyclotomicNumber:
    return CyclotomicNumber.rational(1, conductor)


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_cyclotomic(value: CyclotomicNumber) -> str:
    """Serialize as ``c0 + c1*zN^1 + ...`` with reduced rational coefficients."""
    coeffs = value.coefficients
    if not coeffs:
        return "0"
    n = value.conductor
    parts = []
    for k in sorted(coeffs):
        c = coeffs[k]
        if k == 0:
            parts.append(_format_rational(c))
        elif c == 1:
            parts.append(f"z{n}^{k}")
        elif c == -1:
            parts.append(f"-z{n}^{k}")
        else:
            parts.append(f"{_format_rational(c)}*z{n}^{k}")
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


_TERM = re.compile(
    r"^(?P<coef>[+-]?\d+(?:/\d+)?)?\*?(?:z(?P<n>\d+)(?:\^(?P<k>[+-]?\d+))?)?$")


def parse_cyclotomic(text: str) -> CyclotomicNumber:
    """Inverse of :func:`format_cyclotomic`; also accepts ``zN^k`` root literals."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    s = re.sub(r"(?<![\^/*])-", "+-", s).lstrip("+")
    total: CyclotomicNumber | None = None
    for token in s.split("+"):
        if not token:
            raise ValueError(f"malformed scalar literal {text!r}")
        sign = 1
        if token.startswith("-"):
            sign, token = -1, token[1:]
        match = _TERM.match(token)
        if not match or (match.group("coef") is None and match.group("n") is None):
            raise ValueError(f"malformed scalar literal {text!r}")
        coef = Fraction(match.group("coef")) if match.group("coef") else Fraction(1)
        if match.group("n"):
            n = int(match.group("n"))
            k = int(match.group("k")) if match.group("k") is not None else 1
            term = cyclo_root(n, k) * (sign * coef)
        else:
            term = CyclotomicNumber.rational(sign * coef)
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentElement:
    """Sparse Laurent polynomial in one or two variables with cyclotomic coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, terms: Mapping[tuple[int, ...], Scalar] | None = None,
                 variables: tuple[str, ...] = ("x",)):
        if len(variables) not in (1, 2):
            raise ValueError("one or two variables supported")
        self.variables = tuple(variables)
        clean: dict[tuple[int, ...], CyclotomicNumber] = {}
        for exp, c in (terms or {}).items():
            exp = (exp,) if isinstance(exp, int) else tuple(exp)
            if len(exp) != len(self.variables):
                raise ValueError("exponent arity does not match variables")
            c = CyclotomicNumber.coerce(c)
            if exp in clean:
                c = clean[exp] + c
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self.terms = clean

    @classmethod
    def constant(cls, c: Scalar, variables: tuple[str, ...] = ("x",)) -> "LaurentElement":
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def monomial(cls, exp: int | tuple[int, ...], c: Scalar = 1,
                 variables: tuple[str, ...] = ("x",)) -> "LaurentElement":
        return cls({exp if isinstance(exp, tuple) else (exp,): c}, variables)

    def _check(self, other: "LaurentElement") -> None:
        if self.variables != other.variables:
            raise ValueError("variable sets differ")

    def _wrap(self, other) -> "LaurentElement":
        if isinstance(other, LaurentElement):
            self._check(other)
            return other
        return LaurentElement.constant(other, self.variables)

    def __add__(self, other):
        other = self._wrap(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return LaurentElement(terms, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return LaurentElement({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentElement):
            c = CyclotomicNumber.coerce(other)
            return LaurentElement({e: v * c for e, v in self.terms.items()}, self.variables)
        self._check(other)
        acc: dict[tuple[int, ...], CyclotomicNumber] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                acc[e] = acc[e] + v if e in acc else v
        return LaurentElement(acc, self.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible")
            (e, c), = self.terms.items()
            return LaurentElement({tuple(a * k for a in e): c ** k}, self.variables)
        result = LaurentElement.constant(1, self.variables)
        for _ in range(k):
            result = result * self
        return result

    def bar(self) -> "LaurentElement":
        """Substitute every variable by its inverse."""
        return LaurentElement({tuple(-a for a in e): c for e, c in self.terms.items()},
                              self.variables)

    def evaluate(self, *values: Scalar):
        total = CyclotomicNumber.rational(0)
        for e, c in self.terms.items():
            term = c
            for v, a in zip(values, e):
                term = term * (CyclotomicNumber.coerce(v) ** a)
            total = total + term
        return total

    def is_zero(self) -> bool:
        return not self.terms

    def degree_range(self) -> tuple[int, int]:
        if len(self.variables) != 1 or not self.terms:
            raise ValueError("degree range defined for nonzero univariate elements")
        exps = [e[0] for e in self.terms]
        return min(exps), max(exps)

    def __eq__(self, other):
        if isinstance(other, LaurentElement):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self == LaurentElement.constant(other, self.variables)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            mono = "*".join(f"{v}^{a}" for v, a in zip(self.variables, e))
            parts.append(f"({self.terms[e]}) * {mono}")
        return " + ".join(parts)

    __repr__ = __str__


def laurent_x(power: int = 1, coefficient: Scalar = 1) -> LaurentElement:
    return LaurentElement.monomial(power, coefficient)
