"""Phi polynomials, cyclic bracket products and Gaussian binomials.

For a fraction ``m_1..m_theta`` of ``m``, a step ``d`` and a primitive m-th
root ``gamma``, each part carries ``gamma_i = gamma^(-m_i^2)`` (a primitive
e_i-th root) and the polynomials ``phi_{m_i,j} = 1 - gamma_i^(1+j_i) x^(m_i d)``,
which only depend on ``j_i mod e_i``.  Brackets are cyclic products of the
``phi_{m_i, k m_i}`` over index ranges of ``Z/e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb

from .exact import CyclotomicNumber, LaurentElement, cyclo_root
from .fraction import FractionSpec
from .report import Report


@dataclass(frozen=True)
class PhiContext:
    spec: FractionSpec
    d: int
    gamma: CyclotomicNumber

    def __post_init__(self):
        if self.gamma.multiplicative_order() != self.spec.m:
            raise ValueError(f"gamma must have multiplicative order {self.spec.m}")

    @cached_property
    def gammas(self) -> tuple[CyclotomicNumber, ...]:
        return tuple(self.gamma ** (-(p * p)) for p in self.spec.parts)

    def phi_index(self, i: int, k: int) -> LaurentElement:
        """phi_{m_i, k m_i} = 1 - gamma_i^(1+k) x^(m_i d)."""
        return _phi_cached(self, i, k % self.spec.exponents[i])

    def phi(self, i: int, j: int) -> LaurentElement:
        return self.phi_index(i, self.spec.coordinates(j)[i])

    def _product(self, i: int, indices) -> LaurentElement:
        key = (self, i, tuple(sorted(indices)))
        hit = _PRODUCT_CACHE.get(key)
        if hit is None:
            hit = LaurentElement.constant(1)
            for k in key[2]:
                hit = hit * self.phi_index(i, k)
            _PRODUCT_CACHE[key] = hit
        return hit

    def full_product(self, i: int) -> LaurentElement:
        return self._product(i, range(self.spec.exponents[i]))

    def omit_indices(self, i: int, s: int, t: int) -> list[int]:
        e = self.spec.exponents[i]
        sb, tb = s % e, t % e
        if tb >= sb:
            return list(range(tb + 1, e)) + list(range(0, sb))
        if sb == tb + 1:
            return []
        return list(range(tb + 1, sb))

    def keep_indices(self, i: int, s: int, t: int) -> list[int]:
        e = self.spec.exponents[i]
        sb, tb = s % e, t % e
        if tb >= sb:
            return list(range(sb, tb + 1))
        if sb == tb + 1:
            return []
        return list(range(sb, e)) + list(range(0, tb + 1))

    def bracket_omit(self, i: int, s: int, t: int) -> LaurentElement:
        """]s,t[ : the full cyclic product with the items s..t removed."""
        return self._product(i, self.omit_indices(i, s, t))

    def bracket_keep(self, i: int, s: int, t: int) -> LaurentElement:
        """[s,t] : the cyclic product of the items s..t."""
        return self._product(i, self.keep_indices(i, s, t))


_PHI_CACHE: dict = {}
_PRODUCT_CACHE: dict = {}
_QBIN_CACHE: dict = {}


def _phi_cached(ctx: PhiContext, i: int, k: int) -> LaurentElement:
    key = (ctx.spec.m, ctx.spec.parts, ctx.d, ctx.gamma, i, k)
    hit = _PHI_CACHE.get(key)
    if hit is None:
        gi = ctx.gammas[i]
        hit = LaurentElement({(0,): 1, (ctx.spec.parts[i] * ctx.d,): -(gi ** (1 + k))})
        _PHI_CACHE[key] = hit
    return hit


def phi(ctx: PhiContext, i: int, j: int) -> LaurentElement:
    return ctx.phi(i, j)


def bracket_omit(ctx: PhiContext, i: int, s: int, t: int) -> LaurentElement:
    return ctx.bracket_omit(i, s, t)


def bracket_keep(ctx: PhiContext, i: int, s: int, t: int) -> LaurentElement:
    return ctx.bracket_keep(i, s, t)


def qbinomial(n: int, k: int, q) -> CyclotomicNumber:
    """Gaussian binomial [n choose k]_q from the q-Pascal recurrence."""
    if k < 0 or k > n:
        return CyclotomicNumber.rational(0)
    q = CyclotomicNumber.coerce(q)
    rows = _QBIN_CACHE.setdefault(q, [[CyclotomicNumber.rational(1)]])
    while len(rows) <= n:
        row = rows[-1]
        r = len(rows)
        new = [CyclotomicNumber.rational(1)]
        for c in range(1, r):
            new.append(row[c - 1] + (q ** c) * row[c])
        new.append(CyclotomicNumber.rational(1))
        rows.append(new)
    return rows[n][k]


def _sum(terms) -> LaurentElement:
    total = LaurentElement.constant(0)
    for t in terms:
        total = total + t
    return total


def verify_identities(ctx: PhiContext, binomial_modulus: str = "exponent") -> Report:
    """Check the bracket-sum, full-product and q-binomial identities per part.

    ``binomial_modulus`` selects the upper entry ``N-1-j-l`` of the last
    binomial in the q-binomial identity: ``"exponent"`` uses N = e_i and
    ``"m"`` uses N = m.
    """
    spec = ctx.spec
    x = LaurentElement.monomial
    report = Report("identities", {"m": spec.m, "parts": list(spec.parts), "d": ctx.d,
                                   "gamma": str(ctx.gamma)})
    for i, e in enumerate(spec.exponents):
        gi = ctx.gammas[i]
        step = spec.parts[i] * ctx.d
        tag = f"part{i + 1}"

        def check_1():
            lhs = _sum(ctx.bracket_omit(i, j - 1, j - 1) for j in range(e))
            return lhs == LaurentElement.constant(e), None if lhs == e else str(lhs)

        def check_2():
            lhs = ctx.full_product(i)
            rhs = LaurentElement({(0,): 1, (e * step,): -1})
            keep = ctx.bracket_keep(i, 0, e - 1)
            ok = lhs == rhs and (e == 1 or keep == rhs)
            return ok, None if ok else str(lhs)

        def check_3():
            lhs = _sum(ctx.bracket_omit(i, j - 1, j - 1) * gi ** j for j in range(e))
            rhs = x((e - 1) * step, e)
            return lhs == rhs, None if lhs == rhs else str(lhs)

        def check_4():
            if e == 1:
                return None, "needs exponent >= 2"
            lhs = _sum(ctx.bracket_omit(i, j - 2, j - 1) * gi ** j for j in range(e))
            return lhs.is_zero(), None if lhs.is_zero() else str(lhs)

        def check_5():
            for k in range(1, e):
                for ip in range(1, k + 1):
                    lhs = _sum(ctx.bracket_omit(i, j - 1 - k, j - 1) * gi ** (ip * j)
                               for j in range(e))
                    if not lhs.is_zero():
                        return False, {"k": k, "i'": ip, "value": str(lhs)}
            return True, None

        def check_6():
            top = e if binomial_modulus == "exponent" else spec.m
            count = 0
            for s in range(e):
                for t in range(s + 1):
                    for a in range(e - s):
                        sign = -1 if (a + t) % 2 else 1
                        lhs = (gi ** ((a + t) * (a + t + 1) // 2 + t * (s - t))
                               * qbinomial(e - 1 - t, a, gi)
                               * qbinomial(e - 1 + t - s, a + t, gi)) * sign
                        rhs = qbinomial(s, t, gi) * qbinomial(top - 1 - s, a, gi)
                        count += 1
                        if lhs != rhs:
                            return False, {"j+l": s, "t": t, "alpha": a,
                                           "lhs": str(lhs), "rhs": str(rhs)}
            return True, {"cases": count}

        def check_nonvanishing():
            for k in range(e):
                xi = gi ** k
                total = _sum(ctx.bracket_omit(i, j - 1, j - 1) * xi ** j for j in range(e))
                if total.is_zero():
                    return False, {"root": str(xi)}
            return True, None

        def check_vanishing_iff():
            if e == 1:
                return None, "needs exponent >= 2"
            for k in range(e):
                xi = gi ** k
                total = _sum(ctx.bracket_omit(i, j - 2, j - 1) * xi ** j for j in range(e))
                if total.is_zero() != (xi == gi):
                    return False, {"root": str(xi), "sum": str(total)}
            return True, None

        def check_keep_omit():
            for s in range(e):
                for t in range(e):
                    if (s - t - 1) % e == 0:
                        continue
                    if ctx.bracket_keep(i, s, t) * ctx.bracket_omit(i, s, t) != ctx.full_product(i):
                        return False, {"s": s, "t": t}
            # [a, m-2-b] equals ]-1-b, a-1[ except when the kept range is the
            # whole cycle [0, e-1], whose omitted counterpart ]0, e-1[ is empty
            for a in range(e):
                for b in range(e):
                    if a == 0 and b == e - 1:
                        continue
                    if ctx.bracket_keep(i, a, spec.m - 2 - b) != ctx.bracket_omit(i, -1 - b, a - 1):
                        return False, {"a": a, "b": b}
            return True, {"excluded": "a=0, b=e-1"}

        report.run(f"{tag}:omit-sum", "bracket-identity-1", check_1)
        report.run(f"{tag}:full-product", "bracket-identity-2", check_2)
        report.run(f"{tag}:weighted-omit-sum", "bracket-identity-3", check_3)
        report.run(f"{tag}:shifted-omit-sum", "bracket-identity-4", check_4)
        report.run(f"{tag}:power-weighted-sums", "bracket-identity-5", check_5)
        report.run(f"{tag}:q-binomial", "bracket-identity-6", check_6)
        report.run(f"{tag}:nonvanishing", "root-sum-nonvanishing", check_nonvanishing)
        report.run(f"{tag}:vanishing-iff", "root-sum-vanishing-criterion", check_vanishing_iff)
        report.run(f"{tag}:keep-omit", "plumbing", check_keep_omit)
    return report


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def default_gamma(m: int) -> CyclotomicNumber:
    return cyclo_root(m, 1)
