"""Representation theory of the semisimple quotient Dbar.

Simple modules are given by exact matrices on the generators x, g, u_0..u_{m-1}
and extended to the whole basis x^i g^j u_s.  Tensor products act through
the coproduct table, and multiplicities are read off from the ranks of the
primitive central idempotents.

Labels.  Two-dimensional simples are ``V[r,j]``: x acts by diag(zeta^r,
zeta^-r) and g by diag(gamma^j, gamma^(j - r mod m)).  The pair (r, j) and
(-r, j - (r mod m)) describe the same module; the canonical label takes the
smaller r in [0, md).  One-dimensional simples are ``V+[h,j]`` and
``V-[h,j]`` with h = 0 or h = dm/2 (d even): x acts by zeta^h, g by gamma^j
and u_0 by +-sqrt(gamma^j) (times 1/rho, rho = sqrt((-1)^-a), when h = dm/2).  The
square root of gamma^J is xi^J for the primitive 2m-th root xi of the D
family, so an unreduced index J >= m flips the sign.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field

from .exact import CyclotomicNumber, cyclo_root
from .findim import FinDimHopf, NotSemisimple, build_dbar, is_semisimple
from .fraction import FractionSpec
from .linalg import EchelonBasis, add_into, matrix_rank, nullspace
from .presented import canonical_root
from .report import Report

Matrix = tuple  # tuple of row tuples


class RepError(ValueError):
    pass


class RelationViolated(RepError):
    def __init__(self, label, relation):
        self.label, self.relation = label, relation
        super().__init__(f"{label}: {relation}")


class VerificationFailed(RepError):
    def __init__(self, what, witness):
        self.what, self.witness = what, witness
        super().__init__(f"{what}: {witness!r}")


# ---------------------------------------------------------------------------
# small dense matrices


def _q(v) -> CyclotomicNumber:
    return CyclotomicNumber.coerce(v)


def mat_zero(n: int) -> Matrix:
    z = _q(0)
    return tuple(tuple(z for _ in range(n)) for _ in range(n))


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(_q(1 if i == j else 0) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = _q(0)
            for t in range(k):
                if a[i][t] and b[t][j]:
                    s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def mat_add(a: Matrix, b: Matrix, scale=1) -> Matrix:
    return tuple(tuple(x + y * scale for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_kron(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(a[i][j] * b[k][l] for j in range(len(a[0])) for l in range(len(b[0])))
                 for i in range(len(a)) for k in range(len(b)))


def mat_pow(a: Matrix, k: int) -> Matrix:
    out = mat_identity(len(a))
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def mat_is_scalar(a: Matrix, c) -> bool:
    n = len(a)
    return all(a[i][j] == (c if i == j else 0) for i in range(n) for j in range(n))


def _entry(n: int, i: int, j: int, c) -> Matrix:
    return tuple(tuple(_q(c) if (r, s) == (i, j) else _q(0) for s in range(n)) for r in range(n))


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True, order=True)
class Label:
    """A canonical simple label; ``sign`` is +1/-1 for one-dimensional ones and 0 otherwise."""

    r: int
    j: int
    sign: int = 0

    @property
    def dim(self) -> int:
        return 1 if self.sign else 2

    def __str__(self) -> str:
        if self.sign:
            return f"V{'+' if self.sign > 0 else '-'}[{self.r},{self.j}]"
        return f"V[{self.r},{self.j}]"

    def sort_key(self):
        return (self.dim, self.r, -self.sign, self.j)


@dataclass(frozen=True)
class DbarParams:
    spec: FractionSpec
    d: int
    gamma: CyclotomicNumber

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def md(self) -> int:
        return self.spec.m * self.d

    @property
    def half(self) -> int | None:
        """dm/2 when d is even (the second one-dimensional family)."""
        return self.md // 2 if self.d % 2 == 0 else None

    def one(self, sign: int, h: int, j: int) -> Label:
        """One-dimensional label with an unreduced g-index j."""
        q, jr = divmod(j, self.m)
        return Label(h % self.md, jr, sign * (-1) ** q)

    def two(self, r: int, j: int) -> Label:
        m, md = self.m, self.md
        r %= md
        if r in (0, self.half):
            raise RepError(f"V[{r},*] is not simple; it splits into one-dimensional modules")
        j %= m
        alias = ((-r) % md, (j - r % m) % m)
        return min(Label(r, j), Label(*alias), key=lambda lb: lb.r)

    def split(self, r: int, j: int) -> list[Label]:
        """The summands of the two-dimensional module of shape (r, j), which splits when r is 0 or dm/2."""
        r %= self.md
        if r == 0 or r == self.half:
            return [self.one(1, r, j), self.one(-1, r, j)]
        return [self.two(r, j)]


def choose_zeta(m: int, d: int, gamma: CyclotomicNumber) -> tuple[CyclotomicNumber, int]:
    """zeta_{md}^r for the least r with zeta^d = gamma and zeta primitive."""
    md = m * d
    for r in range(1, md + 1):
        if math.gcd(r, md) != 1:
            continue
        z = cyclo_root(md, r)
        if z ** d == gamma:
            return z, r
    raise RepError("no primitive md-th root zeta with zeta^d = gamma")


# ---------------------------------------------------------------------------
# the algebra with its representation data


@dataclass
class DbarContext:
    params: DbarParams
    H: FinDimHopf
    zeta: CyclotomicNumber
    zeta_exponent: int
    xi: CyclotomicNumber
    rho: CyclotomicNumber
    a: int
    index: dict = field(default_factory=dict)

    def key_index(self, i: int, j: int, s: int = -1) -> int:
        P = self.H.meta["presentation"]
        return self.index[(i, P.zero_ys, j, s)]


def dbar_context(spec: FractionSpec, d: int, gamma: CyclotomicNumber | None = None,
                 H: FinDimHopf | None = None) -> DbarContext:
    gamma = cyclo_root(spec.m, 1) if gamma is None else gamma
    H = H or build_dbar(spec, d, gamma)
    P = H.meta["presentation"]
    params = DbarParams(spec, d, canonical_root(P.gamma))
    zeta, r = choose_zeta(spec.m, d, params.gamma)
    rho = canonical_root(CyclotomicNumber.rational(-1 if P.a % 2 else 1).principal_sqrt())
    ctx = DbarContext(params, H, zeta, r, canonical_root(P.zeta), rho, P.a,
                      {k: i for i, k in enumerate(H.keys)})
    return ctx


# ---------------------------------------------------------------------------
# simple modules


@dataclass(frozen=True)
class SimpleModuleSpec:
    label: Label
    dim: int
    action: dict  # generator name -> Matrix
    basis_images: tuple = ()  # Matrix per basis element of H
    scalar: CyclotomicNumber | None = None  # the off-diagonal constant c of a 2-dim simple

    def rho(self, vec: dict) -> Matrix:
        out = mat_zero(self.dim)
        for a, c in vec.items():
            out = mat_add(out, self.basis_images[a], c)
        return out

    def to_json(self) -> dict:
        return {"label": str(self.label), "dim": self.dim,
                "action": {g: [[str(c) for c in row] for row in M] for g, M in self.action.items()},
                **({"c": str(self.scalar)} if self.scalar is not None else {})}


def _extend(ctx: DbarContext, action: dict) -> tuple:
    """Images of all basis monomials x^i g^j u_s as products of generator matrices."""
    images = []
    for key in ctx.H.keys:
        i, _, j, s = key
        M = mat_mul(mat_pow(action["x"], i), mat_pow(action["g"], j))
        if s >= 0:
            M = mat_mul(M, action[f"u{s}"])
        images.append(M)
    return tuple(images)


def check_module(ctx: DbarContext, mod: SimpleModuleSpec) -> tuple[bool, object]:
    """The matrices define an algebra map: rho(e_a) rho(e_b) = rho(e_a e_b) for all pairs."""
    H = ctx.H
    if mod.rho(H.unit) != mat_identity(mod.dim):
        return False, "unit"
    for a in range(H.dim):
        for b in range(H.dim):
            lhs = mat_mul(mod.basis_images[a], mod.basis_images[b])
            if lhs != mod.rho(H.mult[a][b]):
                return False, (H.labels[a], H.labels[b])
    return True, None


def _one_dim(ctx: DbarContext, label: Label) -> SimpleModuleSpec:
    p = ctx.params
    m = p.m
    root = ctx.xi ** label.j * label.sign
    if label.r != 0:
        root = root * ctx.rho ** -1
    action = {"x": ((ctx.zeta ** label.r,),), "g": ((p.gamma ** label.j,),)}
    for s in range(m):
        action[f"u{s}"] = ((root if s == 0 else _q(0),),)
    return SimpleModuleSpec(label, 1, action, _extend(ctx, action))


def _two_dim(ctx: DbarContext, r: int, j: int, label: Label | None = None) -> SimpleModuleSpec:
    """x -> diag(zeta^r, zeta^-r), g -> diag(gamma^j, gamma^(j-i)) with i = r mod m.

    u_{-i} sends v1 to v2 and u_i sends v2 to c v1, where c is the value of
    u_i u_{-i} on v1 computed from the multiplication table.
    """
    p, H = ctx.params, ctx.H
    m = p.m
    i = r % m
    x = ((ctx.zeta ** r, _q(0)), (_q(0), ctx.zeta ** (-r)))
    g = ((p.gamma ** j, _q(0)), (_q(0), p.gamma ** (j - i)))
    uu = H.mult[ctx.key_index(0, 0, i)][ctx.key_index(0, 0, (-i) % m)]
    c = _q(0)
    for a, coef in uu.items():
        ia, _, ja, sa = H.keys[a]
        if sa >= 0:
            raise RepError("u_i u_-i should lie in the group algebra")
        c = c + coef * ctx.zeta ** (r * ia) * p.gamma ** (j * ja)
    action = {"x": x, "g": g}
    for s in range(m):
        M = mat_zero(2)
        if s == (-i) % m:
            M = mat_add(M, _entry(2, 1, 0, 1))
        if s == i:
            M = mat_add(M, _entry(2, 0, 1, c))
        action[f"u{s}"] = M
    label = label or Label(r % p.md, j % m)
    return SimpleModuleSpec(label, 2, action, _extend(ctx, action), c)


def simple_module(ctx: DbarContext, label: Label) -> SimpleModuleSpec:
    return _one_dim(ctx, label) if label.sign else _two_dim(ctx, label.r, label.j, label)


def canonical_labels(p: DbarParams) -> list[Label]:
    m, md = p.m, p.md
    out = set()
    hs = [0] + ([p.half] if p.half is not None else [])
    for h in hs:
        for j in range(m):
            out.add(Label(h, j, 1))
            out.add(Label(h, j, -1))
    for r in range(md):
        if r in hs:
            continue
        for j in range(m):
            out.add(p.two(r, j))
    return sorted(out, key=Label.sort_key)


def intertwiner(A: SimpleModuleSpec, B: SimpleModuleSpec, gens) -> list[Matrix]:
    """Basis of {T : T A(g) = B(g) T for every generator g}."""
    n, k = B.dim, A.dim
    cols = [(i, j) for i in range(n) for j in range(k)]
    rows = []
    for gname in gens:
        MA, MB = A.action[gname], B.action[gname]
        for r in range(n):
            for c in range(k):
                # (T MA - MB T)[r][c]
                row: dict = {}
                for t in range(k):
                    if MA[t][c]:
                        add_into(row, {(r, t): MA[t][c]})
                for t in range(n):
                    if MB[r][t]:
                        add_into(row, {(t, c): -MB[r][t]})
                if row:
                    rows.append(row)
    basis = nullspace(rows, cols)
    return [tuple(tuple(v.get((i, j), _q(0)) for j in range(k)) for i in range(n)) for v in basis]


def _det2(T: Matrix):
    return T[0][0] * T[1][1] - T[0][1] * T[1][0] if len(T) == 2 else T[0][0]


@dataclass
class SimpleList:
    ctx: DbarContext
    modules: list[SimpleModuleSpec]
    report: Report

    def by_label(self) -> dict:
        return {mod.label: mod for mod in self.modules}


def build_simples(ctx: DbarContext, check: bool = True) -> SimpleList:
    """All simple modules with relation checks, irreducibility and alias intertwiners."""
    p = ctx.params
    gens = list(ctx.H.gens)
    report = Report("simples", {"m": p.m, "parts": list(p.spec.parts), "d": p.d,
                                "gamma": str(p.gamma), "zeta": str(ctx.zeta),
                                "zeta_exponent": ctx.zeta_exponent, "rho": str(ctx.rho),
                                "template": "odd d reuses the even-d templates without the dm/2 families"
                                if p.d % 2 else "even d"})
    labels = canonical_labels(p)
    modules = [simple_module(ctx, lb) for lb in labels]
    if not check:
        return SimpleList(ctx, modules, report)

    def relations():
        for mod in modules:
            ok, w = check_module(ctx, mod)
            if not ok:
                return False, {"label": str(mod.label), "pair": w}
        return True, {"modules": len(modules)}

    def irreducible():
        for mod in modules:
            if len(intertwiner(mod, mod, gens)) != 1:
                return False, str(mod.label)
        return True, None

    def distinct():
        for A, B in itertools.combinations(modules, 2):
            if A.dim == B.dim and intertwiner(A, B, gens):
                return False, (str(A.label), str(B.label))
        return True, None

    def aliases():
        count = 0
        for r in range(p.md):
            if r % p.md in (0, p.half):
                continue
            for j in range(p.m):
                raw = _two_dim(ctx, r, j)
                canon = simple_module(ctx, p.two(r, j))
                ts = intertwiner(raw, canon, gens)
                if len(ts) != 1 or not _det2(ts[0]):
                    return False, {"raw": (r, j), "canonical": str(canon.label)}
                count += 1
        return True, {"certified": count}

    def completeness():
        total = sum(mod.dim ** 2 for mod in modules)
        return total == ctx.H.dim, {"sum_dim_squared": total, "dim": ctx.H.dim}

    def scalar_formula():
        # for r = s m the constant is zeta^(a r) gamma^j
        for mod in modules:
            if mod.dim == 2 and mod.label.r % p.m == 0:
                expect = ctx.zeta ** (ctx.a * mod.label.r) * p.gamma ** mod.label.j
                if mod.scalar != expect:
                    return False, {"label": str(mod.label), "c": str(mod.scalar)}
        return True, None

    report.run("module-relations", "simple-modules", relations)
    report.run("irreducible", "simple-modules", irreducible)
    report.run("pairwise-nonisomorphic", "simple-modules", distinct)
    report.run("alias-intertwiners", "simple-modules:aliasing", aliases)
    report.run("completeness", "simple-modules:count", completeness)
    report.run("sm-scalar", "simple-modules:item-5", scalar_formula)
    return SimpleList(ctx, modules, report)


# ---------------------------------------------------------------------------
# central idempotents


def _x_idem(ctx: DbarContext, i: int) -> dict:
    p = ctx.params
    md = p.md
    scale = CyclotomicNumber.rational(1) / md
    return {ctx.key_index(k, 0): ctx.zeta ** (-i * k) * scale for k in range(md)}


def _g_idem(ctx: DbarContext, k: int) -> dict:
    p = ctx.params
    scale = CyclotomicNumber.rational(1) / p.m
    return {ctx.key_index(0, t): p.gamma ** (-k * t) * scale for t in range(p.m)}


def _freeze(vec: dict):
    return frozenset(vec.items())


@dataclass
class CentralIdempotentSet:
    ctx: DbarContext
    vectors: list[dict]
    labels: list[Label | None]
    parity: str
    report: Report

    def to_json(self) -> dict:
        H = self.ctx.H
        return {"parity": self.parity, "count": len(self.vectors),
                "idempotents": [{"label": str(lb), "vector": H.format(v)}
                                for lb, v in zip(self.labels, self.vectors)]}


def idempotent_list(ctx: DbarContext) -> list[dict]:
    """The explicit primitive central idempotents, deduplicated."""
    p, H = ctx.params, ctx.H
    m, d = p.m, p.d
    u0 = H.basis_vector(ctx.key_index(0, 0, 0))
    out: list[dict] = []
    seen = set()

    def push(v):
        f = _freeze(v)
        if v and f not in seen:
            seen.add(f)
            out.append(v)

    half = CyclotomicNumber.rational(1, 1) / 2
    hs = [0] + ([p.half] if p.half is not None else [])
    for h in hs:
        for j in range(m):
            base = H.multiply(_x_idem(ctx, h), _g_idem(ctx, j))
            root = ctx.xi ** (-j)
            if h:
                root = root * ctx.rho
            tail = H.multiply(base, u0)
            for sign in (1, -1):
                v = add_into({k: c * half for k, c in base.items()}, tail, half * root * sign)
                push(v)
    for s in range(1, d):
        if p.half is not None and s * m == p.half:
            continue
        for j in range(m):
            v = add_into(H.multiply(_x_idem(ctx, s * m), _g_idem(ctx, j)),
                         H.multiply(_x_idem(ctx, (d - s) * m), _g_idem(ctx, j)))
            push(v)
    for l in range(d):
        for i in range(1, m // 2 + 1):
            for j in range(m):
                v = add_into(H.multiply(_x_idem(ctx, l * m + i), _g_idem(ctx, j)),
                             H.multiply(_x_idem(ctx, (d - l - 1) * m + (m - i)), _g_idem(ctx, j - i)))
                push(v)
    return out


def central_idempotents(ctx: DbarContext, simples: SimpleList | None = None) -> CentralIdempotentSet:
    p, H = ctx.params, ctx.H
    vecs = idempotent_list(ctx)
    report = Report("central-idempotents", {"m": p.m, "parts": list(p.spec.parts), "d": p.d,
                                            "zeta": str(ctx.zeta), "rho": str(ctx.rho)})

    def central():
        for k, v in enumerate(vecs):
            for name, gv in H.gens.items():
                if H.multiply(v, gv) != H.multiply(gv, v):
                    return False, {"idempotent": k, "generator": name}
        return True, None

    def idempotent():
        for k, v in enumerate(vecs):
            if H.multiply(v, v) != v:
                return False, k
        return True, None

    def orthogonal():
        for a, b in itertools.combinations(range(len(vecs)), 2):
            if H.multiply(vecs[a], vecs[b]):
                return False, (a, b)
        return True, None

    def sum_one():
        total: dict = {}
        for v in vecs:
            add_into(total, v)
        return total == H.unit, None if total == H.unit else H.format(total)

    def primitive():
        sizes = [_block_size(H, v) for v in vecs]
        total = sum(s * s for s in sizes)
        return total == H.dim and None not in sizes, {"block_sizes": sorted(Counter(sizes).items())}

    for name, fn in [("central", central), ("idempotent", idempotent), ("orthogonal", orthogonal),
                     ("sum-to-one", sum_one), ("primitive-by-dimension", primitive)]:
        report.run(name, "central-idempotents", fn)

    labels: list[Label | None] = [None] * len(vecs)
    if simples is not None:
        def matching():
            for k, v in enumerate(vecs):
                hits = []
                for mod in simples.modules:
                    M = mod.rho(v)
                    if mat_is_scalar(M, 1):
                        hits.append(mod.label)
                    elif not mat_is_scalar(M, 0):
                        return False, {"idempotent": k, "module": str(mod.label)}
                if len(hits) != 1:
                    return False, {"idempotent": k, "hits": [str(h) for h in hits]}
                labels[k] = hits[0]
            return len(set(labels)) == len(labels), None

        report.run("idempotent-module-matching", "central-idempotents", matching)
    parity = "odd" if p.d % 2 else "even"
    return CentralIdempotentSet(ctx, vecs, labels, parity, report)


def _block_size(H: FinDimHopf, e: dict) -> int | None:
    """sqrt(dim H e), or None if not a perfect square."""
    eb = EchelonBasis()
    for a in range(H.dim):
        eb.add(H.multiply(H.basis_vector(a), e))
    n = math.isqrt(len(eb))
    return n if n * n == len(eb) else None


def wedderburn_profile(H: FinDimHopf, idempotents: list[dict] | None = None) -> dict[int, int]:
    """Multiset of matrix block sizes {size: count} of a semisimple H."""
    if not is_semisimple(H):
        raise NotSemisimple("the integral has zero counit")
    if idempotents is None:
        if H.meta.get("family") != "dbar":
            raise RepError("explicit idempotents are only known for Dbar")
        spec = FractionSpec(H.meta["m"], tuple(H.meta["parts"]))
        idempotents = idempotent_list(dbar_context(spec, H.meta["d"], H=H))
    sizes = Counter(_block_size(H, e) for e in idempotents)
    if None in sizes or sum(s * s * c for s, c in sizes.items()) != H.dim:
        raise VerificationFailed("block sizes", dict(sizes))
    return dict(sorted(sizes.items()))


def expected_profile(m: int, d: int) -> dict[int, int]:
    if d % 2 == 0:
        return {1: 4 * m, 2: (m * m * d - 2 * m) // 2}
    return {1: 2 * m, 2: (m * m * d - m) // 2}


# ---------------------------------------------------------------------------
# tensor products and fusion


class _TensorCache:
    """Images of all basis elements on A (x) B via the coproduct table."""

    def __init__(self, H: FinDimHopf):
        self.H = H

    def images(self, A: SimpleModuleSpec, B: SimpleModuleSpec) -> list[Matrix]:
        n = A.dim * B.dim
        out = []
        for a in range(self.H.dim):
            M = mat_zero(n)
            for (i, j), c in self.H.delta[a].items():
                M = mat_add(M, mat_kron(A.basis_images[i], B.basis_images[j]), c)
            out.append(M)
        return out


def tensor_decompose(A: SimpleModuleSpec, B: SimpleModuleSpec, idem: CentralIdempotentSet,
                     images: list[Matrix] | None = None) -> Counter:
    """Multiset of labels in A (x) B, via rank(e_k on A (x) B) / dim of block k."""
    H = idem.ctx.H
    images = images if images is not None else _TensorCache(H).images(A, B)
    n = A.dim * B.dim
    result: Counter = Counter()
    for e, lb in zip(idem.vectors, idem.labels):
        M = mat_zero(n)
        for a, c in e.items():
            M = mat_add(M, images[a], c)
        rk = matrix_rank(M)
        if rk % lb.dim:
            raise VerificationFailed("rank not divisible by block dimension", (str(lb), rk))
        if rk:
            result[lb] = rk // lb.dim
    if sum(c * lb.dim for lb, c in result.items()) != n:
        raise VerificationFailed("dimension count", {str(k): v for k, v in result.items()})
    return result


@dataclass
class FusionTable:
    labels: list[Label]
    cells: dict  # (Label, Label) -> Counter

    def product(self, a: Label, b: Label) -> Counter:
        return self.cells[(a, b)]

    def product_multiset(self, left: Counter, right: Counter) -> Counter:
        out: Counter = Counter()
        for a, ca in left.items():
            for b, cb in right.items():
                for lb, c in self.cells[(a, b)].items():
                    out[lb] += ca * cb * c
        return out

    def to_json(self) -> dict:
        return {"labels": [str(lb) for lb in self.labels],
                "cells": {f"{a}*{b}": format_multiset(self.cells[(a, b)])
                          for a in self.labels for b in self.labels}}

    def to_csv(self) -> str:
        import csv
        import io
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow([""] + [str(lb) for lb in self.labels])
        for a in self.labels:
            w.writerow([str(a)] + [format_multiset(self.cells[(a, b)]) for b in self.labels])
        return buf.getvalue()


def format_multiset(c: Counter) -> str:
    parts = []
    for lb in sorted(c, key=Label.sort_key):
        k = c[lb]
        parts.append(str(lb) if k == 1 else f"{k}{lb}")
    return "+".join(parts) if parts else "0"


def fusion_table(ctx: DbarContext, simples: SimpleList | None = None,
                 idem: CentralIdempotentSet | None = None) -> FusionTable:
    simples = simples or build_simples(ctx, check=False)
    idem = idem or central_idempotents(ctx, simples)
    if any(lb is None for lb in idem.labels):
        raise RepError("idempotents must be matched with simple modules")
    cache = _TensorCache(ctx.H)
    cells = {}
    for A in simples.modules:
        for B in simples.modules:
            cells[(A.label, B.label)] = tensor_decompose(A, B, idem, cache.images(A, B))
    return FusionTable([mod.label for mod in simples.modules], cells)


# ---------------------------------------------------------------------------
# closed-form fusion rules


@dataclass(frozen=True)
class Shape:
    """A simple written in the family parameters of the rule tables.

    kind "0" or "h" (dm/2) for one-dimensional ones with a sign; kind "sm"
    with s; kind "lmi" with l and i in (0, m).
    """

    kind: str
    j: int
    sign: int = 0
    s: int = 0
    l: int = 0
    i: int = 0


def shape_of(p: DbarParams, lb: Label) -> Shape:
    if lb.sign:
        return Shape("0" if lb.r == 0 else "h", lb.j, lb.sign)
    l, i = divmod(lb.r, p.m)
    if i == 0:
        return Shape("sm", lb.j, s=l)
    return Shape("lmi", lb.j, l=l, i=i)


def raw_shapes(p: DbarParams) -> list[tuple[Shape, Label]]:
    """Every parameter choice of the rule tables with its canonical label."""
    m, d = p.m, p.d
    out = []
    for j in range(m):
        for sign in (1, -1):
            out.append((Shape("0", j, sign), Label(0, j, sign)))
            if p.half is not None:
                out.append((Shape("h", j, sign), Label(p.half, j, sign)))
        for s in range(1, d):
            if p.half is None or s * m != p.half:
                out.append((Shape("sm", j, s=s), p.two(s * m, j)))
        for l in range(d):
            for i in range(1, m):
                out.append((Shape("lmi", j, l=l, i=i), p.two(l * m + i, j)))
    return out


def closed_form(p: DbarParams, A: Label | Shape, B: Label | Shape,
                sign_rule: str = "literal", a_exponent: int = 0) -> tuple[Counter, list[str]]:
    """The tabulated answer for A (x) B and the splitting cases it used.

    Two-dimensional results whose first index is 0 or dm/2 mod dm split into
    the corresponding pair of one-dimensional modules (the starred cases).
    Case names record which summand of the two-by-two rows split, and into
    which family, or "generic" when neither did.

    ``sign_rule="corrected"`` flips the sign of a product of two dm/2
    one-dimensional modules when a is odd, since their u_0 scalars multiply
    to (-1)^a times a square root of gamma^(j+k); ``"literal"`` uses the
    plain sign product.
    """
    m = p.m
    a = A if isinstance(A, Shape) else shape_of(p, A)
    b = B if isinstance(B, Shape) else shape_of(p, B)
    out: Counter = Counter()
    cases: list[str] = []
    h = p.half or 0

    def two(r, j, case=""):
        r %= p.md
        target = "0" if r == 0 else ("dm/2" if p.half is not None and r == p.half else "")
        if case and target:
            cases.append(f"{case}->{target}")
        for lb in p.split(r, j):
            out[lb] += 1
        return bool(target)

    J = a.j + b.j
    if a.sign and b.sign:
        hh = (0 if a.kind == "0" else h) + (0 if b.kind == "0" else h)
        sign = a.sign * b.sign
        if sign_rule == "corrected" and a.kind == b.kind == "h" and a_exponent % 2:
            sign = -sign
        out[p.one(sign, hh, J)] += 1
        return out, cases
    if a.sign or b.sign:
        one, other = (a, b) if a.sign else (b, a)
        shift = 0 if one.kind == "0" else h
        if other.kind == "sm":
            two(other.s * m + shift, J)
        else:
            two(other.l * m + other.i + shift, J)
        return out, cases
    if a.kind == "sm" and b.kind == "sm":
        s, l = a.s, b.s
        split = two((s + l) * m, J, "sm*lm:sum")
        split = two((s - l) * m, J, "sm*lm:difference") or split
        if not split:
            cases.append("sm*lm:generic")
    elif a.kind == "sm":
        s, l, i = a.s, b.l, b.i
        two((s + l) * m + i, J)
        two((l - s) * m + i, J)
    elif b.kind == "sm":
        l, i, s = a.l, a.i, b.s
        two((l + s) * m + i, J)
        two((l - s) * m + i, J)
    else:
        l, i, s, t = a.l, a.i, b.l, b.i
        split = two((s + l) * m + (i + t), J, "lmi*smt:sum")
        split = two((l - s) * m + (i - t), J - t, "lmi*smt:difference") or split
        if not split:
            cases.append("lmi*smt:generic")
    return out, cases


def verify_fusion_against_closed_forms(ctx: DbarContext, table: FusionTable,
                                       raw: bool = True, sign_rule: str = "literal") -> Report:
    """Diff the computed table against the rule tables.

    With ``raw`` the rules are evaluated on every parameter choice (aliased
    ones included) and compared with the cell of the canonical labels.
    """
    p = ctx.params
    report = Report("fusion", {"m": p.m, "parts": list(p.spec.parts), "d": p.d,
                               "zeta": str(ctx.zeta), "a": ctx.a, "raw": raw,
                               "sign_rule": sign_rule})
    pairs = raw_shapes(p) if raw else [(shape_of(p, lb), lb) for lb in table.labels]
    mismatches = []
    cases: Counter = Counter()
    seen = set()
    for sa, A in pairs:
        for sb, B in pairs:
            expect, used = closed_form(p, sa, sb, sign_rule, ctx.a)
            cases.update(used)
            got = table.cells[(A, B)]
            if got != expect and (A, B) not in seen:
                seen.add((A, B))
                mismatches.append({"pair": f"{A}*{B}", "computed": format_multiset(got),
                                   "closed_form": format_multiset(expect)})
    report.add("closed-forms", "fusion-rules", not mismatches,
               {"mismatches": mismatches[:40], "count": len(mismatches),
                "split_cases": dict(cases)})
    report.data["split_cases"] = dict(sorted(cases.items()))
    report.data["mismatches"] = mismatches
    return report


SPLIT_CASES = tuple(f"{row}:{part}->{target}" for row in ("sm*lm", "lmi*smt")
                    for part in ("sum", "difference") for target in ("0", "dm/2"))


def fusion_properties(table: FusionTable, triples: str | int = "exhaustive",
                      seed: int = 0) -> Report:
    report = Report("fusion-properties", {"triples": triples, "seed": seed})
    labels = table.labels
    unit = next(lb for lb in labels if lb.sign == 1 and lb.r == 0 and lb.j == 0)

    def unital():
        for X in labels:
            if table.cells[(unit, X)] != Counter({X: 1}) or table.cells[(X, unit)] != Counter({X: 1}):
                return False, str(X)
        return True, None

    def multiplicative():
        for (A, B), c in table.cells.items():
            if sum(k * lb.dim for lb, k in c.items()) != A.dim * B.dim:
                return False, f"{A}*{B}"
        return True, None

    def associative():
        if triples == "exhaustive":
            it = itertools.product(labels, repeat=3)
        else:
            rng = random.Random(seed)
            it = [tuple(rng.choice(labels) for _ in range(3)) for _ in range(int(triples))]
        count = 0
        for A, B, C in it:
            left = table.product_multiset(table.cells[(A, B)], Counter({C: 1}))
            right = table.product_multiset(Counter({A: 1}), table.cells[(B, C)])
            count += 1
            if left != right:
                return False, (str(A), str(B), str(C))
        return True, {"triples": count}

    def squares():
        for X in labels:
            if X.dim == 2:
                c = table.cells[(X, X)]
                if sum(k * lb.dim for lb, k in c.items()) != 4:
                    return False, str(X)
        return True, None

    report.run("unital", "fusion-rules", unital)
    report.run("dimension-multiplicative", "fusion-rules", multiplicative)
    report.run("associative", "fusion-rules", associative)
    report.run("two-dim-squares", "fusion-rules", squares)
    return report
