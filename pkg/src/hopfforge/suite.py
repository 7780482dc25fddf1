"""The verification matrix behind ``hopfforge suite`` and the acceptance tests.

Each ``criterion_N`` returns a :class:`Report`.  ``level="quick"`` keeps
m <= 3; ``"full"`` adds the two-part fractions.  ``literal=True`` checks
the statements exactly as tabulated (which fails for two of them, see the
functions' docstrings); the default checks the corrected statements.
"""

from __future__ import annotations

import math
import random
import time
from collections import Counter
from typing import Callable

from .exact import CyclotomicNumber, cyclo_root
from .fraction import ConditionFailed, enumerate_fractions, validate_fraction
from .report import Report

LEVELS = ("quick", "full")


def _timed(report: Report, name: str, anchor: str, fn: Callable[[], tuple[bool | None, object]]):
    try:
        return report.run(name, anchor, fn)
    except Exception as exc:  # a crash is a failure with the exception as witness
        return report.add(name, anchor, False, {"error": type(exc).__name__, "message": str(exc)})


# ---------------------------------------------------------------------------
# 1. fractions


def criterion_1(level: str = "full") -> Report:
    report = Report("criterion-1:fractions", {"level": level})
    accepted = [(6, (2, 3)), (6, (4, 3)), (10, (2, 5)), (30, (12, 5))]
    for m, parts in accepted:
        _timed(report, f"accept({m},{list(parts)})", "fraction-definition",
               lambda m=m, parts=parts: (validate_fraction(m, parts) is not None, None))

    def reject():
        try:
            validate_fraction(6, (2, 2))
        except ConditionFailed as exc:
            return True, {"first_failed": exc.index, "failed": list(exc.failed)}
        return False, "accepted"

    _timed(report, "reject(6,[2,2])", "fraction-definition", reject)

    def units():
        start = time.perf_counter()
        for m in range(1, 21):
            got = sorted(f.parts[0] for f in enumerate_fractions(m, 1))
            expect = [1] if m == 1 else [k for k in range(1, m) if math.gcd(k, m) == 1]
            if got != expect:
                return False, {"m": m, "got": got, "expected": expect}
        elapsed = time.perf_counter() - start
        return elapsed < 1.0, {"seconds": round(elapsed, 3)}

    _timed(report, "length-one-fractions-are-units(m<=20)", "fraction-definition", units)
    return report


# ---------------------------------------------------------------------------
# 2. identities


def criterion_2(level: str = "full") -> Report:
    from .qcombi import PhiContext, verify_identities
    top = 12 if level == "full" else 3
    report = Report("criterion-2:identities", {"level": level, "m_max": top, "d": [1, 2]})
    start = time.perf_counter()
    cases = 0
    for m in range(1, top + 1):
        for spec in enumerate_fractions(m):
            for d in (1, 2):
                sub = verify_identities(PhiContext(spec, d, cyclo_root(m, 1)))
                cases += 1
                tag = f"m={m},parts={list(spec.parts)},d={d}"
                report.add(tag, "bracket-identities", sub.passed,
                           None if sub.passed else [c.to_json() for c in sub.failures()][:3])
    elapsed = time.perf_counter() - start
    report.add("runtime<30s", "plumbing", elapsed < 30, {"seconds": round(elapsed, 2),
                                                         "cases": cases})
    return report


# ---------------------------------------------------------------------------
# 3. presented families


def presented_cases(level: str = "full") -> list[tuple[str, dict]]:
    z = cyclo_root
    cases = [("dfrac", dict(m=2, parts=(1,), d=2, gamma=z(2, 1))),
             ("dfrac", dict(m=3, parts=(1,), d=1, gamma=z(3, 1)))]
    if level == "full":
        cases = [("taft", dict(m=6, parts=(2, 3), t=1, xi=z(6, 1))),
                 ("taft", dict(m=6, parts=(2, 3), t=2, xi=z(12, 1))),
                 ("liu", dict(m=6, parts=(2, 3), omega=6, gamma=z(6, 1))),
                 cases[0],
                 ("dfrac", dict(m=2, parts=(1,), d=6, gamma=z(2, 1))),
                 cases[1],
                 ("dfrac", dict(m=6, parts=(2, 3), d=2, gamma=z(6, 1)))]
    return cases


def _case_name(tag: str, params: dict) -> str:
    inner = ",".join(f"{k}={list(v) if isinstance(v, tuple) else v}" for k, v in params.items())
    return f"{tag}({inner})"


def criterion_3(level: str = "full") -> Report:
    from .presented import (NoCompatibleRoot, build_family, verify_coassoc_counit_antipode,
                            verify_relation_compatibility)
    report = Report("criterion-3:presented", {"level": level})
    start = time.perf_counter()
    for tag, params in presented_cases(level):
        params = dict(params)
        spec = validate_fraction(params.pop("m"), params.pop("parts"))
        name = _case_name(tag, {"m": spec.m, "parts": spec.parts, **params})

        def run(tag=tag, spec=spec, params=params):
            P = build_family(tag, spec, **params)
            rel = verify_relation_compatibility(P)
            ax = verify_coassoc_counit_antipode(P)
            bad = [c.name for c in rel.failures() + ax.failures()]
            return not bad, {"relations": rel.counts, "axioms": ax.counts, "failing": bad[:5]}

        _timed(report, name, "presented-family", run)

    def no_root():
        spec = validate_fraction(6, (4, 3))
        raised = []
        for k in range(1, 13):
            if math.gcd(k, 12) != 1:
                continue
            try:
                build_family("taft", spec, t=2, xi=cyclo_root(12, k))
                raised.append((k, False))
            except NoCompatibleRoot:
                raised.append((k, True))
        return all(ok for _, ok in raised), {"roots_tried": [k for k, _ in raised]}

    _timed(report, "taft(6,[4,3],t=2):no-compatible-root", "compatible-root", no_root)
    elapsed = time.perf_counter() - start
    report.add("runtime<5min", "plumbing", elapsed < 300, {"seconds": round(elapsed, 2)})
    return report


# ---------------------------------------------------------------------------
# 4. dimensions


def quotient_cases(level: str = "full") -> list[tuple[str, dict, int]]:
    """(kind, params, expected dimension) for the quotients derived from criterion 3."""
    out = []
    z = cyclo_root
    if level == "full":
        out.append(("taftfin", dict(m=6, parts=(2, 3), xi=z(6, 1)), 36))
    for tag, params in presented_cases(level):
        if tag != "dfrac":
            continue
        m, d = params["m"], params["d"]
        base = dict(m=m, parts=params["parts"], d=d, gamma=params["gamma"])
        out.append(("dbar", base, 2 * m * m * d))
        for t in (1, 2):
            out.append(("dt", {**base, "t": t}, 2 * m * m * t))
    out.append(("dt", dict(m=2, parts=(1,), d=6, gamma=z(2, 1), t=3), 24))
    return out


# optional hook applied to every quotient the suite builds (negative control)
_tamper: Callable | None = None


def build_quotient(kind: str, params: dict):
    from .findim import build_dbar, build_dt, build_finite_taft
    spec = validate_fraction(params["m"], params["parts"])
    if kind == "taftfin":
        H = build_finite_taft(spec, params["xi"])
    elif kind == "dbar":
        H = build_dbar(spec, params["d"], params["gamma"])
    else:
        H = build_dt(spec, params["d"], params["gamma"], params["t"])
    return _tamper(H) if _tamper is not None else H


def first_entry_corruption(H):
    """Shift the first nonzero structure constant e_a e_b by one."""
    for a in range(H.dim):
        for b in range(H.dim):
            for k in H.mult[a][b]:
                return H.corrupt_product(a, b, k)
    return H.corrupt_product(0, 0, 0)


def criterion_4(level: str = "full") -> Report:
    report = Report("criterion-4:dimensions", {"level": level})
    seen = set()
    for kind, params, expected in quotient_cases(level):
        name = _case_name(kind, {k: v for k, v in params.items() if k not in ("gamma", "xi")})
        if name in seen:
            continue
        seen.add(name)

        def run(kind=kind, params=params, expected=expected):
            H = build_quotient(kind, params)
            return H.dim == expected, {"dim": H.dim, "expected": expected}

        _timed(report, name, "dimension-formula", run)
    return report


# ---------------------------------------------------------------------------
# 5. integrals of Dbar


def criterion_5(level: str = "full") -> Report:
    from .findim import (dbar_explicit_integral, is_left_integral, is_semisimple, left_integral,
                         verify_hopf)
    report = Report("criterion-5:integral", {"level": level})
    for m, d in ((2, 2), (3, 1)):
        tag = f"dbar(m={m},d={d})"
        H = build_quotient("dbar", dict(m=m, parts=(1,), d=d, gamma=cyclo_root(m, 1)))
        lam = dbar_explicit_integral(H)

        def integral(H=H, lam=lam):
            return is_left_integral(H, lam), None

        def counit(H=H, lam=lam, m=m, d=d):
            eps = H.eps(lam)
            return eps == 2 * m * m * d, {"eps": str(eps)}

        def solved(H=H, m=m, d=d):
            eps = H.eps(left_integral(H).vector)
            return eps == 2 * m * m * d, {"eps": str(eps)}

        def axioms(H=H):
            start = time.perf_counter()
            rep = verify_hopf(H, "exhaustive")
            elapsed = time.perf_counter() - start
            return rep.passed and elapsed < 60, {"counts": rep.counts,
                                                 "seconds": round(elapsed, 2)}

        _timed(report, f"{tag}:explicit-integral", "integral", integral)
        _timed(report, f"{tag}:explicit-integral-counit", "integral", counit)
        _timed(report, f"{tag}:solved-integral-counit", "integral", solved)
        _timed(report, f"{tag}:semisimple", "maschke", lambda H=H: (is_semisimple(H), None))
        _timed(report, f"{tag}:hopf-axioms-exhaustive", "hopf-axioms", axioms)
    return report


# ---------------------------------------------------------------------------
# 6. the matrix block and the group-likes


def criterion_6(level: str = "full") -> Report:
    from .findim import dual_block_algebra, group_likes
    report = Report("criterion-6:coalgebra-blocks", {"level": level})
    cases = [(2, (1,), 2), (3, (1,), 1)]
    if level == "full":
        cases += [(2, (1,), 6), (6, (2, 3), 2)]
    for m, parts, d in cases:
        H = build_quotient("dbar", dict(m=m, parts=parts, d=d, gamma=cyclo_root(m, 1)))
        P = H.meta["presentation"]
        tag = f"dbar(m={m},parts={list(parts)},d={d})"

        def block(H=H, P=P):
            cert = dual_block_algebra(H, H.meta["blocks"][0]["vectors"], P.gamma)
            return cert.ok and cert.method == "explicit" and cert.matrix_size == P.m, {
                "method": cert.method, "matrix_size": cert.matrix_size}

        def grouplikes(H=H, m=m, d=d):
            gl = group_likes(H)
            return len(gl.elements) == m * m * d and gl.certified, {
                "count": len(gl.elements), "expected": m * m * d, **gl.certificate}

        _timed(report, f"{tag}:dual-of-C-is-matrix-algebra", "coalgebra-decomposition", block)
        _timed(report, f"{tag}:group-likes", "coalgebra-decomposition", grouplikes)
    return report


# ---------------------------------------------------------------------------
# 7. idempotents and profiles


def criterion_7(level: str = "full") -> Report:
    from .reps import central_idempotents, dbar_context, expected_profile, wedderburn_profile
    report = Report("criterion-7:idempotents", {"level": level})
    cases = [(2, 2), (3, 1)] + ([(2, 6)] if level == "full" else [])
    for m, d in cases:
        tag = f"dbar(m={m},d={d})"
        ctx = dbar_context(validate_fraction(m, (1,)), d)
        idem = central_idempotents(ctx)
        for c in idem.report.checks:
            report.add(f"{tag}:{c.name}", c.anchor, c.status == "pass", c.witness, c.time)

        def profile(ctx=ctx, idem=idem, m=m, d=d):
            got = wedderburn_profile(ctx.H, idem.vectors)
            expect = expected_profile(m, d)
            return got == expect, {"profile": got, "expected": expect}

        _timed(report, f"{tag}:wedderburn-profile", "wedderburn-profile", profile)
    return report


# ---------------------------------------------------------------------------
# 8. fusion tables


def criterion_8(level: str = "full", literal: bool = False, seed: int = 0) -> Report:
    """Fusion tables against the rule tables.

    With ``literal`` the products of two dm/2 one-dimensional simples use
    the plain sign product as tabulated; for odd a this disagrees with the
    computed table (the u_0 scalars multiply to (-1)^a sqrt(gamma^(j+k))).
    """
    from .reps import (SPLIT_CASES, build_simples, central_idempotents, dbar_context,
                       fusion_properties, fusion_table, verify_fusion_against_closed_forms)
    rule = "literal" if literal else "corrected"
    report = Report("criterion-8:fusion", {"level": level, "sign_rule": rule})
    start = time.perf_counter()
    cases = [(2, 2), (3, 1)]
    # d = 6 is the smallest even case with V_sm simples, needed for the sm*lm row
    extra = [(2, 6)] if level == "full" else [(1, 4)]
    seen_cases: Counter = Counter()
    for m, d in cases + extra:
        tag = f"dbar(m={m},d={d})"
        ctx = dbar_context(validate_fraction(m, (1,)), d)
        simples = build_simples(ctx)
        idem = central_idempotents(ctx, simples)
        table = fusion_table(ctx, simples, idem)
        cmp = verify_fusion_against_closed_forms(ctx, table, sign_rule=rule)
        seen_cases.update(cmp.data["split_cases"])
        c = cmp.checks[0]
        report.add(f"{tag}:closed-forms", c.anchor, c.status == "pass",
                   {"a": ctx.a, "mismatch_count": len(cmp.data["mismatches"]),
                    "mismatches": cmp.data["mismatches"][:8]})
        triples = "exhaustive" if (m, d) in cases else 50
        props = fusion_properties(table, triples, seed)
        for p in props.checks:
            report.add(f"{tag}:{p.name}", p.anchor, p.status == "pass", p.witness, p.time)

        def deterministic(ctx=ctx, simples=simples, idem=idem, table=table):
            rng = random.Random(seed)
            order = list(range(len(idem.vectors)))
            rng.shuffle(order)
            from .reps import CentralIdempotentSet, tensor_decompose
            shuffled = CentralIdempotentSet(ctx, [idem.vectors[i] for i in order],
                                            [idem.labels[i] for i in order], idem.parity,
                                            idem.report)
            mods = simples.modules
            for A in mods[:3] + mods[-2:]:
                for B in mods[-2:]:
                    if tensor_decompose(A, B, shuffled) != table.cells[(A.label, B.label)]:
                        return False, (str(A.label), str(B.label))
            return True, None

        _timed(report, f"{tag}:idempotent-order-independent", "plumbing", deterministic)
    missing = [c for c in SPLIT_CASES if not seen_cases.get(c)]
    report.add("all-split-cases-exercised", "fusion-rules", not missing,
               {"missing": missing, "seen": dict(seen_cases)})
    elapsed = time.perf_counter() - start
    report.add("runtime<5min", "plumbing", elapsed < 300, {"seconds": round(elapsed, 1)})
    return report


# ---------------------------------------------------------------------------
# 9. the 24-dimensional D_t


def group_element_orders(H, elements) -> Counter:
    orders: Counter = Counter()
    for g in elements:
        p, k = dict(g), 1
        while p != H.unit:
            p = H.multiply(p, g)
            k += 1
            if k > H.dim + 1:
                raise ValueError("not a group element of finite order")
        orders[k] += 1
    return orders


DIC3_ORDERS = {1: 1, 2: 1, 3: 2, 4: 6, 6: 2}


def criterion_9(level: str = "full", literal: bool = False) -> Report:
    """D_t with (m, d, t) = (2, 6, 3).

    ``literal`` asks for a commutative quotient by the radical.  The quotient
    is the group algebra of the dicyclic group of order 12, which is not
    commutative; the default checks that identification instead.
    """
    from .findim import (dt_pivot_element, generated_ideal, group_likes, is_cocommutative,
                         is_commutative, jacobson_radical, left_integral, pivotal_grouplike,
                         quotient_hopf, same_subspace, verify_hopf)
    report = Report("criterion-9:dt", {"level": level, "literal": literal})
    H = build_quotient("dt", dict(m=2, parts=(1,), d=6, gamma=cyclo_root(2, 1), t=3))
    _timed(report, "dimension-24", "dimension-formula", lambda: (H.dim == 24, {"dim": H.dim}))
    _timed(report, "hopf-axioms", "hopf-axioms", lambda: (verify_hopf(H).passed, None))
    _timed(report, "integral-counit-zero", "integral",
           lambda: (H.eps(left_integral(H).vector) == 0, None))
    rad = jacobson_radical(H)
    ideal = generated_ideal(H, [H.gens["y1"], H.gens["u1"]])
    _timed(report, "radical-equals-(y,u1)", "radical",
           lambda: (same_subspace(rad, ideal.basis()), {"radical_dim": len(rad),
                                                        "ideal_dim": len(ideal)}))
    Q, _ = quotient_hopf(H, [H.gens["y1"], H.gens["u1"]])
    _timed(report, "quotient-dimension-12", "radical", lambda: (Q.dim == 12, {"dim": Q.dim}))
    _timed(report, "quotient-hopf-axioms", "hopf-axioms", lambda: (verify_hopf(Q).passed, None))
    _timed(report, "quotient-cocommutative", "radical", lambda: is_cocommutative(Q))
    gl = group_likes(Q)
    _timed(report, "quotient-12-group-likes", "radical",
           lambda: (len(gl.elements) == 12, {"count": len(gl.elements)}))
    if literal:
        _timed(report, "quotient-commutative", "radical", lambda: is_commutative(Q))
    else:
        def dicyclic():
            comm, witness = is_commutative(Q)
            orders = dict(sorted(group_element_orders(Q, gl.elements).items()))
            return (not comm) and orders == DIC3_ORDERS, {"noncommuting": witness,
                                                          "element_orders": orders}

        _timed(report, "quotient-is-dicyclic-group-algebra", "radical", dicyclic)
    g0 = dt_pivot_element(H)
    _timed(report, "pivotal-element", "pivotal",
           lambda: (pivotal_grouplike(H, [g0]) is not None, {"g0": H.format(g0)}))
    return report


# ---------------------------------------------------------------------------
# 10. negative controls


def _corruptions(H, count: int | None, rng: random.Random):
    """Single-entry corruptions of products and coproducts; all of them when count is None."""
    n = H.dim
    prods = [(a, b, k) for a in range(n) for b in range(n) for k in range(n)]
    coprods = [(a, (i, j)) for a in range(n) for i in range(n) for j in range(n)]
    if count is not None:
        prods = rng.sample(prods, min(count, len(prods)))
        # half of the coproduct corruptions hit existing entries
        existing = [(a, ij) for a in range(n) for ij in H.delta[a]]
        coprods = rng.sample(coprods, min(count // 2, len(coprods))) + \
            rng.sample(existing, min(count - count // 2, len(existing)))
    for a, b, k in prods:
        yield ("product", (H.labels[a], H.labels[b], H.labels[k])), H.corrupt_product(a, b, k)
    for a, (i, j) in coprods:
        yield ("coproduct", (H.labels[a], H.labels[i], H.labels[j])), \
            H.corrupt_coproduct(a, (i, j))


def negative_control(H, count: int | None, seed: int, mode: str = "exhaustive") -> tuple[bool, dict]:
    from .findim import verify_hopf
    rng = random.Random(seed)
    tried = 0
    for where, bad in _corruptions(H, count, rng):
        rep = verify_hopf(bad, mode)
        tried += 1
        fails = rep.failures()
        if not fails or not all(f.witness for f in fails):
            return False, {"undetected": where}
    return True, {"corruptions": tried}


def criterion_10(level: str = "full", seed: int = 0) -> Report:
    from .findim import build_finite_taft
    from .presented import DFamily, verify_relation_compatibility
    report = Report("criterion-10:negative-controls", {"level": level, "seed": seed})
    small = [("taftfin(m=2)", lambda: build_finite_taft(validate_fraction(2, (1,)), cyclo_root(2, 1)),
              None),
             ("dbar(m=1,d=3)", lambda: build_quotient("dbar", dict(m=1, parts=(1,), d=3,
                                                                   gamma=cyclo_root(1, 1))), 200),
             ("dbar(m=2,d=2)", lambda: build_quotient("dbar", dict(m=2, parts=(1,), d=2,
                                                                   gamma=cyclo_root(2, 1))), 40),
             ("dbar(m=3,d=1)", lambda: build_quotient("dbar", dict(m=3, parts=(1,), d=1,
                                                                   gamma=cyclo_root(3, 1))), 40),
             ("dt(m=2,d=6,t=3)", lambda: build_quotient("dt", dict(m=2, parts=(1,), d=6, t=3,
                                                                   gamma=cyclo_root(2, 1))), 40)]
    if level == "full":
        small.append(("taftfin(m=6,[2,3])", lambda: build_finite_taft(
            validate_fraction(6, (2, 3)), cyclo_root(6, 1)), 20))
    for name, make, count in small:
        _timed(report, f"{name}:corruptions-detected", "plumbing",
               lambda make=make, count=count: negative_control(make(), count, seed))

    def uu_corruption():
        spec = validate_fraction(2, (1,))
        P = DFamily(spec, 2, cyclo_root(2, 1), uu_override={(0, 1): 2})
        rep = verify_relation_compatibility(P)
        fails = rep.failures()
        return bool(fails), {"failing": [f.name for f in fails][:4]}

    def keep_bracket():
        spec = validate_fraction(2, (1,))
        from .presented import verify_coassoc_counit_antipode
        P = DFamily(spec, 2, cyclo_root(2, 1), bracket="keep")
        rep = verify_relation_compatibility(P)
        rep.extend(verify_coassoc_counit_antipode(P))
        fails = rep.failures()
        return bool(fails), {"failing": [f.name for f in fails][:4]}

    _timed(report, "dfrac:scaled-u-product-detected", "plumbing", uu_corruption)
    _timed(report, "dfrac:keep-bracket-detected", "plumbing", keep_bracket)
    return report


# ---------------------------------------------------------------------------


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


def run_criterion(n: int, level: str = "full", literal: bool = False, seed: int = 0) -> Report:
    fn = CRITERIA[n]
    if n == 8:
        return fn(level, literal=literal, seed=seed)
    if n == 9:
        return fn(level, literal=literal)
    if n == 10:
        return fn(level, seed=seed)
    return fn(level)


def run_suite(level: str = "quick", seed: int = 0, literal: bool = False,
              fail_fast: bool = True, tamper: Callable | None = None) -> Report:
    """Run every criterion; stop after the first failing one unless ``fail_fast`` is off.

    ``tamper`` (if given) is applied to each quotient algebra the suite builds.
    """
    global _tamper
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    report = Report(f"suite-{level}", {"level": level, "seed": seed, "literal": literal,
                                       "tampered": tamper is not None})
    previous, _tamper = _tamper, tamper
    try:
        for n in CRITERIA:
            start = time.perf_counter()
            sub = run_criterion(n, level, literal, seed)
            report.extend(sub, f"{n}/")
            report.data[f"criterion_{n}"] = {"passed": sub.passed, **sub.counts,
                                             "seconds": round(time.perf_counter() - start, 2)}
            if fail_fast and not sub.passed:
                report.data["stopped_after"] = n
                break
    finally:
        _tamper = previous
    return report
