"""Command-line front end: ``hopfforge <command> ...``.

Every command assembles a :class:`RunReport` and exits 0 when all checks
pass, 1 when a check fails (or a construction is rejected) and 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import __version__
from .exact import CyclotomicNumber, cyclo_root, parse_cyclotomic
from .fraction import ConditionFailed, FractionSpec, enumerate_fractions, validate_fraction
from .report import Report

QUICK_EXHAUSTIVE_LIMIT = 64


@dataclass
class RunReport:
    """A report with the tool version and the command that produced it."""

    version: str
    command: list[str]
    report: Report
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"tool": "hopfforge", "version": self.version, "command": list(self.command),
                **self.report.to_json(), **({"output": self.extra} if self.extra else {})}

    @classmethod
    def from_json(cls, data: dict) -> "RunReport":
        return cls(data["version"], list(data["command"]), Report.from_json(data),
                   data.get("output", {}))

    @property
    def exit_code(self) -> int:
        return 0 if self.report.passed else 1


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def parse_root(text: str) -> CyclotomicNumber:
    try:
        return parse_cyclotomic(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse root {text!r}: {exc}") from exc


def parse_parts(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise UsageError(f"cannot parse parts {text!r}") from exc
    if not parts:
        raise UsageError("--parts needs at least one entry")
    return parts


def _spec(args) -> FractionSpec:
    return validate_fraction(args.m, parse_parts(args.parts))


def _gamma(args, m: int) -> CyclotomicNumber:
    text = getattr(args, "gamma", None) or getattr(args, "root", None)
    return parse_root(text) if text else cyclo_root(m, 1)


def _guard(report: Report, fn: Callable[[], object]):
    """Run a construction; known rejections become a failing check."""
    from .findim import FinDimError
    from .presented import PresentationError
    from .reps import RepError
    try:
        return fn()
    except (ConditionFailed, PresentationError, FinDimError, RepError) as exc:
        witness = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ConditionFailed):
            witness["failed_conditions"] = list(exc.failed)
        report.add("construction", "plumbing", False, witness)
        return None


# ---------------------------------------------------------------------------
# commands


def cmd_fractions(args) -> tuple[Report, dict]:
    report = Report("fractions", {"action": args.action, "m": args.m})
    out: dict = {}
    if args.action == "enumerate":
        found = enumerate_fractions(args.m, args.theta)
        out["fractions"] = [f.to_json() for f in found]
        if args.theta == 1:
            expect = [k for k in range(1, args.m + 1) if math.gcd(k, args.m) == 1 and (k < args.m or args.m == 1)]
            got = sorted(f.parts[0] for f in found)
            report.add("length-one-are-units", "fraction-definition", got == expect,
                       None if got == expect else {"got": got, "expected": expect})
        report.add("enumerated", "plumbing", True, {"count": len(found)})
    else:
        if not args.parts:
            raise UsageError("validate needs --parts")
        parts = parse_parts(args.parts)
        try:
            spec = validate_fraction(args.m, parts)
            out["fraction"] = spec.to_json()
            report.add("valid", "fraction-definition", True)
        except ConditionFailed as exc:
            report.add("valid", "fraction-definition", False,
                       {"first_failed": exc.index, "failed": list(exc.failed),
                        "witness": exc.witness})
    return report, out


def cmd_identities(args) -> tuple[Report, dict]:
    from .qcombi import PhiContext, verify_identities
    holder = Report("identities", {"m": args.m, "parts": args.parts, "d": args.d})
    spec = _guard(holder, lambda: _spec(args))
    if spec is None:
        return holder, {}
    ctx = PhiContext(spec, args.d, _gamma(args, spec.m))
    return verify_identities(ctx, args.binomial_modulus), {}


def cmd_build(args) -> tuple[Report, dict]:
    from .presented import (build_family, verify_coassoc_counit_antipode,
                            verify_relation_compatibility)
    report = Report(f"build-{args.family}", {"m": args.m, "parts": args.parts,
                                            "verify": args.verify})
    spec = _guard(report, lambda: _spec(args))
    if spec is None:
        return report, {}
    if args.family == "taft":
        if args.t is None:
            raise UsageError("taft needs --t")
        root = parse_root(args.root) if args.root else cyclo_root(spec.m * args.t, 1)
        build = lambda: build_family("taft", spec, t=args.t, xi=root,
                                     exponent_rule=args.exponent_rule)
    elif args.family == "liu":
        if args.omega is None:
            raise UsageError("liu needs --omega")
        build = lambda: build_family("liu", spec, omega=args.omega, gamma=_gamma(args, spec.m))
    else:
        if args.d is None:
            raise UsageError("dfrac needs --d")
        build = lambda: build_family("dfrac", spec, d=args.d, gamma=_gamma(args, spec.m),
                                     bracket=args.bracket)
    P = _guard(report, build)
    if P is None:
        return report, {}
    report.params.update(P.describe())
    report.add("construction", "plumbing", True)
    if args.verify in ("relations", "all"):
        report.extend(verify_relation_compatibility(P), "relations/")
    if args.verify in ("axioms", "all"):
        report.extend(verify_coassoc_counit_antipode(P), "axioms/")
    return report, {}


def _quotient_algebra(args, report: Report):
    from .findim import build_dbar, build_dt, build_finite_taft
    spec = _guard(report, lambda: _spec(args))
    if spec is None:
        return None, None
    if args.kind == "taftfin":
        root = parse_root(args.root) if args.root else cyclo_root(spec.m, 1)
        H = _guard(report, lambda: build_finite_taft(spec, root))
        return H, spec.m ** 2
    if args.d is None:
        raise UsageError(f"{args.kind} needs --d")
    gamma = _gamma(args, spec.m)
    if args.kind == "dbar":
        return _guard(report, lambda: build_dbar(spec, args.d, gamma)), 2 * spec.m ** 2 * args.d
    if args.t is None:
        raise UsageError("dt needs --t")
    return _guard(report, lambda: build_dt(spec, args.d, gamma, args.t)), 2 * spec.m ** 2 * args.t


def cmd_quotient(args) -> tuple[Report, dict]:
    from .findim import (dbar_explicit_integral, dt_pivot_element, is_left_integral, left_integral,
                         pivotal_grouplike, verify_hopf)
    report = Report(f"quotient-{args.kind}", {"m": args.m, "parts": args.parts, "d": args.d,
                                             "t": args.t})
    H, expected = _quotient_algebra(args, report)
    if H is None:
        return report, {}
    report.params.update({k: v for k, v in H.meta.items() if k not in ("presentation", "blocks")})
    report.add("dimension", "dimension-formula", H.dim == expected,
               {"dim": H.dim, "expected": expected})
    out: dict = {"dim": H.dim}
    if args.verify:
        mode = args.verify if args.verify != "auto" else (
            "exhaustive" if H.dim <= QUICK_EXHAUSTIVE_LIMIT else "generators")
        report.extend(verify_hopf(H, mode), "hopf/")
        lam = left_integral(H)
        eps = H.eps(lam.vector)
        out["integral_counit"] = str(eps)
        if args.kind == "dbar":
            report.add("integral-counit", "integral", eps == H.dim, {"eps": str(eps)})
            report.add("explicit-integral", "integral",
                       is_left_integral(H, dbar_explicit_integral(H)))
        elif args.kind == "dt":
            semisimple = eps != 0
            report.add("semisimple-iff-m-is-1", "integral", semisimple == (H.meta["m"] == 1),
                       {"eps": str(eps)})
            g0 = dt_pivot_element(H)
            report.add("pivotal-element", "pivotal", pivotal_grouplike(H, [g0]) is not None,
                       {"element": H.format(g0)})
    if args.csv:
        out["csv"] = H.to_csv()
    return report, out


def _rep_context(args, report: Report):
    from .reps import dbar_context
    spec = _guard(report, lambda: _spec(args))
    if spec is None:
        return None
    return _guard(report, lambda: dbar_context(spec, args.d, _gamma(args, spec.m)))


def cmd_rep(args) -> tuple[Report, dict]:
    from .reps import (build_simples, central_idempotents, expected_profile, fusion_properties,
                       fusion_table, verify_fusion_against_closed_forms, wedderburn_profile)
    report = Report(f"rep-{args.action}", {"m": args.m, "parts": args.parts, "d": args.d})
    ctx = _rep_context(args, report)
    if ctx is None:
        return report, {}
    report.params.update({"zeta": str(ctx.zeta), "zeta_exponent": ctx.zeta_exponent,
                          "a": ctx.a})
    out: dict = {}
    if args.action == "profile":
        idem = central_idempotents(ctx)
        report.extend(idem.report, "idempotents/")
        prof = wedderburn_profile(ctx.H, idem.vectors)
        expect = expected_profile(ctx.params.m, ctx.params.d)
        report.add("profile", "wedderburn-profile", prof == expect,
                   {"profile": prof, "expected": expect})
        out["profile"] = prof
        return report, out
    simples = build_simples(ctx)
    report.extend(simples.report, "simples/")
    if args.action == "simples":
        out["simples"] = [mod.to_json() for mod in simples.modules]
        return report, out
    idem = central_idempotents(ctx, simples)
    report.extend(idem.report, "idempotents/")
    if args.action == "idempotents":
        out.update(idem.to_json())
        return report, out
    table = fusion_table(ctx, simples, idem)
    report.extend(fusion_properties(table, "exhaustive" if len(table.labels) <= 12 else 50,
                                    args.seed), "fusion/")
    report.extend(verify_fusion_against_closed_forms(ctx, table, sign_rule=args.sign_rule),
                  "fusion/")
    out["fusion"] = table.to_json()
    if args.csv:
        out["csv"] = table.to_csv()
    return report, out


def cmd_suite(args) -> tuple[Report, dict]:
    from .suite import first_entry_corruption, run_suite
    tamper = first_entry_corruption if args.inject_corruption else None
    return run_suite(args.level, seed=args.seed, fail_fast=not args.keep_going,
                     tamper=tamper), {}


COMMANDS = {"fractions": cmd_fractions, "identities": cmd_identities, "build": cmd_build,
            "quotient": cmd_quotient, "rep": cmd_rep, "suite": cmd_suite}


# ---------------------------------------------------------------------------
# parser and entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--csv", action="store_true", help="emit CSV output where available")
    common.add_argument("--out", metavar="FILE", help="write the output to FILE")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    def params(p, d=False, t=False, omega=False, root=True):
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--parts", required=True, help="comma separated parts")
        if d:
            p.add_argument("--d", type=int)
        if t:
            p.add_argument("--t", type=int)
        if omega:
            p.add_argument("--omega", type=int)
        if root:
            p.add_argument("--root", help="root of unity, e.g. z12^1")
            p.add_argument("--gamma", help="primitive m-th root (default z{m}^1)")

    parser = _Parser(prog="hopfforge", description="Exact constructions and checks for "
                     "fraction Hopf algebras and their quotients.")
    parser.add_argument("--version", action="version", version=f"hopfforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fractions", parents=[common], help="enumerate or validate fractions")
    p.add_argument("action", choices=["enumerate", "validate"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--theta", type=int)
    p.add_argument("--parts")

    p = sub.add_parser("identities", parents=[common], help="bracket and q-binomial identities")
    params(p, d=True)
    p.set_defaults(d=1)
    p.add_argument("--binomial-modulus", choices=["exponent", "m"], default="exponent")

    p = sub.add_parser("build", parents=[common], help="presented families")
    p.add_argument("family", choices=["taft", "liu", "dfrac"])
    params(p, d=True, t=True, omega=True)
    p.add_argument("--verify", choices=["relations", "axioms", "all"], default="all")
    p.add_argument("--exponent-rule", choices=["reduced", "plain"], default="reduced")
    p.add_argument("--bracket", choices=["omit", "keep"], default="omit")

    p = sub.add_parser("quotient", parents=[common], help="finite-dimensional quotients")
    p.add_argument("kind", choices=["dbar", "dt", "taftfin"])
    params(p, d=True, t=True)
    p.add_argument("--verify", nargs="?", const="auto",
                   choices=["auto", "exhaustive", "generators"])

    p = sub.add_parser("rep", parents=[common], help="representations of Dbar")
    p.add_argument("action", choices=["idempotents", "simples", "fusion", "profile"])
    params(p, d=True)
    p.add_argument("--sign-rule", choices=["corrected", "literal"], default="corrected",
                   help="sign convention for products of two dm/2 one-dimensional simples")

    p = sub.add_parser("suite", parents=[common], help="run the verification matrix")
    p.add_argument("level", choices=["quick", "full"])
    p.add_argument("--keep-going", action="store_true",
                   help="run every criterion even after one fails")
    p.add_argument("--inject-corruption", action="store_true",
                   help="corrupt one structure constant of every built quotient")
    return parser


def _render_text(run: RunReport) -> str:
    lines = [f"hopfforge {run.version}: {run.report.title}"]
    for c in run.report.checks:
        lines.append(f"  {c.status.upper():4} {c.name} [{c.anchor}]"
                     + (f" {json.dumps(c.to_json()['witness'])}" if c.status == "fail" else ""))
    for key, value in run.extra.items():
        if key != "csv":
            lines.append(f"  {key}: {json.dumps(value) if not isinstance(value, str) else value}")
    counts = run.report.counts
    lines.append(f"summary: {counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        random.seed(args.seed)
        start = time.perf_counter()
        report, extra = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hopfforge: usage error: {exc}", file=sys.stderr)
        return 2
    report.data.setdefault("wall_time", round(time.perf_counter() - start, 3))
    run = RunReport(__version__, ["hopfforge", *argv], report, extra)
    if args.csv and "csv" in extra and not args.json:
        text = extra["csv"]
    elif args.json:
        text = json.dumps(run.to_json(), indent=2)
    else:
        text = _render_text(run)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return run.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
