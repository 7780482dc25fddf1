"""One line per acceptance criterion, echoed in the terminal summary.

Criteria 8 and 9 are run with their literal statements.  Both fail for
reasons pinned down by the analysis tests below, and are marked as strict
expected failures.
"""
from __future__ import annotations

import functools
import random
import re
from collections import Counter

import pytest

from conftest import ACCEPTANCE_LINES, dt, taftfin
from hopfforge.findim import (group_likes, is_cocommutative, is_commutative, quotient_hopf,
                              verify_hopf)
from hopfforge.suite import (DIC3_ORDERS, _corruptions, group_element_orders, negative_control,
                             run_criterion, run_suite)


@functools.lru_cache(maxsize=None)
def report(n: int, literal: bool = False):
    return run_criterion(n, "full", literal=literal)


def record(n: int, rep, note: str = "") -> None:
    title = rep.title.split(":", 1)[-1]
    c = rep.counts
    line = (f"criterion {n:2d} {title:<22} {'PASS' if rep.passed else 'FAIL'}  "
            f"({c['pass']} passed, {c['fail']} failed, {c['skip']} skipped){note}")
    ACCEPTANCE_LINES[n] = line
    print(line)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 10])
def test_criterion(n):
    rep = report(n)
    record(n, rep)
    assert rep.passed, [c.to_json() for c in rep.failures()]


# -- criterion 8: fusion rules -------------------------------------------------------

@pytest.mark.xfail(strict=True, reason="the tabulated sign of dm/2 (x) dm/2 is wrong for odd a")
def test_criterion_8():
    rep = report(8, literal=True)
    record(8, rep, "  literal tables; the corrected sign rule passes")
    assert rep.passed


def test_criterion_8_failure_is_the_half_sign_only():
    rep = report(8, literal=True)
    failing = {c.name for c in rep.failures()}
    # a = -3 for (2,2) and a = -9 for (2,6) are odd; (3,1) has no dm/2 family
    assert failing == {"dbar(m=2,d=2):closed-forms", "dbar(m=2,d=6):closed-forms"}
    for check in rep.failures():
        w = check.witness
        assert w["a"] % 2 == 1
        assert w["mismatch_count"] == 16  # every pair among the 4 + 4 modules V+-[dm/2, j]
        m, d = map(int, re.match(r"dbar\(m=(\d+),d=(\d+)\)", check.name).groups())
        r = m * d // 2
        for row in w["mismatches"]:
            left, right = row["pair"].split("*")
            assert left[3:].startswith(f"{r},") and right[3:].startswith(f"{r},")
            assert row["computed"][0:2] in ("V+", "V-") and row["closed_form"][0:2] in ("V+", "V-")
            assert row["computed"][2:] == row["closed_form"][2:]
            assert row["computed"][1] != row["closed_form"][1]


def test_criterion_8_with_corrected_sign_rule():
    rep = report(8, literal=False)
    assert rep.passed, [c.to_json() for c in rep.failures()]


# -- criterion 9: the semisimple quotient of D_t ---------------------------------------

@pytest.mark.xfail(strict=True, reason="the 12-dimensional quotient is the dicyclic group algebra")
def test_criterion_9():
    rep = report(9, literal=True)
    record(9, rep, "  literal commutativity; quotient is k[Dic3]")
    assert rep.passed


def test_criterion_9_failure_is_commutativity_only():
    rep = report(9, literal=True)
    assert [c.name for c in rep.failures()] == ["quotient-commutative"]
    assert report(9, literal=False).passed


def test_quotient_is_dicyclic_group_algebra():
    H = dt(2, 6, 3)
    Q, _ = quotient_hopf(H, [H.gens["y1"], H.gens["u1"]])
    assert Q.dim == 12 and verify_hopf(Q).passed
    assert is_cocommutative(Q)[0]
    ok, witness = is_commutative(Q)
    assert not ok and witness is not None
    gl = group_likes(Q)
    assert len(gl.elements) == 12
    orders = group_element_orders(Q, gl.elements)
    # among the five groups of order 12 only Dic3 has one involution and six elements of order 4
    assert orders == Counter({1: 1, 2: 1, 3: 2, 4: 6, 6: 2})
    assert orders == DIC3_ORDERS


# -- suite-level behaviour -----------------------------------------------------------------

def test_quick_suite_passes():
    rep = run_suite("quick")
    assert rep.passed, [c.to_json() for c in rep.failures()][:5]
    assert "stopped_after" not in rep.data


def test_suite_is_deterministic():
    a = [run_criterion(n, "quick", seed=7).to_json()["checks"] for n in (1, 4, 6)]
    b = [run_criterion(n, "quick", seed=7).to_json()["checks"] for n in (1, 4, 6)]
    assert strip_clock(a) == strip_clock(b)


def strip_clock(runs):
    """Drop wall-clock measurements; everything else must repeat exactly."""
    out = []
    for checks in runs:
        rows = []
        for c in checks:
            w = c["witness"]
            if isinstance(w, dict):
                w = {k: v for k, v in w.items() if k != "seconds"}
            rows.append({**{k: v for k, v in c.items() if k != "time"}, "witness": w})
        out.append(rows)
    return out


def test_negative_control_is_seeded():
    H = taftfin(3)
    picks = lambda seed: [where for where, _ in _corruptions(H, 25, random.Random(seed))]
    assert picks(4) == picks(4)
    assert picks(4) != picks(5)
    ok, witness = negative_control(H, 25, seed=4, mode="exhaustive")
    assert ok and witness == {"corruptions": 50}
