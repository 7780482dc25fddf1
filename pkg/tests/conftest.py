from __future__ import annotations

import functools

import pytest

from hopfforge.exact import cyclo_root
from hopfforge.fraction import validate_fraction

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


@functools.lru_cache(maxsize=None)
def dbar(m: int, d: int, parts: tuple[int, ...] = (1,)):
    from hopfforge.findim import build_dbar
    return build_dbar(validate_fraction(m, parts), d, cyclo_root(m, 1))


@functools.lru_cache(maxsize=None)
def dt(m: int, d: int, t: int, parts: tuple[int, ...] = (1,)):
    from hopfforge.findim import build_dt
    return build_dt(validate_fraction(m, parts), d, cyclo_root(m, 1), t)


@functools.lru_cache(maxsize=None)
def taftfin(m: int, parts: tuple[int, ...] = (1,)):
    from hopfforge.findim import build_finite_taft
    return build_finite_taft(validate_fraction(m, parts), cyclo_root(m, 1))


@pytest.fixture(scope="session")
def dbar22():
    return dbar(2, 2)


@pytest.fixture(scope="session")
def dbar31():
    return dbar(3, 1)


@pytest.fixture(scope="session")
def dt263():
    return dt(2, 6, 3)
