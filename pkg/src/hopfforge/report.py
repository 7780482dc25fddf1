"""Check records and run reports shared by the verification routines."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class Check:
    name: str
    anchor: str
    status: str
    witness: Any = None
    time: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "status": self.status,
                "witness": _jsonable(self.witness), "time": round(self.time, 6)}

    @classmethod
    def from_json(cls, data: dict) -> "Check":
        return cls(data["name"], data["anchor"], data["status"], data.get("witness"),
                   data.get("time", 0.0))


@dataclass
class Report:
    title: str
    params: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, anchor: str, ok: bool | None, witness: Any = None,
            elapsed: float = 0.0) -> Check:
        status = SKIP if ok is None else (PASS if ok else FAIL)
        check = Check(name, anchor, status, witness, elapsed)
        self.checks.append(check)
        return check

    def run(self, name: str, anchor: str, fn: Callable[[], tuple[bool | None, Any]]) -> Check:
        """Time ``fn`` (returning (ok, witness)) and record the outcome."""
        start = time.perf_counter()
        ok, witness = fn()
        return self.add(name, anchor, ok, witness, time.perf_counter() - start)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.anchor, c.status, c.witness, c.time))

    @property
    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_json(self) -> dict:
        return {"title": self.title, "params": _jsonable(self.params),
                "checks": [c.to_json() for c in self.checks],
                "summary": self.counts, "data": _jsonable(self.data)}

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_json(), **kwargs)

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        return cls(data["title"], data.get("params", {}),
                   [Check.from_json(c) for c in data.get("checks", [])], data.get("data", {}))


def _jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        return sorted(items, key=str) if isinstance(obj, (set, frozenset)) else items
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return str(obj)
