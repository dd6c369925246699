"""Uniform check reports with a deterministic JSON form."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

PASS = "pass"
FAIL = "fail"
ERROR = "error"


@dataclass
class Report:
    identity: str
    params: dict[str, Any]
    status: str
    first_discrepancy: dict[str, Any] | None = None
    runtime_ms: float | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in (PASS, FAIL, ERROR):
            raise ValueError(f"bad status {self.status!r}")
        if (self.status == PASS) != (self.first_discrepancy is None):
            raise ValueError("discrepancy must be null exactly when the check passes")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {"identity": self.identity}
        out.update(self.params)
        out["status"] = self.status
        out["first_discrepancy"] = self.first_discrepancy
        out["runtime_ms"] = round(self.runtime_ms, 3) if timing and self.runtime_ms is not None else None
        if self.details:
            out["details"] = self.details
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


class Stopwatch:
    def __init__(self) -> None:
        self.ms = 0.0


@contextmanager
def stopwatch() -> Iterator[Stopwatch]:
    sw = Stopwatch()
    start = time.perf_counter()
    try:
        yield sw
    finally:
        sw.ms = (time.perf_counter() - start) * 1000.0
