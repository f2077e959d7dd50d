"""Check reports shared by the axiom checkers and the command line."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

PASS = "pass"
FAIL = "fail"
SAMPLED_PASS = "sampled-pass"
STATUSES = (PASS, FAIL, SAMPLED_PASS)


@dataclass
class Check:
    id: str
    status: str
    detail: dict = field(default_factory=dict)
    counterexample: Any = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        d = {"id": self.id, "status": self.status, "detail": self.detail}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Check":
        return cls(d["id"], d["status"], dict(d.get("detail", {})), d.get("counterexample"))


@dataclass
class Report:
    suite: str
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def get(self, check_id: str) -> Check:
        for e in self.entries:
            if e.id == check_id:
                return e
        raise KeyError(check_id)

    def failures(self) -> list:
        return [e for e in self.entries if not e.ok]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(d["suite"], [Check.from_dict(e) for e in d["entries"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    @classmethod
    def merge(cls, suite: str, reports: Iterable["Report"]) -> "Report":
        entries = []
        for r in reports:
            entries.extend(Check(f"{r.suite}.{e.id}", e.status, e.detail, e.counterexample) for e in r.entries)
        return cls(suite, entries)


@dataclass(frozen=True)
class CheckConfig:
    """Knobs for the axiom checkers.

    ``samples`` is the number of random instances for sampled checks,
    ``coefficients`` the grid used for exhaustive simple-function sweeps,
    ``max_terms`` the largest number of terms in generated simple functions.
    """

    seed: int = 0
    samples: int = 200
    precision: int = 16
    coefficients: tuple = (-2, -1, 0, 1, 2)
    max_terms: int = 3
    max_m: int = 64

    def rng(self, salt: str = "") -> random.Random:
        return random.Random(f"{self.seed}:{salt}")


def verdict(check_id: str, failures: list, sampled: bool = False, detail: Optional[dict] = None) -> Check:
    """Build a check entry from a list of counterexamples (first one is kept)."""
    detail = dict(detail or {})
    if failures:
        detail["failures"] = len(failures)
        return Check(check_id, FAIL, detail, failures[0])
    return Check(check_id, SAMPLED_PASS if sampled else PASS, detail)


__all__ = ["Check", "CheckConfig", "Report", "verdict", "PASS", "FAIL", "SAMPLED_PASS"]
