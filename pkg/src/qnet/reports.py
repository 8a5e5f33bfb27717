"""Result records shared by the checkers and the law runner."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"
INTERNAL_DISAGREEMENT = "INTERNAL_DISAGREEMENT"


class PreconditionFailed(ValueError):
    def __init__(self, what: str, detail: Any = None):
        super().__init__(f"precondition failed: {what}" + (f" ({detail})" if detail is not None else ""))
        self.what = what
        self.detail = detail


@dataclass
class CheckResult:
    """Boolean verdict with an optional counterexample."""

    name: str
    status: str
    witness: Any = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.status == PASS

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return {"check": self.name, "status": self.status, "witness": jsonable(self.witness),
                "detail": jsonable(self.detail)}


def verdict(name: str, ok: bool, witness=None, **detail) -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, None if ok else witness, detail)


@dataclass
class LawReport:
    law: str
    universe: dict
    checked: int = 0
    satisfied: int = 0
    vacuous: int = 0
    failures: list = field(default_factory=list)
    seed: int | None = None
    millis: float = 0.0

    @property
    def status(self) -> str:
        if self.failures:
            return FAIL
        if self.satisfied == 0:
            return INCONCLUSIVE
        return PASS

    def __bool__(self):
        return self.status == PASS

    def fail(self, inputs, lhs=None, rhs=None, keep: int = 5):
        if len(self.failures) < keep:
            self.failures.append({"inputs": jsonable(inputs), "lhs": jsonable(lhs), "rhs": jsonable(rhs)})
        else:
            self.failures.append(None)

    def to_json(self, timing: bool = True) -> dict:
        d = {"law": self.law, "status": self.status, "universe": self.universe,
             "checked": self.checked, "satisfied": self.satisfied, "vacuous": self.vacuous,
             "failures": [f for f in self.failures if f is not None],
             "failure_count": len(self.failures), "seed": self.seed}
        if timing:
            d["millis"] = round(self.millis, 3)
        return d


def jsonable(x):
    """Best-effort conversion to JSON-compatible values."""
    import numpy as np
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.complexfloating,)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=str) if isinstance(x, (set, frozenset)) else items
    return str(x)
