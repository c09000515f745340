"""Result record shared by every counter, and its published JSON schema."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional


METHODS = ("ProjEnum", "HashCount", "MinLB", "BruteForce")


@dataclass
class LowerBoundResult:
    """A (possibly probabilistic) lower bound on the number of minimal models.

    ``count`` holds the integer bound produced by enumeration-based methods;
    hashing-based bounds only have ``bound_log2``.  ``bound_log2`` is
    ``None`` when the bound is zero.  ``confidence`` is the probability that
    the bound holds: 1 for deterministic methods, ``1 - delta`` otherwise.
    """

    bound_log2: Optional[float]
    exact: bool
    method: str
    confidence: float = 1.0
    count: Optional[int] = None
    delta: Optional[float] = None
    elapsed: float = 0.0
    oracle_log2: Optional[float] = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.exact and (self.confidence != 1.0 or self.count is None):
            raise ValueError("exact results carry an integer count and confidence 1")

    @classmethod
    def from_count(cls, count: int, exact: bool, method: str, **kw) -> "LowerBoundResult":
        return cls(bound_log2=log2_int(count), exact=exact, method=method, count=count, **kw)

    @property
    def bound(self) -> float:
        """The bound as a real number (may overflow to ``inf`` for huge bounds)."""
        if self.count is not None:
            return float(self.count)
        if self.bound_log2 is None:
            return 0.0
        try:
            return 2.0 ** self.bound_log2
        except OverflowError:
            return math.inf

    def to_json(self, timing: bool = False) -> dict[str, Any]:
        out = {
            "method": self.method,
            "count": self.count,
            "bound_log2": self.bound_log2,
            "exact": self.exact,
            "confidence": self.confidence,
            "delta": self.delta,
            "details": self.details,
        }
        if timing:
            out["elapsed_s"] = self.elapsed
        return out


def log2_int(n: int) -> Optional[float]:
    """log2 of a non-negative integer of any size; ``None`` for zero."""
    if n < 0:
        raise ValueError("negative count")
    if n == 0:
        return None
    if n.bit_length() < 1000:
        return math.log2(n)
    shift = n.bit_length() - 64
    return math.log2(n >> shift) + shift


RESULT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "mmcount result",
    "type": "object",
    "required": ["command", "status"],
    "properties": {
        "command": {"enum": ["minlb", "projenum", "hashcount", "bruteforce",
                             "mingen-count", "indep-support", "bench"]},
        "instance": {"type": ["string", "null"]},
        "status": {"enum": ["ok", "budget_exhausted"]},
        "method": {"enum": list(METHODS)},
        "count": {"type": ["integer", "null"], "minimum": 0},
        "bound_log2": {"type": ["number", "null"]},
        "exact": {"type": "boolean"},
        "confidence": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "delta": {"type": ["number", "null"]},
        "seed": {"type": ["integer", "null"]},
        "elapsed_s": {"type": "number", "minimum": 0},
        "details": {"type": "object"},
        "support": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "generators": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "summary": {"type": "object"},
    },
    "allOf": [
        {"if": {"properties": {"exact": {"const": True}}, "required": ["exact"]},
         "then": {"properties": {"confidence": {"const": 1}, "count": {"type": "integer"}}}},
    ],
}
