"""Verdict records shared by the modulus and certification modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"
VERDICTS = (CERTIFIED, REFUTED, INCONCLUSIVE)


def json_number(v):
    """Finite floats pass through; infinities become ``"inf"`` / ``"-inf"``."""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return v


@dataclass(frozen=True)
class RConvexityReport:
    """Outcome of an r-convexity test.

    ``witness`` is a tuple of points (and possibly a normal) that
    certifies a refutation; its layout depends on ``method``:
    ``(x, v, p)`` for support checks (boundary point, normal, violating
    point) and ``(x, y)`` for pair-based tests.
    """

    r: float
    verdict: str
    method: str
    witness: tuple | None = None
    samples: tuple = ()
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "r": json_number(self.r),
            "method": self.method,
            "samples": [[json_number(x) for x in s] for s in self.samples],
            "witness": None if self.witness is None else [np.asarray(w, dtype=float).tolist() for w in self.witness],
        }
