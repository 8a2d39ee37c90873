"""Verification outcomes shared by the harness and the metric-specific checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_WITNESSES = 10


@dataclass(frozen=True)
class Witness:
    x: tuple
    y: tuple
    lhs: float
    rhs: float

    def as_dict(self) -> dict:
        return {"x": list(self.x), "y": list(self.y), "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class VerificationReport:
    case: str
    domain: str
    samples: int
    seed: int | None
    max_violation: float
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if self.max_violation <= 0.0 else "fail"

    @property
    def passed(self) -> bool:
        return self.max_violation <= 0.0

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "domain": self.domain,
            "samples": self.samples,
            "seed": self.seed,
            "max_violation": self.max_violation,
            "witnesses": [w.as_dict() for w in self.witnesses],
            "verdict": self.verdict,
        }


def assess(case: str, domain: str, X, Y, lhs, rhs, slack, seed=None) -> VerificationReport:
    """Build a report for the assertion ``lhs <= rhs`` with per-sample ``slack``.

    ``max_violation`` is ``max(lhs - rhs - slack)``; non-finite sides count as
    infinite violations so that a broken evaluation can never pass.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    lhs = np.broadcast_to(np.asarray(lhs, dtype=float), (len(X),))
    rhs = np.broadcast_to(np.asarray(rhs, dtype=float), (len(X),))
    slack = np.broadcast_to(np.asarray(slack, dtype=float), (len(X),))
    gap = lhs - rhs - slack
    gap = np.where(np.isfinite(lhs) & np.isfinite(rhs), gap, np.inf)
    if len(gap) == 0:
        return VerificationReport(case, domain, 0, seed, 0.0)
    worst = float(np.max(gap))
    bad = np.flatnonzero(gap > 0)
    bad = bad[np.argsort(-gap[bad], kind="stable")][:MAX_WITNESSES]
    wit = [Witness(tuple(map(float, X[i])), tuple(map(float, Y[i])), float(lhs[i]), float(rhs[i]))
           for i in bad]
    return VerificationReport(case, domain, len(X), seed, worst, wit)
