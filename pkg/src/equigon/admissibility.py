"""Arithmetic applicability tests with their supporting certificates.

Each report lists every condition it checked, whether it held and any
witness, so a failing conjunct is visible. A false verdict means the
sufficient condition was not established, not that configurations are
known not to exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional

from .cohomology import SurvivorReport, bottom_row_survivor_check
from .errors import InvalidInput
from .index import (
    IndexVerdict,
    index_config_space,
    index_delta_complement,
    map_obstruction,
)
from .orbits import require_odd_prime


@dataclass
class Condition:
    name: str
    holds: bool
    witness: Any = None

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "witness": self.witness}


@dataclass
class AdmissibilityReport:
    question: str
    conditions: List[Condition]
    certificate: Optional[Any] = None
    verdict: bool = field(init=False)

    def __post_init__(self) -> None:
        self.verdict = all(c.holds for c in self.conditions)

    @property
    def summary(self) -> str:
        return "true" if self.verdict else "condition not established"

    def to_json(self) -> dict:
        cert = self.certificate
        if isinstance(cert, IndexVerdict):
            cert = {"index_verdict": cert.value}
        elif isinstance(cert, SurvivorReport):
            cert = {"survivor_check": cert.to_json()}
        return {
            "question": self.question,
            "verdict": self.verdict,
            "summary": self.summary,
            "conditions": [c.to_json() for c in self.conditions],
            "certificate": cert,
        }


def _check(d: int, r: Optional[int], p: int) -> None:
    require_odd_prime(p)
    if d < 1:
        raise InvalidInput(f"d must be >= 1, got {d}")
    if r is not None and r < 1:
        raise InvalidInput(f"r must be >= 1, got {r}")


def jd_plus_one(d: int, p: int) -> List[int]:
    return [j * d + 1 for j in range(1, p)]


def theorem_equilateral_applies(d: int, r: int, p: int) -> AdmissibilityReport:
    """Does the existence result for r (cycle, metric) pairs in R^d apply?"""
    _check(d, r, p)
    certificate = map_obstruction(index_config_space(d, p), index_delta_complement(r, p))
    return AdmissibilityReport(
        question=f"r-equilateral {p}-gons in R^{d} for r={r}",
        conditions=[Condition("d > r", d > r)],
        certificate=certificate,
    )


def pair_admissible(d: int, p: int) -> AdmissibilityReport:
    _check(d, None, p)
    witnesses = jd_plus_one(d, p)
    target = (p - 1) ** 2 // 2
    return AdmissibilityReport(
        question=f"(d, p) = ({d}, {p}) admissible",
        conditions=[
            Condition("p <= 2d+1", p <= 2 * d + 1),
            Condition(f"(p-1)^2/2 = {target} not of the form jd+1", target not in witnesses, witnesses),
        ],
        certificate=bottom_row_survivor_check(d, (p - 1) // 2, p),
    )


def triplet_check(d: int, r: int, p: int) -> AdmissibilityReport:
    """No equivariant map X_{d,p} -> S((Delta^r)^perp) when this verdict is true."""
    _check(d, r, p)
    witnesses = jd_plus_one(d, p)
    target = r * (p - 1)
    return AdmissibilityReport(
        question=f"(d, r, p) = ({d}, {r}, {p}) obstructed",
        conditions=[
            Condition("r <= d", r <= d),
            Condition(f"r(p-1) = {target} not of the form jd+1", target not in witnesses, witnesses),
        ],
        certificate=bottom_row_survivor_check(d, r, p),
    )
