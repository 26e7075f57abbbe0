"""
Data models for obstruction computations.

This module defines Pydantic models for the outcomes reported by the solvers:
- Witness: Refutation datum of a NoSolution outcome
- SolveOutcome: Canonical solution with free parameters, or a refutation
- Refutation / PeriodicityCertificate: Constraint chains refuting eventual periodicity
- WoundPoint: Local point (x, y) on t x^p = y^p - y

JSON keys are fixed: status, solution, freeParams, witness, place, class, bound.
"""

from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from cartier_lab.algebra.series import LaurentSeries


class SolveStatus(str, Enum):
    """Verdict of a preimage computation."""

    SOLVED = "Solved"
    NO_SOLUTION = "NoSolution"


class Witness(BaseModel):
    """Refutation datum that re-verifies without the solver.

    kind "trace": b_{-1} has nonzero absolute trace, so x - x^(1/p) = b_{-1}
    has no solution in F_q.

    kind "negative_coefficient": the first component of the target has the
    coefficient `value` at u^exponent while every candidate forces `forced`
    there.
    """

    model_config = ConfigDict(frozen=True)

    kind: str
    """Either "trace" or "negative_coefficient"."""

    exponent: int
    """Exponent of the violated coefficient equation."""

    value: str
    """Target coefficient at that exponent."""

    forced: Optional[str] = None
    """Coefficient forced by the rest of the system (negative_coefficient only)."""

    trace: Optional[int] = None
    """Absolute trace of the target coefficient (trace only)."""

    def to_json_dict(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)


class SolveOutcome(BaseModel):
    """Result of a q_v-preimage computation.

    Solved outcomes carry the canonical solution (free coefficients 0, least
    Artin-Schreier representative); NoSolution outcomes carry a Witness.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    status: SolveStatus
    solution: Optional[LaurentSeries] = None
    free_params: list[str] = Field(default_factory=list)
    witness: Optional[Witness] = None
    place: Optional[str] = None
    bound: int = Field(ge=0, description="Precision M the outcome is asserted to")
    verified: bool = False

    @property
    def solved(self) -> bool:
        return self.status == SolveStatus.SOLVED

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "solution": None if self.solution is None else self.solution.to_json_dict(),
            "freeParams": list(self.free_params),
            "witness": None if self.witness is None else self.witness.to_json_dict(),
            "place": self.place,
            "bound": self.bound,
            "verified": self.verified,
        }


class PlaceClassRow(BaseModel):
    """One place of a cokernel class table."""

    model_config = ConfigDict(frozen=True)

    place: str
    degree: int = Field(ge=1)
    integral: bool
    residue: str
    """The u^-1 coefficient of the localized differential."""

    coker_class: int
    outcome: Optional[SolveOutcome] = None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "place": self.place,
            "degree": self.degree,
            "integral": self.integral,
            "residue": self.residue,
            "class": self.coker_class,
            "outcome": None if self.outcome is None else self.outcome.to_json_dict(),
        }

    def to_csv_row(self) -> dict[str, Any]:
        outcome = self.outcome
        return {
            "place": self.place,
            "degree": self.degree,
            "integral": self.integral,
            "residue": self.residue,
            "class": self.coker_class,
            "status": "" if outcome is None else outcome.status.value,
            "bound": "" if outcome is None else outcome.bound,
        }


class Constraint(BaseModel):
    """One recursion constraint A[left] - A[right] = rhs over F_p (n is its index)."""

    model_config = ConfigDict(frozen=True)

    n: int
    left: int
    right: int
    rhs: int

    def to_json_dict(self) -> dict[str, int]:
        return self.model_dump()


class Refutation(BaseModel):
    """Inconsistent constraint cycle refuting period P for every preperiod up to `max_preperiod`.

    The signed sum of the constraints (with `signs`) cancels on the left
    and leaves `total` != 0 (mod p) on the right.
    """

    model_config = ConfigDict(frozen=True)

    period: int = Field(ge=1)
    max_preperiod: int = Field(ge=0)
    constraints: list[Constraint]
    signs: list[int]
    total: int

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "period": self.period,
            "maxPreperiod": self.max_preperiod,
            "constraints": [c.to_json_dict() for c in self.constraints],
            "signs": list(self.signs),
            "total": self.total,
        }


class TelescopedChain(BaseModel):
    """Constraints n = M (p-1)^N p^j, j < s, summing to a_start - a_end = total.

    Here left/right are absolute coefficient indices, not residues.
    """

    model_config = ConfigDict(frozen=True)

    start: int
    end: int
    constraints: list[Constraint]
    total: int

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "start": self.start,
            "end": self.end,
            "constraints": [c.to_json_dict() for c in self.constraints],
            "total": self.total,
        }


class PeriodicityCertificate(BaseModel):
    """Refutations of eventual periodicity of the [t]-adic preimage of x_N - x_K."""

    model_config = ConfigDict(frozen=True)

    p: int
    N: int = Field(ge=0)
    K: int
    Pmax: int = Field(ge=1)
    Lmax: int = Field(ge=0)
    refutations: list[Refutation]
    inconclusive: list[int] = Field(default_factory=list)
    """Periods whose scanned window produced no contradiction."""

    @property
    def complete(self) -> bool:
        return not self.inconclusive and len(self.refutations) == self.Pmax

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "N": self.N,
            "K": self.K,
            "bound": {"Pmax": self.Pmax, "Lmax": self.Lmax},
            "refutations": [r.to_json_dict() for r in self.refutations],
            "inconclusive": list(self.inconclusive),
            "complete": self.complete,
        }


class WoundPoint(BaseModel):
    """Local point on t x^p = y^p - y, asserted to O(u^M)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: LaurentSeries
    y: LaurentSeries
    place: str
    precision: int = Field(ge=0)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "place": self.place,
            "x": self.x.to_json_dict(),
            "y": self.y.to_json_dict(),
            "bound": self.precision,
        }
