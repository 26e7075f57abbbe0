"""
Run configuration and reports.

This module defines Pydantic models for the CLI surface:
- RunConfig: Every command parameter, validated before any computation
- Report: Versioned result envelope written as JSON, CSV or text

JSON is written with sorted keys so that identical configurations produce
byte-identical reports.
"""

import csv
import io
import json
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cartier_lab.algebra.gf import FieldConfig, get_field
from cartier_lab.algebra.ratfield import Place, parse_place, parse_rational, places_up_to_degree

SCHEMA_VERSION = "1"

Command = Literal["zp", "wound", "points", "cert", "selftest"]
OutputFormat = Literal["json", "csv", "text"]

SELFTEST_MODULES = ("gf", "series", "ratfield", "cartier", "obstruction")


class RunConfig(BaseModel):
    """Validated parameters of one CLI run.

    Validation Rules:
    - p is an odd prime and the field F_{p^m} can be built
    - family indices: N >= 0 for Z/p, N > 0 for the wound group, pairs N < K
    - every place string parses to a monic irreducible or 1/t
    - bounds (precision, degree, Pmax, Lmax) are positive
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    p: int = 3
    m: int = Field(default=1, ge=1)
    precision: int = Field(default=30, ge=1, description="Truncation order M")
    output_format: OutputFormat = "json"
    out: Optional[str] = None
    seed: int = 0
    workers: int = Field(default=1, ge=1)

    ns: list[int] = Field(default_factory=list)
    """Z/p family indices for the local class tables."""

    pairs: list[tuple[int, int]] = Field(default_factory=list)
    """(N, K) pairs for global searches and certificates."""

    places: list[str] = Field(default_factory=list)
    places_deg: Optional[int] = Field(default=None, ge=1)
    """Expand to every place of degree at most this, plus 1/t."""

    search_degree: int = Field(default=4, ge=0, description="Height bound D of the global searches")
    pmax: int = Field(default=50, ge=1)
    lmax: int = Field(default=50, ge=0)

    n: Optional[int] = None
    k: Optional[int] = None

    place: Optional[str] = None
    xs: list[str] = Field(default_factory=list)
    global_search: Optional[int] = Field(default=None, ge=0)

    only: Optional[str] = None

    @field_validator("p")
    @classmethod
    def _odd_prime(cls, p: int) -> int:
        # FieldConfig raises FieldError (a ValueError) with the precise reason
        FieldConfig(p)
        return p

    @field_validator("ns")
    @classmethod
    def _nonnegative_ns(cls, ns: list[int]) -> list[int]:
        for N in ns:
            if N < 0:
                raise ValueError(f"family index N must be non-negative, got {N}")
        return ns

    @field_validator("pairs")
    @classmethod
    def _ordered_pairs(cls, pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
        for N, K in pairs:
            if not 0 <= N < K:
                raise ValueError(f"pair {N}:{K} must satisfy 0 <= N < K")
        return pairs

    @field_validator("only")
    @classmethod
    def _known_module(cls, only: Optional[str]) -> Optional[str]:
        if only is not None and only not in SELFTEST_MODULES:
            raise ValueError(f"unknown module '{only}'; choose from {', '.join(SELFTEST_MODULES)}")
        return only

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        field = self.field()
        for text in self.places:
            parse_place(field, text)
        if self.place is not None:
            parse_place(field, self.place)
        for text in self.xs:
            parse_rational(field, text)

        if self.command == "wound":
            if self.n is None:
                raise ValueError("wound needs --n")
            if self.n <= 0:
                raise ValueError(f"the wound family needs N > 0, got {self.n}")
            if self.k is not None and self.k <= self.n:
                raise ValueError(f"need K > N, got N={self.n}, K={self.k}")
        if self.command == "points" and self.xs and self.place is None:
            raise ValueError("points needs --place to lift --xs")
        if self.command == "cert" and not self.pairs:
            raise ValueError("cert needs at least one --pairs entry")
        return self

    def field(self) -> FieldConfig:
        return get_field(self.p, self.m)

    def resolve_places(self, default: tuple[str, ...] = ()) -> list[Place]:
        """Requested places in place order, duplicates removed."""
        field = self.field()
        if self.places_deg is not None:
            found = places_up_to_degree(field, self.places_deg)
        else:
            texts = self.places or list(default)
            found = [parse_place(field, text) for text in texts]
        return sorted(set(found), key=Place.sort_key)

    def echo(self) -> dict[str, Any]:
        """Parameters that determine the results (no output path or pool size)."""
        return self.model_dump(mode="json", exclude={"out", "workers", "output_format"})


class Report(BaseModel):
    """Versioned report envelope.

    verified is True only if every outcome, point and certificate in
    `results` re-verified; the CLI exits 0 only for verified reports.
    """

    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    command: str
    config: dict[str, Any]
    results: dict[str, Any]
    verified: bool
    csv_rows: list[dict[str, Any]] = Field(default_factory=list, exclude=True)
    """Flat per-place rows for the CSV projection."""

    def to_json(self) -> str:
        payload = self.model_dump(by_alias=True)
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        if not self.csv_rows:
            return ""
        fieldnames = list(self.csv_rows[0].keys())
        writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in self.csv_rows:
            writer.writerow(row)
        return buffer.getvalue()


def render(report: Report, output_format: str) -> str:
    """Serialize a report; `text` is rendered by the rich console instead."""
    if output_format == "csv":
        return report.to_csv()
    return report.to_json()


def write_report(report: Report, output_format: str, path: Optional[str]) -> Optional[str]:
    """Write the serialized report to `path` (UTF-8) or return it for stdout."""
    text = render(report, output_format)
    if path is None:
        return text
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return None


__all__ = [
    "SCHEMA_VERSION",
    "SELFTEST_MODULES",
    "RunConfig",
    "Report",
    "render",
    "write_report",
]
