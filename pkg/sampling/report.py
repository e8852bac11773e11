# sampling/report.py
"""
Output records for the command line.

Every record is a pydantic model whose field names are the csv header and the
json keys. csv writes None as an empty cell; reading maps "", "inf" and
"none" back to None, so csv and json output re-parse into the same records.
"""
from __future__ import annotations

import csv
import io
import json
from typing import ClassVar, List, Literal, Optional, Sequence, TextIO, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, field_validator

from sampling.criteria import AdmissibilityVerdict
from sampling.optimize import LotInterval, RiskSummary, TableRow
from sampling.oracle import BoundaryAudit, SimulationResult
from sampling.scheme import Comparison, PlanRisk, Recommendation, SchemeRow

OutputFormat = Literal["table", "csv", "json"]
FORMATS: Tuple[str, ...] = ("table", "csv", "json")

R = TypeVar("R", bound="Record")

TABLE_DECIMALS = 6          # risks in interval tables; keeps csv output byte-stable


class Record(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    # probability fields shown as "fraction (percent)" in table output
    percent_fields: ClassVar[Tuple[str, ...]] = ()

    @field_validator("*", mode="before")
    @classmethod
    def _empty_is_none(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("", "inf", "none", "null"):
            return None
        return value


# ────────────────────────────────────────────────────────────
# Records
# ────────────────────────────────────────────────────────────

class OcPointRecord(Record):
    p: float
    oc: float
    kind: Literal["curve", "grid"]

    percent_fields: ClassVar[Tuple[str, ...]] = ("p", "oc")


class VerdictRecord(Record):
    n: int
    c: int
    N: Optional[int]
    model: str
    admissible: bool
    oc_at_a: float
    oc_at_b: float
    margin_a: float
    margin_b: float
    binding_point: str

    percent_fields: ClassVar[Tuple[str, ...]] = ("oc_at_a", "oc_at_b", "margin_a", "margin_b")

    @classmethod
    def from_verdict(cls, n: int, c: int, N: Optional[int], model: str, v: AdmissibilityVerdict) -> "VerdictRecord":
        return cls(
            n=n, c=c, N=N, model=model, admissible=v.admissible,
            oc_at_a=v.oc_at_a, oc_at_b=v.oc_at_b, margin_a=v.margin_a, margin_b=v.margin_b,
            binding_point=v.binding_point.value,
        )


class PlanRecord(Record):
    N: Optional[int]
    n: int
    c: int
    model: str


class IntervalRecord(Record):
    n: int
    c: int
    N_a: Optional[int]
    N_b: Optional[int]
    empty: bool

    @classmethod
    def from_interval(cls, n: int, c: int, interval: Optional[LotInterval]) -> "IntervalRecord":
        if interval is None:
            return cls(n=n, c=c, N_a=None, N_b=None, empty=True)
        return cls(n=n, c=c, N_a=interval.N_a, N_b=interval.N_b, empty=False)


class TableRecord(Record):
    N_from: int
    N_to: Optional[int]
    n: int
    c: int
    alpha_from: float
    alpha_to: float
    beta_from: float
    beta_to: float

    percent_fields: ClassVar[Tuple[str, ...]] = ("alpha_from", "alpha_to", "beta_from", "beta_to")

    @classmethod
    def from_row(cls, row: TableRow) -> "TableRecord":
        i = row.interval
        return cls(
            N_from=i.N_a, N_to=i.N_b, n=i.n, c=i.c,
            alpha_from=round(row.risk_from.alpha, TABLE_DECIMALS),
            alpha_to=round(row.risk_to.alpha, TABLE_DECIMALS),
            beta_from=round(row.risk_from.beta, TABLE_DECIMALS),
            beta_to=round(row.risk_to.beta, TABLE_DECIMALS),
        )


class SchemeRecord(Record):
    lot_from: int
    lot_to: Optional[int]
    alpha_operational: bool
    n: int
    c: int
    alpha_max: float
    beta_min: float
    canonical: bool

    percent_fields: ClassVar[Tuple[str, ...]] = ("alpha_max", "beta_min")

    @classmethod
    def from_row(cls, row: SchemeRow) -> List["SchemeRecord"]:
        return [
            cls(
                lot_from=row.lot_from, lot_to=row.lot_to, alpha_operational=row.alpha_operational,
                n=e.plan.n, c=e.plan.c, alpha_max=e.alpha_max, beta_min=e.beta_min,
                canonical=row.canonical,
            )
            for e in row.entries
            if e is not None
        ]


class ComparisonRecord(Record):
    N: int
    source: Literal["scheme", "computed", "iso", "full-inspection"]
    n: int
    c: int
    alpha: Optional[float]
    beta: Optional[float]
    q_a: Optional[float]
    q_b: Optional[float]
    alpha_operational: Optional[bool]

    percent_fields: ClassVar[Tuple[str, ...]] = ("alpha", "beta", "q_a", "q_b")

    @classmethod
    def _from_plan_risk(cls, N: int, pr: PlanRisk) -> "ComparisonRecord":
        r: RiskSummary = pr.risk
        return cls(
            N=N, source=pr.source, n=pr.plan.n, c=pr.plan.c,
            alpha=r.alpha, beta=r.beta, q_a=r.q_a, q_b=r.q_b, alpha_operational=r.alpha_operational,
        )

    @classmethod
    def from_comparison(cls, cmp: Comparison) -> List["ComparisonRecord"]:
        if cmp.full_inspection:
            records = [cls(N=cmp.N, source="full-inspection", n=cmp.N, c=0,
                           alpha=None, beta=None, q_a=None, q_b=None, alpha_operational=None)]
        else:
            records = [cls._from_plan_risk(cmp.N, pr) for pr in cmp.scheme]
        if cmp.iso is not None:
            records.append(cls._from_plan_risk(cmp.N, cmp.iso))
        return records


class RecommendationRecord(Record):
    N: int
    n: int
    c: int
    full_inspection: bool
    preference: str
    note: str

    @classmethod
    def from_recommendation(cls, rec: Recommendation) -> "RecommendationRecord":
        return cls(N=rec.N, n=rec.plan.n, c=rec.plan.c, full_inspection=rec.full_inspection,
                   preference=rec.preference, note=rec.note)


class SimulationRecord(Record):
    M: int
    N: int
    n: int
    c: int
    trials: int
    acceptances: int
    estimate: float
    std_error: float
    seed: int
    shards: int
    algorithm: str

    percent_fields: ClassVar[Tuple[str, ...]] = ("estimate",)

    @classmethod
    def from_result(cls, M: int, N: int, n: int, c: int, res: SimulationResult) -> "SimulationRecord":
        return cls(M=M, N=N, n=n, c=c, trials=res.trials, acceptances=res.acceptances,
                   estimate=res.estimate, std_error=res.std_error, seed=res.seed,
                   shards=res.shards, algorithm=res.algorithm)


class AuditRecord(Record):
    N: int
    n: int
    c: int
    oc_at_a: str
    oc_at_b: str
    admissible_highprec: bool
    admissible_float: bool
    agrees: bool
    dps: int

    @classmethod
    def from_audit(cls, a: BoundaryAudit) -> "AuditRecord":
        return cls(N=a.N, n=a.plan.n, c=a.plan.c, oc_at_a=a.oc_at_a, oc_at_b=a.oc_at_b,
                   admissible_highprec=a.admissible_highprec, admissible_float=a.admissible_float,
                   agrees=a.agrees, dps=a.dps)


# ────────────────────────────────────────────────────────────
# Writing and reading
# ────────────────────────────────────────────────────────────

def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _table_cell(record: Record, name: str, value) -> str:
    if value is None:
        return "inf" if name in ("N_to", "N_b", "lot_to") else "-"
    if name in record.percent_fields and isinstance(value, float):
        return f"{value:.6g} ({100 * value:.2f}%)"
    return _csv_cell(value)


def write_records(records: Sequence[Record], fmt: OutputFormat, out: TextIO) -> None:
    if not records:
        return
    names = list(type(records[0]).model_fields)
    if fmt == "json":
        for r in records:
            out.write(r.model_dump_json() + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(names)
        for r in records:
            writer.writerow([_csv_cell(getattr(r, k)) for k in names])
    else:
        rows = [names] + [[_table_cell(r, k, getattr(r, k)) for k in names] for r in records]
        widths = [max(len(row[i]) for row in rows) for i in range(len(names))]
        for row in rows:
            out.write("  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip() + "\n")


def read_records(model: Type[R], text: str, fmt: Literal["csv", "json"]) -> List[R]:
    """Parse csv or json-lines output back into records."""
    if fmt == "json":
        return [model.model_validate(json.loads(line)) for line in text.splitlines() if line.strip()]
    return [model.model_validate(row) for row in csv.DictReader(io.StringIO(text))]

