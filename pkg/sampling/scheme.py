# sampling/scheme.py
"""
Simplified lot-size scheme, cited ISO 2859-1 reference plans, comparison and
plan recommendation.

The scheme is shipped as data (data/simplified_scheme.json) and checked on
load: every plan must be admissible at both ends of its lot range, and the
stored risk bounds must match the recomputed ones. The binning is a judgement
call, so for the default criterion it is never re-derived.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

import config
from sampling.criteria import (
    MID,
    AdmissibilityVerdict,
    TwoPointCriterion,
    admissible_binomial,
    admissible_extended,
)
from sampling.dist import OcModel, SamplingPlan
from sampling.errors import DomainError, NoSolutionError, SchemeValidationError
from sampling.optimize import RiskSummary, min_sample_binomial, min_sample_extended, risk_summary

logger = logging.getLogger(__name__)

RISK_TOLERANCE_PCT = 0.1
SCHEME_ACCEPTANCE_NUMBERS = (0, 1, 2)

Preference = Literal["min-sample", "min-producer-risk"]

NON_NORMATIVE_NOTE = (
    "heuristic pick from the simplified scheme; the choice of acceptance number "
    "weighs producer's risk against sample size and is not prescribed"
)
FULL_INSPECTION_NOTE = "no sampling plan meets the criterion for this lot size: inspect every item (n = N)"


# ────────────────────────────────────────────────────────────
# File schemas
# ────────────────────────────────────────────────────────────

class PlanCell(BaseModel):
    n: int = Field(ge=1)
    c: int = Field(ge=0)
    alpha_max_pct: float = Field(ge=0, le=100)
    beta_min_pct: float = Field(ge=0, le=100)


class SchemeRowRecord(BaseModel):
    lot_from: int = Field(ge=1)
    lot_to: Optional[int] = Field(default=None, ge=1)
    alpha_operational: bool
    plans: Dict[Literal["c0", "c1", "c2"], Optional[PlanCell]]

    @model_validator(mode="after")
    def _consistent(self) -> "SchemeRowRecord":
        if self.lot_to is not None and self.lot_to < self.lot_from:
            raise ValueError(f"lot range {self.lot_from}-{self.lot_to} is reversed")
        for key, cell in self.plans.items():
            if cell is not None and cell.c != int(key[1:]):
                raise ValueError(f"cell {key} holds a plan with c={cell.c}")
        return self


class SchemeFile(BaseModel):
    version: int
    description: str = ""
    criterion: TwoPointCriterion
    rows: List[SchemeRowRecord]

    @model_validator(mode="after")
    def _ascending(self) -> "SchemeFile":
        for prev, row in zip(self.rows, self.rows[1:]):
            if prev.lot_to is None or row.lot_from != prev.lot_to + 1:
                raise ValueError(f"row starting at {row.lot_from} does not follow {prev.lot_from}-{prev.lot_to}")
        return self


class ReferencePlanRecord(BaseModel):
    n: int = Field(ge=1)
    c: int = Field(ge=0)
    lot_from: Optional[int] = None
    lot_to: Optional[int] = None
    source: str


class ReferenceFile(BaseModel):
    version: int
    description: str = ""
    plans: List[ReferencePlanRecord]


# ────────────────────────────────────────────────────────────
# Types
# ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SchemeEntry:
    plan: SamplingPlan
    alpha_max: float        # largest producer's risk over the lot range
    beta_min: float         # smallest consumer's risk over the lot range


@dataclass(frozen=True)
class SchemeRow:
    lot_from: int
    lot_to: Optional[int]   # None: unbounded
    alpha_operational: bool
    entries: Tuple[Optional[SchemeEntry], ...]   # indexed by c = 0, 1, 2
    canonical: bool = True

    def covers(self, N: int) -> bool:
        return N >= self.lot_from and (self.lot_to is None or N <= self.lot_to)

    def plans(self) -> List[SamplingPlan]:
        return [e.plan for e in self.entries if e is not None]


@dataclass(frozen=True)
class ReferencePlan:
    plan: SamplingPlan
    lot_from: Optional[int]     # None: range not cited
    lot_to: Optional[int]
    source: str

    @property
    def range_known(self) -> bool:
        return self.lot_from is not None and self.lot_to is not None

    def covers(self, N: int) -> bool:
        return self.range_known and self.lot_from <= N <= self.lot_to


@dataclass(frozen=True)
class PlanRisk:
    plan: SamplingPlan
    risk: RiskSummary
    source: Literal["scheme", "computed", "iso"]


@dataclass(frozen=True)
class Comparison:
    N: int
    full_inspection: bool
    scheme: Tuple[PlanRisk, ...]
    iso: Optional[PlanRisk]     # None: no cited ISO range covers N


@dataclass(frozen=True)
class Recommendation:
    N: int
    plan: SamplingPlan
    full_inspection: bool
    preference: str
    note: str


# ────────────────────────────────────────────────────────────
# Loading and validation
# ────────────────────────────────────────────────────────────

def _endpoint_verdicts(plan: SamplingPlan, lot_from: int, lot_to: Optional[int], crit: TwoPointCriterion) -> List[AdmissibilityVerdict]:
    verdicts = []
    for N in (lot_from, lot_to):
        verdicts.append(admissible_binomial(plan, crit) if N is None else admissible_extended(N, plan, crit))
    return verdicts


def _entry(plan: SamplingPlan, verdicts: List[AdmissibilityVerdict]) -> SchemeEntry:
    return SchemeEntry(
        plan=plan,
        alpha_max=max(1.0 - v.oc_at_a for v in verdicts),
        beta_min=min(v.oc_at_b for v in verdicts),
    )


def _validated_row(record: SchemeRowRecord, crit: TwoPointCriterion) -> SchemeRow:
    entries: List[Optional[SchemeEntry]] = []
    for c in SCHEME_ACCEPTANCE_NUMBERS:
        cell = record.plans.get(f"c{c}")
        if cell is None:
            entries.append(None)
            continue
        plan = SamplingPlan(cell.n, cell.c)
        verdicts = _endpoint_verdicts(plan, record.lot_from, record.lot_to, crit)
        if not all(v.admissible for v in verdicts):
            raise SchemeValidationError(
                f"plan {plan} is not admissible at both ends of lots {record.lot_from}-{record.lot_to}",
                row=record,
            )
        entry = _entry(plan, verdicts)
        if abs(100 * entry.alpha_max - cell.alpha_max_pct) > RISK_TOLERANCE_PCT:
            raise SchemeValidationError(
                f"plan {plan}: stored alpha {cell.alpha_max_pct}% vs computed {100 * entry.alpha_max:.2f}%",
                row=record,
            )
        if abs(100 * entry.beta_min - cell.beta_min_pct) > RISK_TOLERANCE_PCT:
            raise SchemeValidationError(
                f"plan {plan}: stored beta {cell.beta_min_pct}% vs computed {100 * entry.beta_min:.2f}%",
                row=record,
            )
        entries.append(entry)
    return SchemeRow(record.lot_from, record.lot_to, record.alpha_operational, tuple(entries))


def _read_model(model, path: Path):
    try:
        return model.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise SchemeValidationError(f"cannot read {path}: {e}") from e
    except ValidationError as e:
        raise SchemeValidationError(f"{path}: {e.errors()[0]['msg']}") from e


@lru_cache(maxsize=None)
def load_scheme_file(path: Path) -> SchemeFile:
    return _read_model(SchemeFile, path)


@lru_cache(maxsize=None)
def _canonical_rows(path: Path) -> Tuple[SchemeRow, ...]:
    document = load_scheme_file(path)
    rows = tuple(_validated_row(record, document.criterion) for record in document.rows)
    logger.info("scheme %s (version %d): %d rows validated", path, document.version, len(rows))
    return rows


def _smallest_common_n(lot_from: int, lot_to: Optional[int], c: int, crit: TwoPointCriterion) -> Optional[int]:
    # admissibility at fixed N is monotone in n, so the larger endpoint minimum serves both
    try:
        n_from = min_sample_extended(lot_from, c, crit).n
        n_to = min_sample_binomial(c, crit).n if lot_to is None else min_sample_extended(lot_to, c, crit).n
    except NoSolutionError:
        return None
    n = max(n_from, n_to)
    return n if n < lot_from else None


@lru_cache(maxsize=32)
def _recomputed_rows(path: Path, crit: TwoPointCriterion) -> Tuple[SchemeRow, ...]:
    document = load_scheme_file(path)
    rows = []
    for record in document.rows:
        entries: List[Optional[SchemeEntry]] = []
        for c in SCHEME_ACCEPTANCE_NUMBERS:
            n = _smallest_common_n(record.lot_from, record.lot_to, c, crit)
            if n is None:
                entries.append(None)
                continue
            plan = SamplingPlan(n, c)
            verdicts = _endpoint_verdicts(plan, record.lot_from, record.lot_to, crit)
            entries.append(_entry(plan, verdicts) if all(v.admissible for v in verdicts) else None)
        operational = record.lot_from * crit.p_a >= 1.0 - 1e-12
        rows.append(SchemeRow(record.lot_from, record.lot_to, operational, tuple(entries), canonical=False))
    logger.info("scheme recomputed for %s: %d rows", crit, len(rows))
    return tuple(rows)


def simplified_scheme(crit: TwoPointCriterion = MID, path: Optional[Path] = None) -> List[SchemeRow]:
    """
    Rows of the simplified scheme. The stored rows are returned for the
    criterion the file was made for; any other criterion re-fills the same
    lot bins with the smallest plan admissible across each bin.
    """
    path = Path(path or config.SCHEME_FILE)
    if crit == load_scheme_file(path).criterion:
        return list(_canonical_rows(path))
    return list(_recomputed_rows(path, crit))


@lru_cache(maxsize=None)
def _reference_plans(path: Path) -> Tuple[ReferencePlan, ...]:
    document = _read_model(ReferenceFile, path)
    return tuple(
        ReferencePlan(SamplingPlan(p.n, p.c), p.lot_from, p.lot_to, p.source)
        for p in document.plans
    )


def iso_reference_plans(path: Optional[Path] = None) -> List[ReferencePlan]:
    return list(_reference_plans(Path(path or config.ISO_FILE)))


# ────────────────────────────────────────────────────────────
# Lookup, comparison, recommendation
# ────────────────────────────────────────────────────────────

def scheme_plans(N: int, crit: TwoPointCriterion = MID) -> Tuple[List[SamplingPlan], Literal["scheme", "computed", "full-inspection"]]:
    """
    Plans offered for lot size N. Lots below the first scheme row fall back
    to the computed zero-acceptance minimum, or to 100% inspection.
    """
    if N < 1:
        raise DomainError(f"lot size must be >= 1, got {N}")
    rows = simplified_scheme(crit)
    for row in rows:
        if row.covers(N):
            plans = row.plans()
            # a recomputed bin can come out empty
            return (plans, "scheme") if plans else ([], "full-inspection")
    try:
        return [min_sample_extended(N, 0, crit)], "computed"
    except NoSolutionError:
        return [], "full-inspection"


def compare(N: int, crit: TwoPointCriterion = MID) -> Comparison:
    plans, source = scheme_plans(N, crit)
    model = OcModel.hypergeometric_extended(N)
    scheme = tuple(PlanRisk(plan, risk_summary(plan, model, crit), source) for plan in plans)
    iso = None
    for ref in iso_reference_plans():
        if ref.covers(N) and ref.plan.n <= N:
            iso = PlanRisk(ref.plan, risk_summary(ref.plan, model, crit), "iso")
            break
    if iso is None:
        logger.debug("N=%d: no cited ISO 2859-1 lot range covers this lot", N)
    return Comparison(N, source == "full-inspection", scheme, iso)


def recommend_plan(N: int, preference: Preference = "min-sample", crit: TwoPointCriterion = MID) -> Recommendation:
    if preference not in ("min-sample", "min-producer-risk"):
        raise DomainError(f"unknown preference {preference!r}")
    plans, source = scheme_plans(N, crit)
    if not plans:
        return Recommendation(N, SamplingPlan(N, 0), True, preference, FULL_INSPECTION_NOTE)
    if preference == "min-sample":
        plan = min(plans, key=lambda p: p.n)
    else:
        plan = max(plans, key=lambda p: p.c)
    return Recommendation(N, plan, False, preference, NON_NORMATIVE_NOTE)
