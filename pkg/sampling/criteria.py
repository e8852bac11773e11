# sampling/criteria.py
"""
Two-point admissibility of a sampling plan.

A plan is admissible when its OC passes strictly below and left of both
points (p_a, P_a) and (p_b, P_b):

    Pac(p_a) < P_a      AQL point: producer's risk α = 1 − Pac(p_a) > 1 − P_a
    Pac(p_b) < P_b      LQ point:  consumer's risk β = Pac(p_b) < P_b

Comparisons are raw floating point with no epsilon. For finite lots the points
are evaluated either with the gamma-extended hypergeometric OC at M = p·N, or
on the grid of operationally meaningful levels {0, 1/N, ..., 1} at the first
level not below p_i.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from sampling.dist import (
    SamplingPlan,
    binomial_oc,
    hypergeom_oc_exact,
    hypergeom_oc_extended,
    poisson_oc,
)
from sampling.errors import DomainError

logger = logging.getLogger(__name__)


# ────────────────────────────────────────────────────────────
# Criterion
# ────────────────────────────────────────────────────────────

class TwoPointCriterion(BaseModel):
    """AQL point (p_a, P_a) and LQ point (p_b, P_b)."""
    model_config = ConfigDict(frozen=True)

    p_a: float = Field(0.01, gt=0, lt=1)
    P_a: float = Field(0.95, gt=0, lt=1)
    p_b: float = Field(0.07, gt=0, lt=1)
    P_b: float = Field(0.05, gt=0, lt=1)

    @model_validator(mode="after")
    def _ordered(self) -> "TwoPointCriterion":
        if not self.p_a < self.p_b:
            raise ValueError(f"AQL p_a={self.p_a} must be below LQ p_b={self.p_b}")
        if not self.P_b < self.P_a:
            raise ValueError(f"P_b={self.P_b} must be below P_a={self.P_a}")
        return self

    @classmethod
    def build(cls, **values) -> "TwoPointCriterion":
        """Construct, reporting invalid values as DomainError."""
        try:
            return cls(**values)
        except ValidationError as e:
            raise DomainError(f"invalid criterion: {e.errors()[0]['msg']}") from e


MID = TwoPointCriterion()

GRID_TOLERANCE = Fraction(1, 10**9)


def _exact_fraction(p: float) -> Fraction:
    # shortest decimal that round-trips, so 0.07 is 7/100
    return Fraction(repr(float(p)))


# ────────────────────────────────────────────────────────────
# Quality levels of a finite lot
# ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class QualityLevelGrid:
    """The levels {0, 1/N, ..., 1} a lot of N items can actually have."""
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"lot size must be >= 1, got {self.N}")

    def _count(self, p: float) -> Fraction:
        M = _exact_fraction(p) * self.N
        nearest = round(M)
        # p = k/N typed as a float lands within rounding of the integer k
        return Fraction(nearest) if abs(M - nearest) <= GRID_TOLERANCE else M

    def contains(self, p: float) -> bool:
        if not 0.0 <= p <= 1.0:
            return False
        return self._count(p).denominator == 1

    def levels(self) -> np.ndarray:
        return np.arange(self.N + 1, dtype=np.float64) / self.N

    def first_level_at_or_above(self, p: float) -> int:
        """Defective count M of the smallest level M/N >= p."""
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"quality level must lie in [0, 1], got {p}")
        return math.ceil(self._count(p))


# ────────────────────────────────────────────────────────────
# Verdicts
# ────────────────────────────────────────────────────────────

class BindingPoint(str, enum.Enum):
    AQL = "AQL"
    LQ = "LQ"
    BOTH = "both"


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    oc_at_a: float
    oc_at_b: float
    binding_point: BindingPoint
    criterion: TwoPointCriterion = MID

    @property
    def margin_a(self) -> float:
        return self.criterion.P_a - self.oc_at_a

    @property
    def margin_b(self) -> float:
        return self.criterion.P_b - self.oc_at_b


def _verdict(oc_a: float, oc_b: float, crit: TwoPointCriterion) -> AdmissibilityVerdict:
    ok_a = oc_a < crit.P_a
    ok_b = oc_b < crit.P_b
    if ok_a and ok_b:
        margin_a, margin_b = crit.P_a - oc_a, crit.P_b - oc_b
        if margin_a == margin_b:
            binding = BindingPoint.BOTH
        else:
            binding = BindingPoint.AQL if margin_a < margin_b else BindingPoint.LQ
    elif not ok_a and not ok_b:
        binding = BindingPoint.BOTH
    else:
        binding = BindingPoint.LQ if ok_a else BindingPoint.AQL
    return AdmissibilityVerdict(ok_a and ok_b, oc_a, oc_b, binding, crit)


def admissible_binomial(plan: SamplingPlan, crit: TwoPointCriterion = MID) -> AdmissibilityVerdict:
    return _verdict(binomial_oc(crit.p_a, plan), binomial_oc(crit.p_b, plan), crit)


def admissible_poisson(plan: SamplingPlan, crit: TwoPointCriterion = MID) -> AdmissibilityVerdict:
    """Poisson approximation of the binomial verdict; cross-checks only."""
    return _verdict(poisson_oc(crit.p_a, plan), poisson_oc(crit.p_b, plan), crit)


def _check_fits(N: int, plan: SamplingPlan) -> None:
    if N < 1:
        raise DomainError(f"lot size must be >= 1, got {N}")
    if plan.n > N:
        raise DomainError(f"sample size {plan.n} exceeds lot size {N}")


def admissible_extended(N: int, plan: SamplingPlan, crit: TwoPointCriterion = MID) -> AdmissibilityVerdict:
    """Both points evaluated at real M_i = p_i·N with the gamma-extended OC."""
    _check_fits(N, plan)
    return _verdict(
        hypergeom_oc_extended(crit.p_a * N, N, plan),
        hypergeom_oc_extended(crit.p_b * N, N, plan),
        crit,
    )


def admissible_discrete(N: int, plan: SamplingPlan, crit: TwoPointCriterion = MID) -> AdmissibilityVerdict:
    """
    p >= p_i  ⇒  Pac(p) < P_i on the lot's grid of levels.

    Only the first grid level at or above each p_i needs checking: the exact
    OC is non-increasing in M, so higher levels cannot accept more often.
    """
    _check_fits(N, plan)
    grid = QualityLevelGrid(N)
    M_a = grid.first_level_at_or_above(crit.p_a)
    M_b = grid.first_level_at_or_above(crit.p_b)
    logger.debug("N=%d: discrete levels M_a=%d M_b=%d", N, M_a, M_b)
    return _verdict(
        hypergeom_oc_exact(M_a, N, plan),
        hypergeom_oc_exact(M_b, N, plan),
        crit,
    )


def lot_size_lower_bound(c: int, crit: TwoPointCriterion = MID) -> int:
    """
    Smallest lot size for which acceptance number c can be admissible.

    A lot with at most c defectives is always accepted, so c/N must stay
    below p_a: N > c/p_a, i.e. N > 100c for p_a = 1%.
    """
    if c < 0:
        raise DomainError(f"acceptance number must be >= 0, got {c}")
    return math.floor(c / _exact_fraction(crit.p_a)) + 1
