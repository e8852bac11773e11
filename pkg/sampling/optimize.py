# sampling/optimize.py
"""
Sample-size minimisation, admissible lot-size intervals, risks and risk
quality levels.

Admissibility is anti-monotone in n at fixed (N, c): the OC drops pointwise as
the sample grows, so once a plan passes every larger sample passes too. The
minimisers bisect over n and then certify the answer by checking n − 1.

In N the two conditions move one way each. The LQ condition gets harder as
the lot grows (the binomial limit is the worst case); for c >= 1 the AQL
condition gets easier, so it cuts the admissible lots from below. Each
condition is located separately by galloping plus bisection, and the interval
is their intersection.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Literal, Optional, Tuple

from scipy import optimize

from config import LOT_CEILING, N_CEILING
from sampling.criteria import (
    MID,
    AdmissibilityVerdict,
    TwoPointCriterion,
    admissible_binomial,
    admissible_discrete,
    admissible_extended,
    admissible_poisson,
    lot_size_lower_bound,
)
from sampling.dist import OcKind, OcModel, SamplingPlan, hypergeom_oc_extended
from sampling.errors import (
    DomainError,
    NoRootError,
    NoSolutionError,
    NumericalError,
    StructuralInadmissibilityError,
)

logger = logging.getLogger(__name__)

ROOT_TOLERANCE = 1e-10      # |OC(q) − target| accepted for a quality root
ROOT_XTOL = 1e-15
ROOT_MAXITER = 200

LotPredicate = Callable[[int, SamplingPlan, TwoPointCriterion], AdmissibilityVerdict]


# ────────────────────────────────────────────────────────────
# Result types
# ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RiskSummary:
    alpha: float                    # producer's risk 1 − OC(p_a)
    beta: float                     # consumer's risk OC(p_b)
    q_a: Optional[float]            # OC(q_a) = P_a, None when no root
    q_b: Optional[float]            # OC(q_b) = P_b
    alpha_operational: bool         # False when p_a·N < 1 defective


@dataclass(frozen=True)
class LotInterval:
    """Lot sizes N_a <= N <= N_b for plan (n, c); N_b None means unbounded."""
    n: int
    c: int
    N_a: int
    N_b: Optional[int]

    @property
    def plan(self) -> SamplingPlan:
        return SamplingPlan(self.n, self.c)

    @property
    def unbounded(self) -> bool:
        return self.N_b is None

    def __contains__(self, N: int) -> bool:
        return N >= self.N_a and (self.N_b is None or N <= self.N_b)


@dataclass(frozen=True)
class TableRow:
    interval: LotInterval
    risk_from: RiskSummary          # at interval.N_a
    risk_to: RiskSummary            # at interval.N_b, binomial when unbounded


# ────────────────────────────────────────────────────────────
# Minimal sample sizes
# ────────────────────────────────────────────────────────────

def _bisect_smallest(is_ok: Callable[[int], bool], lo: int, hi: int) -> Optional[int]:
    """Smallest n in [lo, hi] with is_ok(n), for an is_ok monotone in n."""
    if lo > hi or not is_ok(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if is_ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _certified_minimum(is_ok: Callable[[int], bool], lo: int, hi: int, label: str) -> Optional[int]:
    n = _bisect_smallest(is_ok, lo, hi)
    if n is not None and n > lo and is_ok(n - 1):
        raise NumericalError(f"{label}: n={n} is not minimal, n={n - 1} also admissible")
    logger.debug("%s: minimum n=%s in [%d, %d]", label, n, lo, hi)
    return n


def _min_sample_infinite(
    predicate: Callable[[SamplingPlan, TwoPointCriterion], AdmissibilityVerdict],
    c: int,
    crit: TwoPointCriterion,
    ceiling: Optional[int],
    label: str,
) -> SamplingPlan:
    if c < 0:
        raise DomainError(f"acceptance number must be >= 0, got {c}")
    ceiling = N_CEILING if ceiling is None else ceiling
    n = _certified_minimum(
        lambda m: predicate(SamplingPlan(m, c), crit).admissible,
        max(c, 1), ceiling, f"{label} c={c}",
    )
    if n is None:
        raise NoSolutionError(f"no admissible sample size up to {ceiling} for c={c}", c=c)
    return SamplingPlan(n, c)


def min_sample_binomial(c: int, crit: TwoPointCriterion = MID, ceiling: Optional[int] = None) -> SamplingPlan:
    return _min_sample_infinite(admissible_binomial, c, crit, ceiling, "binomial")


def min_sample_poisson(c: int, crit: TwoPointCriterion = MID, ceiling: Optional[int] = None) -> SamplingPlan:
    return _min_sample_infinite(admissible_poisson, c, crit, ceiling, "poisson")


def _min_sample_in_lot(predicate: LotPredicate, N: int, c: int, crit: TwoPointCriterion, label: str) -> Optional[int]:
    """Smallest admissible n <= N, n = N (100% inspection) included."""
    return _certified_minimum(
        lambda m: predicate(N, SamplingPlan(m, c), crit).admissible,
        max(c, 1), N, f"{label} N={N} c={c}",
    )


def _min_sample_finite(predicate: LotPredicate, N: int, c: int, crit: TwoPointCriterion, label: str) -> SamplingPlan:
    if N < 1:
        raise DomainError(f"lot size must be >= 1, got {N}")
    if c < 0:
        raise DomainError(f"acceptance number must be >= 0, got {c}")
    bound = lot_size_lower_bound(c, crit)
    if N < bound:
        raise StructuralInadmissibilityError(
            f"acceptance number c={c} needs lots of at least N={bound}, got N={N}",
            N=N, c=c, bound=bound,
        )
    n = _min_sample_in_lot(predicate, N, c, crit, label)
    if n is None:
        raise NoSolutionError(f"no admissible sample size for N={N}, c={c}", N=N, c=c)
    if n == N:
        raise NoSolutionError(f"N={N}, c={c}: only 100% inspection (n=N) is admissible", N=N, c=c)
    return SamplingPlan(n, c)


def min_sample_extended(N: int, c: int, crit: TwoPointCriterion = MID) -> SamplingPlan:
    return _min_sample_finite(admissible_extended, N, c, crit, "extended")


def min_sample_discrete(N: int, c: int, crit: TwoPointCriterion = MID) -> SamplingPlan:
    return _min_sample_finite(admissible_discrete, N, c, crit, "discrete")


def minimum_sample_curve(
    c: int,
    lot_sizes: Iterable[int],
    crit: TwoPointCriterion = MID,
    criterion: Literal["extended", "discrete"] = "extended",
) -> List[Tuple[int, Optional[int]]]:
    """(N, smallest admissible n) pairs for plotting; n = N is 100% inspection."""
    predicate = admissible_extended if criterion == "extended" else admissible_discrete
    bound = lot_size_lower_bound(c, crit)
    curve = []
    for N in lot_sizes:
        n = None if N < bound else _min_sample_in_lot(predicate, N, c, crit, criterion)
        curve.append((N, n))
    return curve


# ────────────────────────────────────────────────────────────
# Lot-size intervals
# ────────────────────────────────────────────────────────────

def _flip_point(holds: Callable[[int], bool], start: int, ceiling: int) -> Optional[int]:
    """First N > start where holds(N) != holds(start), assuming a single flip."""
    first = holds(start)
    lo, step = start, 1
    while True:
        probe = min(start + step, ceiling)
        if holds(probe) != first:
            hi = probe
            break
        if probe >= ceiling:
            return None
        lo, step = probe, step * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid) == first:
            lo = mid
        else:
            hi = mid
    return hi


def lot_interval(
    plan: SamplingPlan,
    crit: TwoPointCriterion = MID,
    ceiling: Optional[int] = None,
) -> Optional[LotInterval]:
    """Admissible lot sizes [N_a, N_b] for a plan, or None when there are none."""
    ceiling = LOT_CEILING if ceiling is None else ceiling
    start = max(plan.n, lot_size_lower_bound(plan.c, crit))
    limit = admissible_binomial(plan, crit)

    def holds_a(N: int) -> bool:
        return hypergeom_oc_extended(crit.p_a * N, N, plan) < crit.P_a

    def holds_b(N: int) -> bool:
        return hypergeom_oc_extended(crit.p_b * N, N, plan) < crit.P_b

    lower, upper = start, None
    for name, holds, in_limit in (
        ("AQL", holds_a, limit.oc_at_a < crit.P_a),
        ("LQ", holds_b, limit.oc_at_b < crit.P_b),
    ):
        at_start = holds(start)
        if at_start and in_limit:
            continue
        if not at_start and not in_limit:
            logger.debug("plan %s: %s condition fails for every lot size", plan, name)
            return None
        flip = _flip_point(holds, start, ceiling)
        if flip is None:
            raise NumericalError(f"plan {plan}: {name} condition never reaches its binomial limit below N={ceiling}")
        if at_start:
            upper = flip - 1 if upper is None else min(upper, flip - 1)
        else:
            lower = max(lower, flip)

    if upper is not None and lower > upper:
        return None

    def admissible(N: int) -> bool:
        return admissible_extended(N, plan, crit).admissible

    if not admissible(lower) or (lower > start and admissible(lower - 1)):
        raise NumericalError(f"plan {plan}: lower lot bound N_a={lower} failed its certificate")
    if upper is not None and (not admissible(upper) or admissible(upper + 1)):
        raise NumericalError(f"plan {plan}: upper lot bound N_b={upper} failed its certificate")
    if upper is None and not limit.admissible:
        raise NumericalError(f"plan {plan}: unbounded interval but inadmissible in the binomial limit")
    return LotInterval(plan.n, plan.c, lower, upper)


# ────────────────────────────────────────────────────────────
# Risks and risk quality levels
# ────────────────────────────────────────────────────────────

def _continuous(model: OcModel) -> OcModel:
    # finite lots are evaluated with the gamma-extended OC at M = p·N
    if model.kind is OcKind.HYPERGEOMETRIC_EXACT:
        return OcModel.hypergeometric_extended(model.N)
    return model


def quality_at_probability(plan: SamplingPlan, target: float, model: OcModel) -> float:
    """Quality level q with OC(q) = target, by bisection on [0, 1]."""
    model = _continuous(model)
    if model.finite and plan.n > model.N:
        raise DomainError(f"sample size {plan.n} exceeds lot size {model.N}")
    oc_0, oc_1 = model.oc(0.0, plan), model.oc(1.0, plan)
    if not (0.0 < target < 1.0) or not (oc_1 < target < oc_0):
        raise NoRootError(f"plan {plan}: target {target} not inside OC range ({oc_1}, {oc_0})")

    def gap(q: float) -> float:
        return model.oc(q, plan) - target

    q = optimize.bisect(gap, 0.0, 1.0, xtol=ROOT_XTOL, maxiter=ROOT_MAXITER)
    if abs(gap(q)) > ROOT_TOLERANCE:
        raise NumericalError(f"plan {plan}: quality root q={q} misses target {target} by {gap(q):.3e}")
    return float(q)


def _root_or_none(plan: SamplingPlan, target: float, model: OcModel) -> Optional[float]:
    try:
        return quality_at_probability(plan, target, model)
    except NoRootError as e:
        logger.debug("no quality root: %s", e)
        return None


def risk_summary(plan: SamplingPlan, model: OcModel, crit: TwoPointCriterion = MID) -> RiskSummary:
    model = _continuous(model)
    if model.finite and plan.n > model.N:
        raise DomainError(f"sample size {plan.n} exceeds lot size {model.N}")
    operational = True
    if model.finite:
        operational = model.N * crit.p_a >= 1.0 - 1e-12
    return RiskSummary(
        alpha=1.0 - model.oc(crit.p_a, plan),
        beta=model.oc(crit.p_b, plan),
        q_a=_root_or_none(plan, crit.P_a, model),
        q_b=_root_or_none(plan, crit.P_b, model),
        alpha_operational=operational,
    )


def _risk_at(plan: SamplingPlan, N: Optional[int], crit: TwoPointCriterion) -> RiskSummary:
    model = OcModel.binomial() if N is None else OcModel.hypergeometric_extended(N)
    return risk_summary(plan, model, crit)


# ────────────────────────────────────────────────────────────
# Tables
# ────────────────────────────────────────────────────────────

def _zero_acceptance_ranges(crit: TwoPointCriterion, n_max: int) -> List[LotInterval]:
    """
    Lot ranges sharing the same minimal zero-acceptance sample size.

    For c = 0 only the LQ side bounds the lots of a plan, so n is minimal
    exactly on (N_b(n−1), N_b(n)]. Plans admissible only at N = n are full
    inspection and open no row.
    """
    ranges = []
    previous_upper = 0
    for n in range(1, n_max + 1):
        interval = lot_interval(SamplingPlan(n, 0), crit)
        if interval is None:
            continue
        if interval.N_b is not None and interval.N_b <= n:
            previous_upper = interval.N_b
            continue
        N_from = max(interval.N_a, previous_upper + 1)
        if interval.N_b is not None and N_from > interval.N_b:
            continue
        ranges.append(LotInterval(n, 0, N_from, interval.N_b))
        if interval.N_b is None:
            break
        previous_upper = interval.N_b
    return ranges


def _first_intervals(c: int, crit: TwoPointCriterion, n_max: int) -> List[LotInterval]:
    intervals = []
    for n in range(max(c, 1), n_max + 1):
        interval = lot_interval(SamplingPlan(n, c), crit)
        if interval is not None:
            intervals.append(interval)
        elif intervals:
            logger.debug("c=%d: interval empty again at n=%d", c, n)
    return intervals


def interval_table(
    c: int,
    crit: TwoPointCriterion = MID,
    n_max: Optional[int] = None,
    workers: int = 1,
) -> List[TableRow]:
    """
    Rows (lot range, risk at the small end, risk at the large end).

    c = 0 gives the ranges of N sharing one minimal n; c >= 1 gives the
    admissible interval [N_a, N_b] of every n from the smallest feasible one.
    """
    if c < 0:
        raise DomainError(f"acceptance number must be >= 0, got {c}")
    if n_max is None:
        n_max = 2 * min_sample_binomial(c, crit).n
    intervals = _zero_acceptance_ranges(crit, n_max) if c == 0 else _first_intervals(c, crit, n_max)

    def build(interval: LotInterval) -> TableRow:
        plan = interval.plan
        return TableRow(interval, _risk_at(plan, interval.N_a, crit), _risk_at(plan, interval.N_b, crit))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(build, intervals))
    return [build(interval) for interval in intervals]
