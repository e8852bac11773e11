# sampling/oracle.py
"""
Independent checks on the floating-point OC kernels:

    hypergeom_oc_rational   exact big-integer sum, returned in lowest terms
    hypergeom_oc_highprec   gamma-extended sum at arbitrary precision (mpmath)
    audit_boundary          both admissibility inequalities in high precision
    monte_carlo_oc          draws without replacement from a simulated lot
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import mpmath
import numpy as np

import config
from sampling.criteria import MID, AdmissibilityVerdict, TwoPointCriterion, admissible_extended
from sampling.dist import SamplingPlan
from sampling.errors import DomainError, OracleSizeError

logger = logging.getLogger(__name__)

RNG_ALGORITHM = "PCG64+SeedSequence/urn-fisher-yates"
AUDIT_DPS = 40


# ────────────────────────────────────────────────────────────
# Types
# ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ExactProbability:
    """A probability as a reduced fraction numerator/denominator."""
    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0 or self.numerator < 0 or self.numerator > self.denominator:
            raise DomainError(f"{self.numerator}/{self.denominator} is not a probability")
        if math.gcd(self.numerator, self.denominator) != 1:
            raise DomainError(f"{self.numerator}/{self.denominator} is not in lowest terms")

    @classmethod
    def from_fraction(cls, value: Fraction) -> "ExactProbability":
        return cls(value.numerator, value.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class SimulationResult:
    trials: int
    acceptances: int
    estimate: float
    std_error: float
    seed: int
    algorithm: str = RNG_ALGORITHM
    shards: int = 1


@dataclass(frozen=True)
class BoundaryAudit:
    N: int
    plan: SamplingPlan
    oc_at_a: str                # high-precision values, as decimal strings
    oc_at_b: str
    admissible_highprec: bool
    admissible_float: bool
    dps: int

    @property
    def agrees(self) -> bool:
        return self.admissible_highprec == self.admissible_float


def _check_lot(M: float, N: int, plan: SamplingPlan) -> None:
    if N < 1:
        raise DomainError(f"lot size must be >= 1, got {N}")
    if M < 0 or M > N:
        raise DomainError(f"defective count must lie in [0, N={N}], got {M}")
    if plan.n > N:
        raise DomainError(f"sample size {plan.n} exceeds lot size {N}")


# ────────────────────────────────────────────────────────────
# Exact and high-precision sums
# ────────────────────────────────────────────────────────────

def hypergeom_oc_rational(M: int, N: int, plan: SamplingPlan, max_N: Optional[int] = None) -> ExactProbability:
    """Σ_{k≤c} C(M,k) C(N−M,n−k) / C(N,n) in exact integer arithmetic."""
    max_N = config.ORACLE_MAX_N if max_N is None else max_N
    if int(M) != M:
        raise DomainError(f"exact oracle needs an integer defective count, got {M}")
    M = int(M)
    _check_lot(M, N, plan)
    if N > max_N:
        raise OracleSizeError(f"lot size {N} above the rational oracle limit {max_N}")
    accepted = sum(math.comb(M, k) * math.comb(N - M, plan.n - k) for k in range(plan.c + 1))
    return ExactProbability.from_fraction(Fraction(accepted, math.comb(N, plan.n)))


def _binomial_mp(x, y):
    # C(x, y) = Γ(x+1) / (Γ(y+1) Γ(x−y+1)); rgamma is 0 at the poles
    return mpmath.gamma(x + 1) * mpmath.rgamma(y + 1) * mpmath.rgamma(x - y + 1)


def hypergeom_oc_highprec(M: float, N: int, plan: SamplingPlan, dps: int = AUDIT_DPS) -> mpmath.mpf:
    """Gamma-extended cumulative sum at `dps` decimal digits, unclamped for M > c."""
    _check_lot(float(M), N, plan)
    with mpmath.workdps(dps):
        M_mp = mpmath.mpf(M)
        if M_mp <= plan.c or plan.c >= plan.n:
            return mpmath.mpf(1)
        total = mpmath.fsum(
            _binomial_mp(M_mp, k) * _binomial_mp(N - M_mp, plan.n - k)
            for k in range(plan.c + 1)
        )
        return total / mpmath.binomial(N, plan.n)


def audit_boundary(N: int, plan: SamplingPlan, crit: TwoPointCriterion = MID, dps: int = AUDIT_DPS) -> BoundaryAudit:
    """Recheck OC(p_a) < P_a and OC(p_b) < P_b at M_i = p_i·N in high precision."""
    verdict: AdmissibilityVerdict = admissible_extended(N, plan, crit)
    with mpmath.workdps(dps):
        # the criterion's decimals are taken as written, not as their binary floats
        p_a, p_b = mpmath.mpf(repr(crit.p_a)), mpmath.mpf(repr(crit.p_b))
        oc_a = hypergeom_oc_highprec(p_a * N, N, plan, dps)
        oc_b = hypergeom_oc_highprec(p_b * N, N, plan, dps)
        admissible = bool(oc_a < mpmath.mpf(repr(crit.P_a)) and oc_b < mpmath.mpf(repr(crit.P_b)))
        audit = BoundaryAudit(
            N=N,
            plan=plan,
            oc_at_a=mpmath.nstr(oc_a, 25),
            oc_at_b=mpmath.nstr(oc_b, 25),
            admissible_highprec=admissible,
            admissible_float=verdict.admissible,
            dps=dps,
        )
    if not audit.agrees:
        logger.warning("N=%d plan %s: float verdict %s disagrees with high precision", N, plan, verdict.admissible)
    return audit


# ────────────────────────────────────────────────────────────
# Monte Carlo
# ────────────────────────────────────────────────────────────

def _simulate_shard(M: int, N: int, plan: SamplingPlan, trials: int, seed_seq: np.random.SeedSequence) -> int:
    """
    Partial Fisher-Yates over an implicit lot of M defectives and N−M
    conforming items: at draw i a uniform index among the N−i unseen items
    is defective iff it falls below the defectives still unseen.
    """
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    remaining = np.full(trials, M, dtype=np.int64)
    found = np.zeros(trials, dtype=np.int64)
    for i in range(plan.n):
        defective = rng.integers(0, N - i, size=trials) < remaining
        found += defective
        remaining -= defective
    return int(np.count_nonzero(found <= plan.c))


def monte_carlo_oc(
    M: int,
    N: int,
    plan: SamplingPlan,
    trials: int,
    seed: int,
    shards: int = 1,
    workers: int = 1,
) -> SimulationResult:
    """Acceptance rate over `trials` simulated samples; deterministic in (seed, shards)."""
    if int(M) != M:
        raise DomainError(f"simulation needs an integer defective count, got {M}")
    M = int(M)
    _check_lot(M, N, plan)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if shards < 1 or shards > trials:
        raise DomainError(f"shards must lie in [1, trials], got {shards}")
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")

    seeds = np.random.SeedSequence(seed).spawn(shards)
    sizes: List[int] = [trials // shards + (1 if i < trials % shards else 0) for i in range(shards)]
    for i, s in enumerate(seeds):
        logger.debug("shard %d: %d trials, spawn key %s", i, sizes[i], s.spawn_key)

    if workers > 1 and shards > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda a: _simulate_shard(M, N, plan, *a), zip(sizes, seeds)))
    else:
        counts = [_simulate_shard(M, N, plan, size, s) for size, s in zip(sizes, seeds)]

    acceptances = sum(counts)
    estimate = acceptances / trials
    return SimulationResult(
        trials=trials,
        acceptances=acceptances,
        estimate=estimate,
        std_error=math.sqrt(estimate * (1.0 - estimate) / trials),
        seed=seed,
        shards=shards,
    )
