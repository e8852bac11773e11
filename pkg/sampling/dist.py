# sampling/dist.py
"""
Operating-characteristic (OC) kernels for attribute single sampling.

A plan (n, c) draws n items and accepts the lot when at most c of them are
defective. The acceptance probability is evaluated under four models:

    binomial                 infinite lot (type B), fraction defective p
    poisson                  np-approximation of the binomial, cross-check only
    hypergeometric (exact)   lot of N items with an integer count M defective
    hypergeometric (ext.)    same, with factorials continued by x! = Γ(x+1)
                             so that M = p·N may be any real in [0, N]

All sums are taken in log-space with sign tracking: the first non-vanishing
summand is anchored, later summands follow from the term ratio, and the total
is a signed log-sum-exp. No factorial is ever formed in floating point.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import special

from sampling.errors import DomainError

logger = logging.getLogger(__name__)

# Largest tolerated excursion of a true probability outside [0, 1].
CLAMP_TOLERANCE = 1e-9

# Relative distance below which a real defective count is taken as an integer.
INTEGER_SNAP = 1e-12


# ────────────────────────────────────────────────────────────
# Types
# ────────────────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class SamplingPlan:
    """Sample size n and acceptance number c."""
    n: int
    c: int

    def __post_init__(self):
        if isinstance(self.n, bool) or isinstance(self.c, bool):
            raise DomainError("sample size and acceptance number must be integers")
        if int(self.n) != self.n or int(self.c) != self.c:
            raise DomainError(f"plan ({self.n},{self.c}) must be integral")
        if self.n < 1:
            raise DomainError(f"sample size must be >= 1, got {self.n}")
        if self.c < 0 or self.c > self.n:
            raise DomainError(f"acceptance number must lie in [0, n], got c={self.c}, n={self.n}")

    def __str__(self) -> str:
        return f"({self.n},{self.c})"


class OcKind(str, enum.Enum):
    BINOMIAL = "binomial"
    POISSON = "poisson"
    HYPERGEOMETRIC_EXACT = "hyper-exact"
    HYPERGEOMETRIC_EXTENDED = "hyper-extended"


@dataclass(frozen=True)
class OcModel:
    """Which distribution evaluates the OC; N only for the lot models."""
    kind: OcKind
    N: Optional[int] = None

    def __post_init__(self):
        if self.kind in (OcKind.HYPERGEOMETRIC_EXACT, OcKind.HYPERGEOMETRIC_EXTENDED):
            if self.N is None or self.N < 1:
                raise DomainError(f"{self.kind.value} model needs a lot size N >= 1")
        elif self.N is not None:
            raise DomainError(f"{self.kind.value} model takes no lot size")

    @classmethod
    def binomial(cls) -> "OcModel":
        return cls(OcKind.BINOMIAL)

    @classmethod
    def poisson(cls) -> "OcModel":
        return cls(OcKind.POISSON)

    @classmethod
    def hypergeometric_exact(cls, N: int) -> "OcModel":
        return cls(OcKind.HYPERGEOMETRIC_EXACT, N)

    @classmethod
    def hypergeometric_extended(cls, N: int) -> "OcModel":
        return cls(OcKind.HYPERGEOMETRIC_EXTENDED, N)

    @property
    def finite(self) -> bool:
        return self.N is not None

    def oc(self, p: float, plan: SamplingPlan) -> float:
        """Acceptance probability at quality level p."""
        if self.kind is OcKind.BINOMIAL:
            return binomial_oc(p, plan)
        if self.kind is OcKind.POISSON:
            return poisson_oc(p, plan)
        _check_probability(p)
        assert self.N is not None
        if self.kind is OcKind.HYPERGEOMETRIC_EXACT:
            M = p * self.N
            if abs(M - round(M)) > 1e-9 * max(1, self.N):
                raise DomainError(f"p={p} is not a quality level of a lot of size {self.N}")
            return hypergeom_oc_exact(int(round(M)), self.N, plan)
        return hypergeom_oc_extended(p * self.N, self.N, plan)


# ────────────────────────────────────────────────────────────
# Helpers
# ────────────────────────────────────────────────────────────

def _check_probability(p: float) -> None:
    if not (isinstance(p, (int, float, np.floating)) and math.isfinite(p) and 0.0 <= p <= 1.0):
        raise DomainError(f"probability must lie in [0, 1], got {p!r}")


def _signed_sum(logs: np.ndarray, signs: np.ndarray) -> float:
    if logs.size == 0:
        return 0.0
    value, sign = special.logsumexp(logs, b=signs, return_sign=True)
    if sign == 0 or not np.isfinite(value):
        return 0.0
    return float(sign * math.exp(value))


def _clamp(value: float, label: str) -> float:
    if value < 0.0 or value > 1.0:
        excursion = -value if value < 0.0 else value - 1.0
        if excursion > CLAMP_TOLERANCE:
            logger.debug("%s: cumulative sum %.3e outside [0,1], clamped", label, value)
        return min(1.0, max(0.0, value))
    return value


def log_gamma_signed(x: float) -> Tuple[float, int]:
    """ln|Γ(x)| and sign Γ(x). Poles (x = 0, -1, -2, ...) give (inf, 0)."""
    x = float(x)
    if x <= 0.0 and x.is_integer():
        return math.inf, 0
    return float(special.gammaln(x)), int(special.gammasgn(x))


# ────────────────────────────────────────────────────────────
# Infinite-lot kernels
# ────────────────────────────────────────────────────────────

def binomial_oc(p: float, plan: SamplingPlan) -> float:
    """Σ_{k≤c} C(n,k) p^k (1−p)^(n−k), by term recursion in log-space."""
    _check_probability(p)
    n, c = plan.n, plan.c
    if p == 0.0 or c >= n:
        return 1.0
    if p == 1.0:
        return 0.0
    k = np.arange(c, dtype=np.float64)
    step = np.log(n - k) - np.log(k + 1) + (math.log(p) - math.log1p(-p))
    logs = n * math.log1p(-p) + np.concatenate(([0.0], np.cumsum(step)))
    return min(1.0, _signed_sum(logs, np.ones_like(logs)))


def poisson_oc(p: float, plan: SamplingPlan) -> float:
    """Σ_{k≤c} e^(−np) (np)^k / k!."""
    _check_probability(p)
    if p == 0.0:
        return 1.0
    lam = plan.n * p
    k = np.arange(plan.c, dtype=np.float64)
    step = math.log(lam) - np.log(k + 1)
    logs = -lam + np.concatenate(([0.0], np.cumsum(step)))
    return min(1.0, _signed_sum(logs, np.ones_like(logs)))


# ────────────────────────────────────────────────────────────
# Finite-lot kernels
# ────────────────────────────────────────────────────────────

def _check_lot(M: float, N: int, plan: SamplingPlan) -> None:
    if N < 1:
        raise DomainError(f"lot size must be >= 1, got {N}")
    if not math.isfinite(M) or M < 0 or M > N:
        raise DomainError(f"defective count must lie in [0, N={N}], got {M}")
    if plan.n > N:
        raise DomainError(f"sample size {plan.n} exceeds lot size {N}")


def _hypergeom_log_terms(M: float, N: int, n: int, c: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Log-magnitudes and signs of the summands k = k_lo..k_hi of
    C(M,k) C(N−M,n−k) / C(N,n), factorials continued by Γ(x+1).

    For real M the k = 0 summand is the finite product Π_{i<n} (N−M−i)/(N−i).
    For integer M with fewer than n conforming items the summands below
    k_lo = n − (N−M) vanish (reciprocal-gamma poles) and the anchor is
    C(M,k_lo)/C(N,n) = Π_{i=1..N−M} (k_lo+i)/(M+i).
    """
    integral = float(M).is_integer()
    conforming = N - M
    if integral and conforming < n:
        k_lo = int(n - conforming)
        i = np.arange(1, int(conforming) + 1, dtype=np.float64)
        anchor = math.fsum(np.log((k_lo + i) / (M + i)))
        anchor_sign = 1.0
    else:
        k_lo = 0
        i = np.arange(n, dtype=np.float64)
        factors = (conforming - i) / (N - i)
        anchor = math.fsum(np.log(np.abs(factors)))
        anchor_sign = float(np.prod(np.sign(factors)))

    k_hi = min(c, n)
    if integral:
        k_hi = min(k_hi, int(M))
    if k_hi < k_lo:
        return np.empty(0), np.empty(0)

    k = np.arange(k_lo, k_hi, dtype=np.float64)
    ratios = (M - k) * (n - k) / ((k + 1) * (conforming - n + k + 1))
    logs = anchor + np.concatenate(([0.0], np.cumsum(np.log(np.abs(ratios)))))
    signs = anchor_sign * np.concatenate(([1.0], np.cumprod(np.sign(ratios))))
    return logs, signs


def hypergeom_oc_exact(M: int, N: int, plan: SamplingPlan) -> float:
    """Σ_{k≤c} C(M,k) C(N−M,n−k) / C(N,n) for an integer defective count M."""
    if int(M) != M:
        raise DomainError(f"exact model needs an integer defective count, got {M}")
    M = int(M)
    _check_lot(M, N, plan)
    if M <= plan.c or plan.c >= plan.n:
        return 1.0
    logs, signs = _hypergeom_log_terms(M, N, plan.n, plan.c)
    return min(1.0, max(0.0, _signed_sum(logs, signs)))


def hypergeom_oc_extended(M: float, N: int, plan: SamplingPlan) -> float:
    """Hypergeometric OC with every factorial replaced by Γ(·+1); M may be real."""
    M = float(M)
    _check_lot(M, N, plan)
    # p·N within round-off of an integer (0.07·100 = 7.000000000000001) is that integer
    if abs(M - round(M)) <= INTEGER_SNAP * max(1, N):
        M = float(round(M))
    # at most c defectives in the lot: certain acceptance
    if M <= plan.c or plan.c >= plan.n:
        return 1.0
    logs, signs = _hypergeom_log_terms(M, N, plan.n, plan.c)
    return _clamp(_signed_sum(logs, signs), f"extended OC M={M:g} N={N} plan={plan}")


def zero_acceptance_oc(M: float, N: int, n: int) -> float:
    """Closed form for c = 0: Γ(N−M+1) Γ(N−n+1) / (Γ(N+1) Γ(N−M−n+1))."""
    _check_lot(float(M), N, SamplingPlan(n, 0))
    log_den, sign_den = log_gamma_signed(N - M - n + 1)
    if sign_den == 0:
        return 0.0
    log_a, sign_a = log_gamma_signed(N - M + 1)
    log_b, sign_b = log_gamma_signed(N - n + 1)
    log_c, _ = log_gamma_signed(N + 1)
    value = sign_a * sign_b * sign_den * math.exp(log_a + log_b - log_c - log_den)
    return _clamp(value, f"zero-acceptance OC M={M:g} N={N} n={n}")
