# tests/test_oracle.py
"""
Cross-checks of the floating-point kernels against exact rationals, high
precision and simulation.
"""
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from sampling.criteria import admissible_extended
from sampling.dist import SamplingPlan, hypergeom_oc_exact, hypergeom_oc_extended
from sampling.errors import DomainError, OracleSizeError
from sampling.oracle import (
    RNG_ALGORITHM,
    ExactProbability,
    audit_boundary,
    hypergeom_oc_highprec,
    hypergeom_oc_rational,
    monte_carlo_oc,
)


def _random_configs(seed, count, max_N=5000, max_c=30):
    rng = np.random.default_rng(seed)
    configs = []
    for _ in range(count):
        N = int(rng.integers(1, max_N + 1))
        n = int(rng.integers(1, N + 1))
        c = int(rng.integers(0, min(n, max_c) + 1))
        M = int(rng.integers(0, N + 1))
        configs.append((M, N, n, c))
    return configs


# ────────────────────────────────────────────────────────────
# Exact rationals
# ────────────────────────────────────────────────────────────

class TestRational:
    def test_single_defective(self):
        assert hypergeom_oc_rational(1, 16, SamplingPlan(15, 0)) == ExactProbability(1, 16)

    def test_reduced(self):
        # (43758 + 97240) / 184756
        value = hypergeom_oc_rational(2, 20, SamplingPlan(10, 1))
        assert value.fraction == Fraction(140998, 184756)
        assert (value.numerator, value.denominator) == (29, 38)

    def test_clean_lot(self):
        assert hypergeom_oc_rational(0, 300, SamplingPlan(42, 0)) == ExactProbability(1, 1)

    def test_size_guard(self):
        with pytest.raises(OracleSizeError):
            hypergeom_oc_rational(7, 100, SamplingPlan(42, 0), max_N=50)

    def test_not_lowest_terms(self):
        with pytest.raises(DomainError):
            ExactProbability(2, 4)

    def test_random_sweep_matches_float(self):
        for M, N, n, c in _random_configs(20240611, 1000):
            plan = SamplingPlan(n, c)
            exact = float(hypergeom_oc_rational(M, N, plan))
            assert hypergeom_oc_exact(M, N, plan) == pytest.approx(exact, rel=1e-12, abs=1e-300), (M, N, plan)
            assert hypergeom_oc_extended(float(M), N, plan) == pytest.approx(exact, rel=1e-12, abs=1e-300), (M, N, plan)


# ────────────────────────────────────────────────────────────
# High precision
# ────────────────────────────────────────────────────────────

class TestHighPrecision:
    def test_integer_count_matches_rational(self):
        plan = SamplingPlan(66, 1)
        exact = hypergeom_oc_rational(35, 500, plan).fraction
        with mpmath.workdps(40):
            value = hypergeom_oc_highprec(35, 500, plan)
            assert abs(value - mpmath.mpf(exact.numerator) / exact.denominator) < mpmath.mpf(10) ** -35

    @pytest.mark.parametrize("N,n,c", [(139, 55, 1), (1947, 65, 1), (3412, 87, 2), (16, 15, 0)])
    def test_real_count_matches_float(self, N, n, c):
        plan = SamplingPlan(n, c)
        M = 0.07 * N
        assert float(hypergeom_oc_highprec(M, N, plan)) == pytest.approx(hypergeom_oc_extended(M, N, plan), rel=1e-9)

    def test_unclamped_below_zero(self):
        assert hypergeom_oc_highprec(1.05, 15, SamplingPlan(15, 0)) < 0

    @pytest.mark.parametrize("M,N,n,c", [(0.85, 85, 80, 2), (2, 85, 80, 2), (0.08, 8, 8, 2), (1.5, 40, 39, 3)])
    def test_certain_acceptance_up_to_c(self, M, N, n, c):
        assert hypergeom_oc_highprec(M, N, SamplingPlan(n, c)) == 1


class TestAuditBoundary:
    @pytest.mark.parametrize("N,n,c", [
        (139, 55, 1), (142, 55, 1), (138, 55, 1), (143, 55, 1),
        (120, 65, 1), (1947, 65, 1), (1948, 65, 1), (119, 66, 1),
        (1454, 86, 2), (1469, 86, 2), (1166, 87, 2), (3412, 87, 2), (3413, 87, 2), (981, 88, 2),
        (16, 15, 0), (17, 15, 0), (3063, 41, 0), (3064, 41, 0),
    ])
    def test_published_endpoints(self, N, n, c):
        plan = SamplingPlan(n, c)
        audit = audit_boundary(N, plan)
        assert audit.agrees
        assert audit.admissible_float == admissible_extended(N, plan).admissible

    @pytest.mark.parametrize("N,n", [(85, 80), (200, 199), (100, 60)])
    def test_lot_below_bound(self, N, n):
        audit = audit_boundary(N, SamplingPlan(n, 2))
        assert audit.agrees
        assert not audit.admissible_highprec


# ────────────────────────────────────────────────────────────
# Monte Carlo
# ────────────────────────────────────────────────────────────

class TestMonteCarlo:
    def test_single_defective(self):
        res = monte_carlo_oc(1, 16, SamplingPlan(15, 0), trials=10**6, seed=1)
        assert abs(res.estimate - 0.0625) < 3 * res.std_error
        assert res.algorithm == RNG_ALGORITHM

    def test_matches_rational(self):
        plan = SamplingPlan(42, 0)
        exact = float(hypergeom_oc_rational(70, 1000, plan))
        res = monte_carlo_oc(70, 1000, plan, trials=10**6, seed=2)
        assert abs(res.estimate - exact) < 3 * res.std_error

    def test_all_defective(self):
        res = monte_carlo_oc(20, 20, SamplingPlan(10, 3), trials=1000, seed=3)
        assert res.acceptances == 0
        assert res.estimate == 0.0 and res.std_error == 0.0

    def test_deterministic(self):
        plan = SamplingPlan(30, 1)
        a = monte_carlo_oc(10, 200, plan, trials=5000, seed=42, shards=4)
        b = monte_carlo_oc(10, 200, plan, trials=5000, seed=42, shards=4, workers=4)
        assert a == b

    def test_std_error(self):
        res = monte_carlo_oc(5, 100, SamplingPlan(20, 0), trials=20000, seed=5)
        assert res.std_error == pytest.approx((res.estimate * (1 - res.estimate) / res.trials) ** 0.5)
        assert res.acceptances <= res.trials

    @pytest.mark.parametrize("kwargs", [{"trials": 0}, {"seed": -1}, {"shards": 0}])
    def test_invalid(self, kwargs):
        args = {"trials": 100, "seed": 0, **kwargs}
        with pytest.raises(DomainError):
            monte_carlo_oc(1, 10, SamplingPlan(5, 0), **args)

    def test_random_suite(self):
        rng = np.random.default_rng(7)
        hits = checked = 0
        while checked < 100:
            N = int(rng.integers(20, 400))
            n = int(rng.integers(1, min(N, 60) + 1))
            c = int(rng.integers(0, min(n, 3) + 1))
            M = int(rng.integers(0, N + 1))
            plan = SamplingPlan(n, c)
            exact = float(hypergeom_oc_rational(M, N, plan))
            if not 0.02 <= exact <= 0.98:
                continue
            res = monte_carlo_oc(M, N, plan, trials=10**5, seed=1000 + checked)
            hits += abs(res.estimate - exact) < 4 * res.std_error
            checked += 1
        assert hits >= 99
