# sampling/errors.py
from __future__ import annotations

from typing import Any, Optional


class SamplingError(Exception):
    """Base class for everything raised by the sampling package."""


class DomainError(SamplingError, ValueError):
    pass


class NoSolutionError(SamplingError):
    """No sampling plan satisfies the criterion (100% inspection or nothing)."""

    def __init__(self, message: str, N: Optional[int] = None, c: Optional[int] = None):
        super().__init__(message)
        self.N = N
        self.c = c


class StructuralInadmissibilityError(NoSolutionError):
    """Lot too small for acceptance number c: N must reach `bound`."""

    def __init__(self, message: str, N: int, c: int, bound: int):
        super().__init__(message, N=N, c=c)
        self.bound = bound


class NoRootError(SamplingError):
    pass


class NumericalError(SamplingError, ArithmeticError):
    pass


class SchemeValidationError(SamplingError):
    def __init__(self, message: str, row: Any = None):
        super().__init__(message)
        self.row = row


class OracleSizeError(DomainError):
    pass
