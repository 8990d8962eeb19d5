"""
Exception hierarchy for wallislab
"""

from typing import Any, Optional


class WallisLabError(Exception):
    """Base class for every error raised by wallislab."""


class DomainError(WallisLabError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class MixedPowerError(WallisLabError, ValueError):
    """PiScalar arithmetic that would mix or invert powers of pi."""


class QuadratureBudgetExceeded(WallisLabError):
    """
    The adaptive integrator hit its evaluation cap before reaching tolerance.

    The best result achieved so far is kept in ``result`` so callers can
    still report the bound that was reached.
    """

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result


class NegativeRadicandError(WallisLabError, ArithmeticError):
    """The radicand of pi/4 - F(t) came out negative."""

    def __init__(self, radicand: Any, uncertainty: Any, t: float):
        super().__init__(
            f"pi/4 - F(t) = {radicand} < 0 at t={t} "
            f"(combined uncertainty {uncertainty}); tolerances are inconsistent"
        )
        self.radicand = radicand
        self.uncertainty = uncertainty
        self.t = t


class BoundViolation(WallisLabError):
    """A computed value contradicts a bound that is proven to hold."""


class OperationCancelled(WallisLabError):
    """A long computation observed its cancellation token."""

    def __init__(self, completed: int, message: Optional[str] = None):
        super().__init__(message or f"cancelled after {completed} factors")
        self.completed = completed
