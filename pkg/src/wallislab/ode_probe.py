"""
The differentiation-under-the-integral route to the probability integral.

    F(t) = integral over [0, 1] of exp(-t^2 (1 + x^2)) / (1 + x^2)
    G(t) = (integral over [0, t] of exp(-x^2))^2

F + G is constant and equal to F(0) = pi/4, and 0 <= F(t) <= exp(-t^2) pi/4,
so the probability integral is the limit of sqrt(pi/4 - F(t)).  The pi/4
reference always comes from the Machin enclosure.
"""

import logging
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from .config import Settings, get_settings
from .exact_core import RatInterval, pi_enclosure, render_decimal, sqrt_interval
from .exceptions import BoundViolation, DomainError, NegativeRadicandError
from .inequalities import CheckOutcome, Grade, Verdict
from .quadrature import (
    IntegrandFamily,
    QuadResult,
    decimal_upper,
    gauss_truncated,
    integrate,
    working_context,
)

logger = logging.getLogger(__name__)

# Beyond this t, F(t) is below exp(-1600) and is reported as 0 with that bound
T_CAP = 40.0
REFERENCE_DIGITS = 30
GRID_POINTS = 25
GRID_END = 6.0


class ConservationReport(BaseModel):
    """F(t), G(t) and how far their sum sits from pi/4."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["conservation"] = "conservation"
    t: Decimal = Field(..., ge=0, allow_inf_nan=True)
    F: QuadResult
    G: QuadResult
    sum_deviation: Decimal = Field(..., ge=0)
    allowed_deviation: Decimal = Field(..., ge=0)
    pi_quarter_ref: str
    within_tolerance: bool


class DerivativeReport(BaseModel):
    """Central-difference check of F' = -2 exp(-t^2) g(t), G' = -F'."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["derivative"] = "derivative"
    t: Decimal
    h: Decimal
    f_prime: Decimal
    g_prime: Decimal
    expected_g_prime: Decimal
    f_residual: Decimal
    g_residual: Decimal
    sum_residual: Decimal
    budget: Decimal
    holds: bool


def _check_t(t: float) -> float:
    if isinstance(t, bool) or not isinstance(t, (int, float, Decimal)):
        raise DomainError(f"t must be a real number, got {t!r}")
    value = float(t)
    if math.isnan(value) or value < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    return value


def _as_decimal(t: float) -> Decimal:
    return Decimal("Infinity") if math.isinf(t) else Decimal(repr(t))


def _quarter_pi() -> RatInterval:
    return pi_enclosure(REFERENCE_DIGITS).interval.scale(Fraction(1, 4))


def decay_bound(t: float, settings: Optional[Settings] = None) -> Decimal:
    """exp(-t^2) pi/4, rounded up."""
    t = _check_t(t)
    if math.isinf(t):
        return Decimal(0)
    ctx = working_context(settings or get_settings())
    tt = ctx.mpf(t)
    return decimal_upper(ctx, ctx.exp(-tt * tt) * ctx.pi / 4)


def F_of_t(t: float, tol: float, settings: Optional[Settings] = None) -> QuadResult:  # noqa: N802
    """
    F(t) by quadrature, checked against 0 <= F(t) <= exp(-t^2) pi/4.

    For t above T_CAP (and t = inf) F is reported as 0 with the decay bound
    as its tail bound.

    Raises:
        BoundViolation: if the value leaves [0, exp(-t^2) pi/4] by more than
            its uncertainty
    """
    t = _check_t(t)
    bound = decay_bound(t, settings)
    if t > T_CAP:
        return QuadResult(
            value=Decimal(0), discretization_error=Decimal(0), tail_bound=bound, evaluations=1
        )

    result = integrate(IntegrandFamily.borwein_f(t), tol, settings)
    if result.value > bound + result.uncertainty or result.value < -result.uncertainty:
        raise BoundViolation(
            f"F({t}) = {result.value} ± {result.uncertainty} lies outside [0, {bound}]"
        )
    return result


def G_of_t(t: float, tol: float, settings: Optional[Settings] = None) -> QuadResult:  # noqa: N802
    """
    G(t) = g(t)^2 with g the integral of exp(-x^2) over [0, t].

    With g carrying discretization error d and tail bound tau, G carries
    2|g| d + d^2 and (2|g| + 2d) tau + tau^2.
    """
    t = _check_t(t)
    g = gauss_truncated(t, tol, settings)
    with localcontext() as dctx:
        dctx.prec = 60
        d = g.discretization_error
        tau = g.tail_bound
        size = abs(g.value)
        return QuadResult(
            value=g.value * g.value,
            discretization_error=2 * size * d + d * d,
            tail_bound=(2 * size + 2 * d) * tau + tau * tau,
            evaluations=g.evaluations,
            truncated_at=g.truncated_at,
        )


def _decimal(q: Fraction, places: int = REFERENCE_DIGITS) -> Decimal:
    return Decimal(render_decimal(q, places))


def _decimal_up(q: Fraction, places: int = REFERENCE_DIGITS) -> Decimal:
    return Decimal(render_decimal(q, places)) + Decimal(1).scaleb(-places)


def check_conservation(
    t: float, tol: float, settings: Optional[Settings] = None
) -> ConservationReport:
    """
    Compare F(t) + G(t) with pi/4.

    The sum may deviate by the combined quadrature uncertainties plus the
    width of the pi/4 reference before the report flags a violation.
    """
    t = _check_t(t)
    f = F_of_t(t, tol, settings)
    g = G_of_t(t, tol, settings)
    quarter = _quarter_pi()
    with localcontext() as dctx:
        dctx.prec = 60
        total = Fraction(f.value + g.value)
        deviation = abs(total - quarter.midpoint)
        allowed = f.uncertainty + g.uncertainty + _decimal_up(quarter.width)
    report = ConservationReport(
        t=_as_decimal(t),
        F=f,
        G=g,
        sum_deviation=_decimal_up(deviation),
        allowed_deviation=allowed,
        pi_quarter_ref=render_decimal(quarter.midpoint, 20),
        within_tolerance=_decimal(deviation) <= allowed,
    )
    if not report.within_tolerance:
        logger.warning("F + G misses pi/4 at t=%s by %s", t, report.sum_deviation)
    return report


def conservation_grid() -> List[float]:
    """25 points log-spaced in 1 + t over [0, 6]: t_i = 7^(i/24) - 1."""
    steps = GRID_POINTS - 1
    grid = [(1 + GRID_END) ** (i / steps) - 1 for i in range(GRID_POINTS)]
    grid[0], grid[-1] = 0.0, GRID_END
    return grid


def sweep_conservation(
    tol: float, grid: Optional[Sequence[float]] = None, settings: Optional[Settings] = None
) -> List[ConservationReport]:
    """check_conservation at every grid point, ascending in t."""
    points = sorted(conservation_grid() if grid is None else grid)
    reports = [check_conservation(t, tol, settings) for t in points]
    logger.info(
        "conservation sweep: %d/%d points within tolerance",
        sum(r.within_tolerance for r in reports),
        len(reports),
    )
    return reports


def probability_integral_via_F(  # noqa: N802
    t: float, tol: float, settings: Optional[Settings] = None
) -> QuadResult:
    """
    The integral of exp(-x^2) over [0, t] as sqrt(pi/4 - F(t)).

    The error bound is max(sqrt(r + delta) - sqrt(r), sqrt(r) - sqrt(max(r - delta, 0)))
    for radicand r and its uncertainty delta (F's uncertainty plus the width
    of the pi/4 reference).

    Raises:
        NegativeRadicandError: if pi/4 - F(t) comes out negative
    """
    t = _check_t(t)
    if t == 0:
        return QuadResult(value=Decimal(0), discretization_error=Decimal(0), evaluations=1)
    f = F_of_t(t, tol, settings)
    quarter = _quarter_pi()
    radicand = quarter.midpoint - Fraction(f.value)
    delta = Fraction(f.uncertainty) + quarter.width
    if radicand < 0:
        raise NegativeRadicandError(radicand, delta, t)

    digits = REFERENCE_DIGITS
    root = sqrt_interval(RatInterval.point(radicand), digits)
    above = sqrt_interval(RatInterval.point(radicand + delta), digits).hi - root.lo
    below = root.hi - sqrt_interval(RatInterval.point(max(radicand - delta, Fraction(0))), digits).lo
    return QuadResult(
        value=_decimal(root.midpoint),
        discretization_error=_decimal_up(max(above, below)),
        evaluations=f.evaluations,
    )


def check_derivative_identities(
    t: float, h: float = 1e-4, tol: float = 1e-12, settings: Optional[Settings] = None
) -> DerivativeReport:
    """
    Central differences of F and G at t against +-2 exp(-t^2) g(t).

    The residual budget is 10 h^2 for the difference formula plus 4 u/h for
    the quadrature uncertainties u of the sampled values.
    """
    t = _check_t(t)
    if not 0 < h <= t or math.isinf(t):
        raise DomainError(f"need 0 < h <= t < inf, got t={t}, h={h}")
    f_plus, f_minus = F_of_t(t + h, tol, settings), F_of_t(t - h, tol, settings)
    g_plus, g_minus = G_of_t(t + h, tol, settings), G_of_t(t - h, tol, settings)
    g_mid = gauss_truncated(t, tol, settings)

    ctx = working_context(settings or get_settings())
    with localcontext() as dctx:
        dctx.prec = 60
        step = Decimal(repr(h))
        f_prime = (f_plus.value - f_minus.value) / (2 * step)
        g_prime = (g_plus.value - g_minus.value) / (2 * step)
        weight = Decimal(ctx.nstr(2 * ctx.exp(-ctx.mpf(t) ** 2), ctx.dps))
        expected = weight * g_mid.value
        uncertainty = max(r.uncertainty for r in (f_plus, f_minus, g_plus, g_minus))
        budget = 10 * step * step + 4 * uncertainty / step + weight * g_mid.uncertainty
        f_residual = abs(f_prime + expected)
        g_residual = abs(g_prime - expected)
        sum_residual = abs(f_prime + g_prime)
    return DerivativeReport(
        t=_as_decimal(t),
        h=step,
        f_prime=f_prime,
        g_prime=g_prime,
        expected_g_prime=expected,
        f_residual=f_residual,
        g_residual=g_residual,
        sum_residual=sum_residual,
        budget=budget,
        holds=max(f_residual, g_residual, sum_residual) <= budget,
    )


def check_f_decay(
    t: float, tol: float, index: int = 0, settings: Optional[Settings] = None
) -> CheckOutcome:
    """0 <= F(t) <= exp(-t^2) pi/4 as a NUMERIC outcome; ``index`` labels the grid point."""
    t = _check_t(t)
    try:
        f = F_of_t(t, tol, settings)
    except BoundViolation as e:
        return CheckOutcome(
            name="f_decay", n=index, grade=Grade.NUMERIC, verdict=Verdict.FAILS, witness=str(e)
        )
    bound = decay_bound(t, settings)
    return CheckOutcome(
        name="f_decay",
        n=index,
        grade=Grade.NUMERIC,
        verdict=Verdict.HOLDS,
        witness=f"F({t}) = {f.value} ± {f.uncertainty:.3e} ≤ e^(-t²)·π/4 = {bound}",
    )
