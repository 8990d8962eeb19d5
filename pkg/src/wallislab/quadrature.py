"""
Error-estimated adaptive Gauss-Legendre quadrature for the integrand families
of the Wallis and probability-integral computations.

Improper integrals are truncated at a point chosen so that a proven analytic
tail bound stays below a quarter of the requested tolerance.
``discretization_error`` is a heuristic estimate (difference of embedded
rules); ``tail_bound`` is rigorous.
"""

import heapq
import logging
import math
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, List, Optional, Tuple

from mpmath.ctx_mp import MPContext
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import Settings, get_settings
from .exceptions import DomainError, QuadratureBudgetExceeded

logger = logging.getLogger(__name__)

MIN_TOL = 1e-14
HIGH_ORDER = 10
LOW_ORDER = 5
PANEL_EVALS = HIGH_ORDER + LOW_ORDER
TAIL_SHARE = 0.25
# Log-domain evaluation of (1 - x^2)^n above this exponent
POLY_LOG_THRESHOLD = 200


class FamilyKind(str, Enum):
    COS_POW = "cos_pow"
    MOMENT = "moment"
    RECIPROCAL_POW = "reciprocal_pow"
    POLY_POW = "poly_pow"
    GAUSS_TRUNC = "gauss_trunc"
    BORWEIN_F = "borwein_f"


_INDEXED = {
    FamilyKind.COS_POW,
    FamilyKind.MOMENT,
    FamilyKind.RECIPROCAL_POW,
    FamilyKind.POLY_POW,
}


class IntegrandFamily(BaseModel):
    """
    One integrand with its parameter.

    COS_POW(n): cos^n x on [0, pi/2]
    MOMENT(n): x^n exp(-x^2) on [0, inf)
    RECIPROCAL_POW(n): (1 + x^2)^-n on [0, inf), n >= 1
    POLY_POW(n): (1 - x^2)^n on [0, 1]
    GAUSS_TRUNC(t): exp(-x^2) on [0, t], t may be inf
    BORWEIN_F(t): exp(-t^2 (1 + x^2)) / (1 + x^2) on [0, 1]
    """

    model_config = ConfigDict(frozen=True)

    kind: FamilyKind
    n: Optional[int] = Field(None, ge=0)
    t: Optional[float] = Field(None, ge=0)

    @model_validator(mode="after")
    def _check_parameter(self) -> "IntegrandFamily":
        if self.kind in _INDEXED:
            if self.n is None:
                raise ValueError(f"{self.kind.value} needs an integer n")
            if self.kind is FamilyKind.RECIPROCAL_POW and self.n < 1:
                raise ValueError("reciprocal_pow needs n >= 1")
        else:
            if self.t is None or math.isnan(self.t):
                raise ValueError(f"{self.kind.value} needs a real t >= 0")
            if self.kind is FamilyKind.BORWEIN_F and math.isinf(self.t):
                raise ValueError("borwein_f needs a finite t")
        return self

    @classmethod
    def cos_pow(cls, n: int) -> "IntegrandFamily":
        return cls(kind=FamilyKind.COS_POW, n=n)

    @classmethod
    def moment(cls, n: int) -> "IntegrandFamily":
        return cls(kind=FamilyKind.MOMENT, n=n)

    @classmethod
    def reciprocal_pow(cls, n: int) -> "IntegrandFamily":
        return cls(kind=FamilyKind.RECIPROCAL_POW, n=n)

    @classmethod
    def poly_pow(cls, n: int) -> "IntegrandFamily":
        return cls(kind=FamilyKind.POLY_POW, n=n)

    @classmethod
    def gauss_trunc(cls, t: float) -> "IntegrandFamily":
        return cls(kind=FamilyKind.GAUSS_TRUNC, t=t)

    @classmethod
    def borwein_f(cls, t: float) -> "IntegrandFamily":
        return cls(kind=FamilyKind.BORWEIN_F, t=t)

    def __str__(self) -> str:
        parameter = self.n if self.kind in _INDEXED else self.t
        return f"{self.kind.name}({parameter})"


class QuadResult(BaseModel):
    """Value of an integral with its heuristic and rigorous error parts."""

    model_config = ConfigDict(frozen=True)

    value: Decimal
    discretization_error: Decimal = Field(..., ge=0)
    tail_bound: Decimal = Field(Decimal(0), ge=0)
    evaluations: int = Field(..., gt=0)
    truncated_at: Optional[Decimal] = None

    @property
    def uncertainty(self) -> Decimal:
        return self.discretization_error + self.tail_bound

    def lower(self) -> Fraction:
        return Fraction(self.value - self.uncertainty)

    def upper(self) -> Fraction:
        return Fraction(self.value + self.uncertainty)


def working_context(settings: Settings) -> MPContext:
    ctx = MPContext()
    ctx.dps = settings.working_dps
    return ctx


def _to_decimal(ctx: MPContext, x: Any, digits: Optional[int] = None) -> Decimal:
    return Decimal(ctx.nstr(x, digits or ctx.dps))


def decimal_upper(ctx: MPContext, x: Any) -> Decimal:
    """Decimal not smaller than the nonnegative mpf x."""
    return Decimal(ctx.nstr(x * (1 + ctx.mpf(10) ** -20), 25))


@lru_cache(maxsize=32)
def _gauss_legendre(order: int, dps: int) -> Tuple[Tuple[str, str], ...]:
    """Nodes and weights on [-1, 1], kept as strings so any context can load them."""
    ctx = MPContext()
    ctx.dps = dps + 10
    nodes, weights = ctx.gauss_quadrature(order, "legendre")
    return tuple(
        (ctx.nstr(nodes[i], dps + 5), ctx.nstr(weights[i], dps + 5)) for i in range(order)
    )


class _Panel:
    __slots__ = ("left", "right", "value", "error")

    def __init__(self, left: Any, right: Any, value: Any, error: Any):
        self.left = left
        self.right = right
        self.value = value
        self.error = error


class _Integrator:
    """Global adaptive bisection: always split the panel with the largest error."""

    def __init__(self, ctx: MPContext, func: Callable[[Any], Any], max_evals: int):
        self.ctx = ctx
        self.func = func
        self.max_evals = max_evals
        self.evaluations = 0
        self.high = [(ctx.mpf(x), ctx.mpf(w)) for x, w in _gauss_legendre(HIGH_ORDER, ctx.dps)]
        self.low = [(ctx.mpf(x), ctx.mpf(w)) for x, w in _gauss_legendre(LOW_ORDER, ctx.dps)]

    def _rule(self, rule: List[Tuple[Any, Any]], mid: Any, half: Any) -> Any:
        self.evaluations += len(rule)
        return half * self.ctx.fsum(w * self.func(mid + half * x) for x, w in rule)

    def panel(self, left: Any, right: Any) -> _Panel:
        mid = (left + right) / 2
        half = (right - left) / 2
        high = self._rule(self.high, mid, half)
        low = self._rule(self.low, mid, half)
        return _Panel(left, right, high, abs(high - low))

    def run(self, breakpoints: List[Any], tol: Any) -> Tuple[Any, Any, int]:
        ctx = self.ctx
        heap: List[Tuple[float, int, _Panel]] = []
        counter = 0
        for left, right in zip(breakpoints, breakpoints[1:]):
            p = self.panel(left, right)
            heapq.heappush(heap, (-float(p.error), counter, p))
            counter += 1

        def total(items: List[_Panel], attr: str) -> Any:
            ordered = sorted(items, key=lambda p: p.left)
            return ctx.fsum(getattr(p, attr) for p in ordered)

        error = total([item[2] for item in heap], "error")
        while error > tol:
            if self.evaluations + 2 * PANEL_EVALS > self.max_evals:
                panels = [item[2] for item in heap]
                raise _BudgetHit(total(panels, "value"), error, self.evaluations)
            _, _, worst = heapq.heappop(heap)
            mid = (worst.left + worst.right) / 2
            halves = (self.panel(worst.left, mid), self.panel(mid, worst.right))
            for p in halves:
                heapq.heappush(heap, (-float(p.error), counter, p))
                counter += 1
            error = error - worst.error + halves[0].error + halves[1].error
            if error <= tol:
                # resum to shed drift from the running update
                error = total([item[2] for item in heap], "error")

        panels = [item[2] for item in heap]
        logger.debug("quadrature converged with %d panels", len(panels))
        return total(panels, "value"), error, self.evaluations


class _BudgetHit(Exception):
    def __init__(self, value: Any, error: Any, evaluations: int):
        super().__init__("evaluation budget exhausted")
        self.value = value
        self.error = error
        self.evaluations = evaluations


def _check_tol(tol: float) -> None:
    if not (isinstance(tol, (int, float)) and math.isfinite(tol)) or tol < MIN_TOL:
        raise DomainError(f"tol must be a finite number >= {MIN_TOL}, got {tol!r}")


def moment_tail_bound(n: int, b: float, ctx: Optional[MPContext] = None) -> Decimal:
    """
    Upper bound on the integral of x^n exp(-x^2) over [b, inf), b >= max(1, sqrt(n)).

    b^(n-1) e^(-b^2) / 2 times c, with c = 1 for n <= 1 (exact for n = 1) and
    c = 1 / (1 - (n - 1) / (2 b^2)) otherwise.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if b < max(1.0, math.sqrt(n)):
        raise DomainError(f"tail bound needs b >= max(1, sqrt(n)), got b={b}")
    ctx = ctx or working_context(get_settings())
    bb = ctx.mpf(b)
    bound = bb ** (n - 1) * ctx.exp(-bb * bb) / 2
    if n >= 2:
        bound /= 1 - ctx.mpf(n - 1) / (2 * bb * bb)
    return decimal_upper(ctx, bound)


def moment_truncation_point(n: int, tail_tol: float) -> Tuple[Decimal, Decimal]:
    """
    Smallest b on the grid max(1, sqrt(n)) + k/2 whose moment tail bound is <= tail_tol.

    Returns:
        (b, bound) with bound >= the integral of x^n exp(-x^2) over [b, inf)
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if not tail_tol > 0:
        raise DomainError(f"tail_tol must be positive, got {tail_tol!r}")
    ctx = working_context(get_settings())
    b = max(1.0, math.sqrt(n))
    while True:
        bound = moment_tail_bound(n, b, ctx)
        if bound <= Decimal(repr(tail_tol)):
            logger.debug("moment n=%d truncated at b=%s (tail <= %s)", n, b, bound)
            return Decimal(repr(b)), bound
        b += 0.5


def reciprocal_tail_bound(n: int, r: float, ctx: Optional[MPContext] = None) -> Decimal:
    """
    Upper bound on the integral of (1 + x^2)^-n over [R, inf), R >= 1.

    arctan(1/R) = pi/2 - arctan(R) (exact) for n = 1, R^(1-2n)/(2n-1) for n >= 2.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if r < 1:
        raise DomainError(f"R must be >= 1, got {r}")
    ctx = ctx or working_context(get_settings())
    rr = ctx.mpf(r)
    if n == 1:
        bound = ctx.atan(1 / rr)
    else:
        bound = rr ** (1 - 2 * n) / (2 * n - 1)
    return decimal_upper(ctx, bound)


def reciprocal_truncation_point(n: int, tail_tol: float) -> Tuple[Decimal, Decimal]:
    """Smallest power of ten R whose reciprocal tail bound is <= tail_tol."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not tail_tol > 0:
        raise DomainError(f"tail_tol must be positive, got {tail_tol!r}")
    ctx = working_context(get_settings())
    exponent = 0
    while True:
        bound = reciprocal_tail_bound(n, 10.0**exponent, ctx)
        if bound <= Decimal(repr(tail_tol)):
            logger.debug("reciprocal n=%d truncated at R=1e%d (tail <= %s)", n, exponent, bound)
            return Decimal(10) ** exponent, bound
        exponent += 1


def _geometric_breakpoints(ctx: MPContext, right: Any) -> List[Any]:
    points = [ctx.mpf(0)]
    edge = ctx.mpf(1)
    while edge < right:
        points.append(edge)
        edge *= 2
    points.append(right)
    return points


def _unit_breakpoints(ctx: MPContext, right: Any) -> List[Any]:
    points = [ctx.mpf(k) for k in range(int(math.ceil(float(right))))]
    points.append(right)
    return points if len(points) > 1 else [ctx.mpf(0), right]


def _even_breakpoints(ctx: MPContext, right: Any, pieces: int = 4) -> List[Any]:
    return [right * k / pieces for k in range(pieces + 1)]


def adaptive_quadrature(
    func: Callable[[Any], Any],
    a: float,
    b: float,
    tol: float,
    settings: Optional[Settings] = None,
) -> QuadResult:
    """
    Integrate an arbitrary smooth function over [a, b].

    ``func`` receives and returns mpmath numbers of the working context.
    """
    _check_tol(tol)
    settings = settings or get_settings()
    ctx = working_context(settings)
    left, right = ctx.mpf(a), ctx.mpf(b)
    if left == right:
        func(left)
        return QuadResult(value=Decimal(0), discretization_error=Decimal(0), evaluations=1)
    return _run(ctx, func, _even_breakpoints(ctx, right - left), tol, settings, shift=left)


def _shifted(func: Callable[[Any], Any], shift: Any) -> Callable[[Any], Any]:
    def shifted(x: Any) -> Any:
        return func(x + shift)

    return shifted


def _run(
    ctx: MPContext,
    func: Callable[[Any], Any],
    breakpoints: List[Any],
    tol: float,
    settings: Settings,
    tail_bound: Decimal = Decimal(0),
    truncated_at: Optional[Decimal] = None,
    shift: Any = 0,
) -> QuadResult:
    integrand = _shifted(func, shift) if shift else func
    integrator = _Integrator(ctx, integrand, settings.max_evals)
    try:
        value, error, evaluations = integrator.run(breakpoints, ctx.mpf(tol))
    except _BudgetHit as hit:
        best = QuadResult(
            value=_to_decimal(ctx, hit.value),
            discretization_error=decimal_upper(ctx, hit.error),
            tail_bound=tail_bound,
            evaluations=hit.evaluations,
            truncated_at=truncated_at,
        )
        logger.warning(
            "quadrature budget of %d evaluations exhausted at error %s",
            settings.max_evals,
            best.discretization_error,
        )
        raise QuadratureBudgetExceeded(
            f"tolerance {tol} not reached within {settings.max_evals} evaluations "
            f"(best estimate {best.value} ± {best.uncertainty})",
            result=best,
        ) from None
    return QuadResult(
        value=_to_decimal(ctx, value),
        discretization_error=decimal_upper(ctx, error),
        tail_bound=tail_bound,
        evaluations=evaluations,
        truncated_at=truncated_at,
    )


def _integrand(ctx: MPContext, family: IntegrandFamily) -> Callable[[Any], Any]:
    kind = family.kind
    n = family.n or 0

    if kind is FamilyKind.COS_POW:

        def cos_pow(x: Any) -> Any:
            return ctx.cos(x) ** n

        return cos_pow

    if kind is FamilyKind.MOMENT:

        def moment(x: Any) -> Any:
            return x**n * ctx.exp(-x * x)

        return moment

    if kind is FamilyKind.RECIPROCAL_POW:

        def reciprocal_pow(x: Any) -> Any:
            return (1 + x * x) ** -n

        return reciprocal_pow

    if kind is FamilyKind.POLY_POW:

        def poly_pow(x: Any) -> Any:
            if n > POLY_LOG_THRESHOLD:
                return ctx.exp(n * ctx.log1p(-x * x))
            return (1 - x * x) ** n

        return poly_pow

    if kind is FamilyKind.BORWEIN_F:
        t2 = ctx.mpf(family.t) ** 2

        def borwein_f(x: Any) -> Any:
            return ctx.exp(-t2 * (1 + x * x)) / (1 + x * x)

        return borwein_f

    def gauss(x: Any) -> Any:
        return ctx.exp(-x * x)

    return gauss


def integrate(
    family: IntegrandFamily, tol: float, settings: Optional[Settings] = None
) -> QuadResult:
    """
    Integrate one member of an integrand family.

    Args:
        family: The integrand and its parameter
        tol: Target for discretization_error + tail_bound, at least 1e-14
        settings: Evaluation cap and working precision; read from the
            environment when omitted

    Returns:
        QuadResult; for truncated ranges the tail gets a quarter of tol

    Raises:
        DomainError: if tol is below 1e-14 or not finite
        QuadratureBudgetExceeded: if the evaluation cap is reached first;
            the best result achieved is attached
    """
    _check_tol(tol)
    settings = settings or get_settings()
    ctx = working_context(settings)
    kind = family.kind
    func = _integrand(ctx, family)

    if kind is FamilyKind.COS_POW:
        return _run(ctx, func, _even_breakpoints(ctx, ctx.pi / 2), tol, settings)
    if kind in (FamilyKind.POLY_POW, FamilyKind.BORWEIN_F):
        return _run(ctx, func, _even_breakpoints(ctx, ctx.mpf(1)), tol, settings)

    tail_tol = tol * TAIL_SHARE
    body_tol = tol - tail_tol

    if kind is FamilyKind.RECIPROCAL_POW:
        r, bound = reciprocal_truncation_point(family.n or 1, tail_tol)
        breakpoints = _geometric_breakpoints(ctx, ctx.mpf(str(r)))
        return _run(ctx, func, breakpoints, body_tol, settings, bound, truncated_at=r)

    if kind is FamilyKind.MOMENT:
        b, bound = moment_truncation_point(family.n or 0, tail_tol)
        breakpoints = _unit_breakpoints(ctx, ctx.mpf(str(b)))
        return _run(ctx, func, breakpoints, body_tol, settings, bound, truncated_at=b)

    t = family.t or 0.0
    if t == 0:
        return QuadResult(value=Decimal(0), discretization_error=Decimal(0), evaluations=1)
    b, bound = moment_truncation_point(0, tail_tol)
    if t > b:
        breakpoints = _unit_breakpoints(ctx, ctx.mpf(str(b)))
        return _run(ctx, func, breakpoints, body_tol, settings, bound, truncated_at=b)
    return _run(ctx, func, _unit_breakpoints(ctx, ctx.mpf(t)), tol, settings)


def gauss_truncated(t: float, tol: float, settings: Optional[Settings] = None) -> QuadResult:
    """
    Integral of exp(-x^2) over [0, t]; t = inf is accepted.

    Raises:
        DomainError: if t is negative or NaN
    """
    if isinstance(t, bool) or not isinstance(t, (int, float, Decimal)) or math.isnan(t) or t < 0:
        raise DomainError(f"t must be a nonnegative real, got {t!r}")
    return integrate(IntegrandFamily.gauss_trunc(float(t)), tol, settings)
