"""
Checkers for the inequalities and squeezes behind Wallis's formula, and the
enclosures of pi, sqrt(pi) and the probability integral they yield.

CERTIFIED checks compare exact PiScalars; any square root is squared away
first, so every comparison is a rational against a rational multiple of pi
or pi^2.  Comparisons the pi enclosure cannot separate are retried with
doubled enclosure digits before the outcome is left UNDECIDED.  NUMERIC
checks rely on quadrature and judge margins against max(uncertainty, tol).
"""

import logging
import math
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from typing import List, Literal, NamedTuple, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import Settings, get_settings
from .exact_core import (
    HALF_PI,
    MAX_PI_DIGITS,
    ONE,
    PI,
    Comparison,
    ExactRational,
    PiEnclosure,
    PiScalar,
    RatInterval,
    pi_enclosure,
    render_decimal,
    render_interval,
    render_scalar,
    scalar_compare,
    scalar_to_decimal,
    scalar_to_interval,
    sqrt_interval,
)
from .exceptions import DomainError
from .quadrature import IntegrandFamily, QuadResult, gauss_truncated, integrate
from .sequences import (
    central_binomial,
    iter_wallis_integrals,
    moment_integral,
    wallis_integral,
    wallis_product,
)

logger = logging.getLogger(__name__)

# Decimal places of the square-root endpoints of derived enclosures
ROOT_DIGITS = 30
# Float rounding of sqrt(n) moves the integral over [0, sqrt(n)] by at most this
SQRT_ROUNDING = Decimal("1e-15")


class Grade(str, Enum):
    CERTIFIED = "CERTIFIED"
    NUMERIC = "NUMERIC"


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNDECIDED = "UNDECIDED"


class EnclosureTarget(str, Enum):
    PI = "PI"
    SQRT_PI = "SQRT_PI"
    PROBABILITY_INTEGRAL = "PROBABILITY_INTEGRAL"


class CheckOutcome(BaseModel):
    """Result of one checker at one index."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["check"] = "check"
    name: str
    n: int
    grade: Grade
    verdict: Verdict
    witness: str = ""
    digits: Optional[int] = Field(None, description="pi enclosure digits that settled the check")

    @model_validator(mode="after")
    def _check_witness(self) -> "CheckOutcome":
        if self.verdict is Verdict.FAILS and not self.witness:
            raise ValueError("a FAILS outcome must carry a witness")
        return self


class Enclosure(BaseModel):
    """
    Proven interval [lo, hi] around a target value.

    When the endpoints come from square roots, ``squared_lo``/``squared_hi``
    hold the exact squared endpoints they were rooted from.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["enclosure"] = "enclosure"
    target: EnclosureTarget
    n: int = Field(..., ge=1)
    lo: ExactRational
    hi: ExactRational
    width: ExactRational
    squared_lo: Optional[PiScalar] = None
    squared_hi: Optional[PiScalar] = None
    upper_limit: Optional[str] = Field(
        None, description="upper limit of the enclosed integral for PROBABILITY_INTEGRAL"
    )
    tail_bound: Optional[ExactRational] = None
    lo_decimal: Optional[str] = None
    hi_decimal: Optional[str] = None

    @model_validator(mode="after")
    def _check_width(self) -> "Enclosure":
        if self.lo > self.hi:
            raise ValueError(f"enclosure endpoints out of order: {self.lo} > {self.hi}")
        if self.width != self.hi - self.lo:
            raise ValueError("width must equal hi - lo")
        return self

    @classmethod
    def between(
        cls, target: EnclosureTarget, n: int, lo: Fraction, hi: Fraction, **extra: object
    ) -> "Enclosure":
        return cls(target=target, n=n, lo=lo, hi=hi, width=hi - lo, **extra)

    @property
    def interval(self) -> RatInterval:
        return RatInterval(lo=self.lo, hi=self.hi)

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def render(self, digits: int = 10) -> str:
        return render_interval(self.interval, digits)

    def with_decimals(self, digits: int) -> "Enclosure":
        """Copy carrying truncated decimal renderings of both endpoints."""
        return self.model_copy(
            update={
                "lo_decimal": render_decimal(self.lo, digits),
                "hi_decimal": render_decimal(self.hi, digits),
            }
        )


class Claim(NamedTuple):
    """One exact comparison ``left relation right`` with labels for the witness."""

    left_label: str
    left: PiScalar
    relation: Literal["<", "<=", "=="]
    right_label: str
    right: PiScalar


_ACCEPTED = {
    "<": {Comparison.LESS},
    "<=": {Comparison.LESS, Comparison.EQUAL},
    "==": {Comparison.EQUAL},
}
_SYMBOL = {"<": "<", "<=": "≤", "==": "="}


def _judge(claim: Claim, enc: PiEnclosure) -> Verdict:
    comparison = scalar_compare(claim.left, claim.right, enc)
    if comparison is Comparison.UNDECIDED:
        return Verdict.UNDECIDED
    return Verdict.HOLDS if comparison in _ACCEPTED[claim.relation] else Verdict.FAILS


def _side(label: str, value: PiScalar, enc: PiEnclosure) -> str:
    text = f"{label} = {render_scalar(value)}"
    if not value.is_rational:
        text += f" ≈ {scalar_to_decimal(value, min(enc.digits, 12), enc)}"
    return text


def _witness(claims: Sequence[Claim], enc: PiEnclosure) -> str:
    return "; ".join(
        f"{_side(c.left_label, c.left, enc)} {_SYMBOL[c.relation]} "
        f"{_side(c.right_label, c.right, enc)}"
        for c in claims
    )


def _combine(verdicts: Sequence[Verdict]) -> Verdict:
    if Verdict.FAILS in verdicts:
        return Verdict.FAILS
    if Verdict.UNDECIDED in verdicts:
        return Verdict.UNDECIDED
    return Verdict.HOLDS


def _log_outcome(outcome: CheckOutcome) -> CheckOutcome:
    if outcome.verdict is Verdict.HOLDS:
        logger.debug("%s n=%d holds", outcome.name, outcome.n)
    else:
        logger.warning("%s n=%d %s: %s", outcome.name, outcome.n, outcome.verdict.value, outcome.witness)
    return outcome


def certify(
    name: str,
    n: int,
    claims: Sequence[Claim],
    enc: Optional[PiEnclosure] = None,
    max_escalations: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> CheckOutcome:
    """
    Decide a conjunction of exact claims.

    Args:
        name: Checker name for the outcome
        n: Index the claims were built for
        claims: Comparisons that must all hold
        enc: Starting pi enclosure; built from settings when omitted
        max_escalations: How many times the enclosure digits may double
        settings: Source of the defaults above

    Returns:
        CERTIFIED CheckOutcome; FAILS as soon as one claim is refuted,
        UNDECIDED if a claim stays unresolved after every escalation
    """
    settings = settings or get_settings()
    if enc is None:
        enc = pi_enclosure(settings.enclosure_digits)
    if max_escalations is None:
        max_escalations = settings.max_escalations

    for attempt in range(max_escalations + 1):
        verdict = _combine([_judge(claim, enc) for claim in claims])
        if verdict is not Verdict.UNDECIDED:
            break
        if attempt == max_escalations or enc.digits >= MAX_PI_DIGITS:
            break
        digits = min(2 * enc.digits, MAX_PI_DIGITS)
        logger.debug("%s n=%d undecided at %d digits, retrying at %d", name, n, enc.digits, digits)
        enc = pi_enclosure(digits)

    return _log_outcome(
        CheckOutcome(
            name=name,
            n=n,
            grade=Grade.CERTIFIED,
            verdict=verdict,
            witness=_witness(claims, enc),
            digits=enc.digits,
        )
    )


def _require_n(n: int, minimum: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"n must be an integer, got {n!r}")
    if n < minimum:
        raise DomainError(f"n must be >= {minimum}, got {n}")


def _half_products(n: int) -> Fraction:
    """P_n^2 / n = 2 a_n (2n+1) / (2n)."""
    return 2 * wallis_product(n) * Fraction(2 * n + 1, 2 * n)


def check_stieltjes(n: int, enc: Optional[PiEnclosure] = None) -> CheckOutcome:
    """Strict log-convexity of the Gaussian moments: E_n^2 < E_(n+1) E_(n-1)."""
    _require_n(n, 1)
    left = moment_integral(n) ** 2
    right = moment_integral(n + 1) * moment_integral(n - 1)
    return certify(
        "stieltjes",
        n,
        [Claim(f"E_{n}^2", left, "<", f"E_{n + 1}·E_{n - 1}", right)],
        enc,
    )


def check_moment_squeeze(n: int, enc: Optional[PiEnclosure] = None) -> CheckOutcome:
    """
    Both squared moment chains pinning 4 E_0^2:

        (2n/(2n+1)) P_n^2/n <= 4 E_0^2 <= P_n^2/n
        4 E_0^2 <= P_n^2/n <= 4 E_0^2 (2n+1)/(2n)

    with P_n = (2/1)(4/3)...(2n/(2n-1)).
    """
    _require_n(n, 1)
    four_e0_sq = 4 * moment_integral(0) ** 2
    upper = PiScalar.of(_half_products(n))
    lower = upper * Fraction(2 * n, 2 * n + 1)
    stretched = four_e0_sq * Fraction(2 * n + 1, 2 * n)
    return certify(
        "moment_squeeze",
        n,
        [
            Claim("(2n/(2n+1))·P_n²/n", lower, "<=", "4E_0²", four_e0_sq),
            Claim("4E_0²", four_e0_sq, "<=", "P_n²/n", upper),
            Claim("P_n²/n", upper, "<=", "4E_0²·(2n+1)/(2n)", stretched),
        ],
        enc,
    )


def check_wallis_monotone(n: int, enc: Optional[PiEnclosure] = None) -> CheckOutcome:
    """I_(n+1) < I_n."""
    _require_n(n, 0)
    return certify(
        "wallis_monotone",
        n,
        [Claim(f"I_{n + 1}", wallis_integral(n + 1), "<", f"I_{n}", wallis_integral(n))],
        enc,
    )


def check_product_identity(n: int) -> CheckOutcome:
    """n I_n I_(n-1) = pi/2, decided exactly."""
    _require_n(n, 1)
    product = n * wallis_integral(n) * wallis_integral(n - 1)
    return certify(
        "product_identity",
        n,
        [Claim(f"{n}·I_{n}·I_{n - 1}", product, "==", "π/2", HALF_PI)],
        max_escalations=0,
    )


def check_sqrt_limit_bounds(n: int, enc: Optional[PiEnclosure] = None) -> CheckOutcome:
    """(n/(n+1)) pi/2 <= n I_n^2 <= pi/2."""
    _require_n(n, 1)
    middle = n * wallis_integral(n) ** 2
    return certify(
        "sqrt_limit_bounds",
        n,
        [
            Claim("(n/(n+1))·π/2", HALF_PI * Fraction(n, n + 1), "<=", f"{n}·I_{n}²", middle),
            Claim(f"{n}·I_{n}²", middle, "<=", "π/2", HALF_PI),
        ],
        enc,
    )


def check_wallis_squeeze(n: int, enc: Optional[PiEnclosure] = None) -> CheckOutcome:
    """The Wallis enclosure of pi contains pi (decided against the Machin enclosure)."""
    enclosure = pi_enclosure_wallis(n)
    return certify(
        "wallis_squeeze",
        n,
        [
            Claim("2a_n", PiScalar.of(enclosure.lo), "<=", "π", PI),
            Claim("π", PI, "<=", "2a_n·(2n+1)/(2n)", PiScalar.of(enclosure.hi)),
        ],
        enc,
    )


def check_variation_observation(n: int) -> CheckOutcome:
    """
    Exact identities between the product forms and the Wallis integrals:

        a_n = P_n^2/(2n+1) = Q_n^2 (2n+1)
        n Q_n^2 = (1/2) (2n/(2n+1)) (2n+1) I_(2n+1)^2
    """
    _require_n(n, 1)
    p = Fraction(1)
    q = Fraction(1)
    for k in range(1, n + 1):
        p *= Fraction(2 * k, 2 * k - 1)
        q *= Fraction(2 * k, 2 * k + 1)
    a_n = PiScalar.of(wallis_product(n))
    i_odd = wallis_integral(2 * n + 1)
    observed = Fraction(1, 2) * Fraction(2 * n, 2 * n + 1) * (2 * n + 1) * i_odd**2
    return certify(
        "variation_observation",
        n,
        [
            Claim("a_n", a_n, "==", "P_n²/(2n+1)", PiScalar.of(p * p / (2 * n + 1))),
            Claim("a_n", a_n, "==", "Q_n²·(2n+1)", PiScalar.of(q * q * (2 * n + 1))),
            Claim("n·Q_n²", PiScalar.of(n * q * q), "==", "(1/2)(2n/(2n+1))(2n+1)·I_(2n+1)²", observed),
        ],
        max_escalations=0,
    )


def check_binomial_band(n: int, enc: Optional[PiEnclosure] = None) -> CheckOutcome:
    """1 - 1/(4n) <= C(2n,n) sqrt(pi n)/4^n <= 1, compared squared."""
    _require_n(n, 1)
    c = central_binomial(n)
    ratio_sq = PiScalar.of(Fraction(c * c * n, 16**n), 2)
    floor_sq = PiScalar.of((1 - Fraction(1, 4 * n)) ** 2)
    return certify(
        "binomial_band",
        n,
        [
            Claim("(1-1/(4n))²", floor_sq, "<=", "C(2n,n)²·n·π/16^n", ratio_sq),
            Claim("C(2n,n)²·n·π/16^n", ratio_sq, "<=", "1", ONE),
        ],
        enc,
    )


def pi_enclosure_wallis(n: int) -> Enclosure:
    """pi in [2 a_n, 2 a_n (2n+1)/(2n)], exact rational endpoints of width a_n/n."""
    _require_n(n, 1)
    a_n = wallis_product(n)
    lo = 2 * a_n
    return Enclosure.between(EnclosureTarget.PI, n, lo, lo * Fraction(2 * n + 1, 2 * n))


def pi_enclosure_moments(n: int) -> Enclosure:
    """pi = 4 E_0^2 in [(2n/(2n+1)) P_n^2/n, P_n^2/n] from the squared moment chain."""
    _require_n(n, 1)
    upper = _half_products(n)
    return Enclosure.between(EnclosureTarget.PI, n, upper * Fraction(2 * n, 2 * n + 1), upper)


def sqrtpi_enclosure_moments(n: int) -> Enclosure:
    """sqrt(pi) = 2 E_0 enclosed by rooting the squared moment chain outward."""
    squared = pi_enclosure_moments(n)
    root = sqrt_interval(squared.interval, ROOT_DIGITS)
    return Enclosure.between(
        EnclosureTarget.SQRT_PI,
        n,
        root.lo,
        root.hi,
        squared_lo=PiScalar.of(squared.lo),
        squared_hi=PiScalar.of(squared.hi),
    )


def probability_integral_enclosure(n: int, enc: Optional[PiEnclosure] = None) -> Enclosure:
    """
    Enclose the integral of exp(-x^2) over [0, sqrt(n)], n >= 2.

    sqrt(n) I_(2n+1) <= integral <= sqrt(n) I_(2n-2); the endpoints are the
    outward roots of the exact squares n I_(2n+1)^2 and n I_(2n-2)^2.  This is
    the truncated integral only; see probability_integral_full_enclosure.
    """
    _require_n(n, 2)
    enc = enc or pi_enclosure(ROOT_DIGITS + 3)
    lower_sq = n * wallis_integral(2 * n + 1) ** 2
    upper_sq = n * wallis_integral(2 * n - 2) ** 2
    lo = sqrt_interval(scalar_to_interval(lower_sq, enc), ROOT_DIGITS).lo
    hi = sqrt_interval(scalar_to_interval(upper_sq, enc), ROOT_DIGITS).hi
    return Enclosure.between(
        EnclosureTarget.PROBABILITY_INTEGRAL,
        n,
        lo,
        hi,
        squared_lo=lower_sq,
        squared_hi=upper_sq,
        upper_limit=f"√{n}",
    )


def gaussian_tail_bound(n: int) -> Fraction:
    """
    Rational upper bound on the integral of exp(-x^2) over [sqrt(n), inf).

    Uses exp(-n)/(2 sqrt(n)) with exp(n) bounded below by a Taylor partial sum.
    """
    _require_n(n, 1)
    terms = math.ceil(math.e * n) + 10
    partial = Fraction(0)
    term = Fraction(1)
    for k in range(terms + 1):
        partial += term
        term = term * n / (k + 1)
    root_lo = sqrt_interval(RatInterval.point(n), ROOT_DIGITS).lo
    return 1 / (2 * partial * root_lo)


def probability_integral_full_enclosure(n: int, enc: Optional[PiEnclosure] = None) -> Enclosure:
    """Enclosure of the full probability integral: the truncated one plus its tail."""
    truncated = probability_integral_enclosure(n, enc)
    tail = gaussian_tail_bound(n)
    return Enclosure.between(
        EnclosureTarget.PROBABILITY_INTEGRAL,
        n,
        truncated.lo,
        truncated.hi + tail,
        squared_lo=truncated.squared_lo,
        squared_hi=truncated.squared_hi,
        upper_limit="inf",
        tail_bound=tail,
    )


def _numeric_outcome(name: str, n: int, verdict: Verdict, witness: str) -> CheckOutcome:
    return _log_outcome(
        CheckOutcome(name=name, n=n, grade=Grade.NUMERIC, verdict=verdict, witness=witness)
    )


def _quad_interval(result: QuadResult, tol: float, extra: Decimal = Decimal(0)) -> RatInterval:
    """[value - U, value + U] with U = max(uncertainty, tol) + extra."""
    spread = Fraction(max(result.uncertainty, Decimal(repr(tol))) + extra)
    value = Fraction(result.value)
    return RatInterval(lo=value - spread, hi=value + spread)


def check_spivak_sandwich(n: int, tol: float, enc: Optional[PiEnclosure] = None) -> CheckOutcome:
    """
    I_(2n+1) <= (1/sqrt(n)) * integral of exp(-x^2) over [0, sqrt(n)] <= I_(2n-2).

    The outer members are the exact Wallis integrals the disguised integrals
    equal; the middle member comes from quadrature.
    """
    _require_n(n, 1)
    enc = enc or pi_enclosure(get_settings().enclosure_digits)
    left = wallis_integral(2 * n + 1).rational()
    right = scalar_to_interval(wallis_integral(2 * n - 2), enc)
    root = sqrt_interval(RatInterval.point(n), ROOT_DIGITS)

    quad = gauss_truncated(math.sqrt(n), tol)
    integral = _quad_interval(quad, tol, SQRT_ROUNDING)
    middle = RatInterval(lo=integral.lo / root.hi, hi=integral.hi / root.lo)

    if left < middle.lo and middle.hi < right.lo:
        verdict = Verdict.HOLDS
    elif middle.hi < left or right.hi < middle.lo:
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.UNDECIDED
    witness = (
        f"I_{2 * n + 1} = {left} ≤ (1/√{n})·∫₀^√{n} e^(-x²) ∈ {render_interval(middle, 12)} "
        f"≤ I_{2 * n - 2} = {render_scalar(wallis_integral(2 * n - 2))} ∈ {render_interval(right, 12)}"
    )
    return _numeric_outcome("spivak_sandwich", n, verdict, witness)


def check_disguise(n: int, tol: float, enc: Optional[PiEnclosure] = None) -> CheckOutcome:
    """
    Integral of (1+x^2)^-n over [0, inf) equals I_(2n-2) and integral of
    (1-x^2)^n over [0, 1] equals I_(2n+1), within the quadrature uncertainty.
    """
    _require_n(n, 1)
    enc = enc or pi_enclosure(get_settings().enclosure_digits)
    pairs = [
        (f"∫₀^∞ (1+x²)^-{n}", IntegrandFamily.reciprocal_pow(n), 2 * n - 2),
        (f"∫₀^1 (1-x²)^{n}", IntegrandFamily.poly_pow(n), 2 * n + 1),
    ]
    consistent = True
    parts = []
    for label, family, index in pairs:
        numeric = _quad_interval(integrate(family, tol), tol)
        exact = scalar_to_interval(wallis_integral(index), enc)
        consistent = consistent and numeric.overlaps(exact)
        parts.append(
            f"{label} ∈ {render_interval(numeric, 12)} vs I_{index} = "
            f"{render_scalar(wallis_integral(index))} ∈ {render_interval(exact, 12)}"
        )
    verdict = Verdict.HOLDS if consistent else Verdict.FAILS
    return _numeric_outcome("disguise", n, verdict, "; ".join(parts))


def check_probability_squeeze(n: int, tol: float) -> CheckOutcome:
    """The squeeze enclosure of the truncated probability integral contains the quadrature value."""
    enclosure = probability_integral_enclosure(n)
    quad = gauss_truncated(math.sqrt(n), tol)
    value = Fraction(quad.value)
    numeric = _quad_interval(quad, tol, SQRT_ROUNDING)
    if enclosure.contains(value):
        verdict = Verdict.HOLDS
    elif numeric.hi < enclosure.lo or numeric.lo > enclosure.hi:
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.UNDECIDED
    witness = (
        f"∫₀^√{n} e^(-x²) ≈ {render_decimal(value, 12)} ± {quad.uncertainty:.3e} "
        f"in {enclosure.render(12)}"
    )
    return _numeric_outcome("probability_squeeze", n, verdict, witness)


def wallis_monotone_chain(max_n: int, enc: Optional[PiEnclosure] = None) -> List[CheckOutcome]:
    """check_wallis_monotone for n = 0..max_n, reusing the running integrals."""
    _require_n(max_n, 0)
    values = [value for _, value in iter_wallis_integrals(max_n + 1)]
    return [
        certify(
            "wallis_monotone",
            n,
            [Claim(f"I_{n + 1}", values[n + 1], "<", f"I_{n}", values[n])],
            enc,
        )
        for n in range(max_n + 1)
    ]
