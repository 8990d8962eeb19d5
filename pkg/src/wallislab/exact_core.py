"""
Exact arithmetic core: rationals, pi-scalars, rational intervals and pi enclosures

Every closed-form value handled by wallislab has the shape q * pi^(k/2) with
q rational and k >= 0.  Values with different k are ordered through a
certified rational enclosure of pi computed from Machin's arctangent formula.
"""

import logging
import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Annotated, Any, Optional, Tuple, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    WithJsonSchema,
    model_validator,
)

from .exceptions import DomainError, MixedPowerError

logger = logging.getLogger(__name__)

# Arbitrary-precision rational; always stored reduced with a positive denominator
BigRational = Fraction

MAX_PI_DIGITS = 1000


def _parse_rational(value: Any) -> Fraction:
    """Read an exact rational from a Fraction, an int or a "p/q" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"cannot read {value!r} as an exact rational") from e
    # Floats are rejected on purpose: they are not exact
    raise ValueError(f"cannot read {type(value).__name__} as an exact rational")


ExactRational = Annotated[
    Fraction,
    PlainValidator(_parse_rational),
    PlainSerializer(str, return_type=str, when_used="json"),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]

Rational = Union[Fraction, int]


class Comparison(str, Enum):
    LESS = "LESS"
    GREATER = "GREATER"
    EQUAL = "EQUAL"
    UNDECIDED = "UNDECIDED"


class PiScalar(BaseModel):
    """
    Exact value coeff * pi^(half_pi_power / 2).

    Addition is only defined between equal powers of pi; multiplication adds
    the powers.  Zero is canonical: coeff == 0 forces half_pi_power == 0.
    """

    model_config = ConfigDict(frozen=True)

    coeff: ExactRational
    half_pi_power: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_canonical_zero(self) -> "PiScalar":
        if self.coeff == 0 and self.half_pi_power != 0:
            raise ValueError("zero must carry half_pi_power=0")
        return self

    @classmethod
    def of(cls, coeff: Rational, half_pi_power: int = 0) -> "PiScalar":
        """Build a scalar, folding any zero coefficient to the canonical zero."""
        coeff = Fraction(coeff)
        return cls(coeff=coeff, half_pi_power=half_pi_power if coeff else 0)

    @property
    def is_rational(self) -> bool:
        return self.half_pi_power == 0

    def rational(self) -> Fraction:
        """Return the value as a rational; only valid when no pi is involved."""
        if not self.is_rational:
            raise MixedPowerError(f"{render_scalar(self)} is not rational")
        return self.coeff

    def _coerce(self, other: Any) -> "PiScalar":
        if isinstance(other, PiScalar):
            return other
        if isinstance(other, (Fraction, int)) and not isinstance(other, bool):
            return PiScalar.of(other)
        return NotImplemented

    def __mul__(self, other: Any) -> "PiScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PiScalar.of(
            self.coeff * other.coeff, self.half_pi_power + other.half_pi_power
        )

    __rmul__ = __mul__

    def __add__(self, other: Any) -> "PiScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # Zero is the identity whatever the power
        if other.coeff == 0:
            return self
        if self.coeff == 0:
            return other
        if self.half_pi_power != other.half_pi_power:
            raise MixedPowerError(
                f"cannot add {render_scalar(self)} and {render_scalar(other)}"
            )
        return PiScalar.of(self.coeff + other.coeff, self.half_pi_power)

    __radd__ = __add__

    def __neg__(self) -> "PiScalar":
        return PiScalar.of(-self.coeff, self.half_pi_power)

    def __sub__(self, other: Any) -> "PiScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __truediv__(self, other: Any) -> "PiScalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.coeff == 0:
            raise ZeroDivisionError("division by a zero PiScalar")
        power = self.half_pi_power - other.half_pi_power
        if self.coeff != 0 and power < 0:
            raise MixedPowerError("negative powers of pi are not representable")
        return PiScalar.of(self.coeff / other.coeff, max(power, 0))

    def __pow__(self, exponent: int) -> "PiScalar":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("PiScalar powers must be nonnegative integers")
        return PiScalar.of(self.coeff**exponent, self.half_pi_power * exponent)

    def __str__(self) -> str:
        return render_scalar(self)


ZERO = PiScalar.of(0)
ONE = PiScalar.of(1)
PI = PiScalar.of(1, 2)
HALF_PI = PiScalar.of(Fraction(1, 2), 2)
SQRT_PI = PiScalar.of(1, 1)


class RatInterval(BaseModel):
    """Closed interval [lo, hi] with exact rational endpoints."""

    model_config = ConfigDict(frozen=True)

    lo: ExactRational
    hi: ExactRational

    @model_validator(mode="after")
    def _check_order(self) -> "RatInterval":
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")
        return self

    @classmethod
    def point(cls, value: Rational) -> "RatInterval":
        value = Fraction(value)
        return cls(lo=value, hi=value)

    @classmethod
    def hull(cls, a: Rational, b: Rational) -> "RatInterval":
        a, b = Fraction(a), Fraction(b)
        return cls(lo=min(a, b), hi=max(a, b))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: Union[Rational, "RatInterval"]) -> bool:
        if isinstance(value, RatInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        return self.lo <= value <= self.hi

    def overlaps(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "RatInterval") -> "RatInterval":
        if not self.overlaps(other):
            raise DomainError("intervals are disjoint")
        return RatInterval(lo=max(self.lo, other.lo), hi=min(self.hi, other.hi))

    def scale(self, factor: Rational) -> "RatInterval":
        return RatInterval.hull(self.lo * factor, self.hi * factor)

    def _coerce(self, other: Any) -> "RatInterval":
        if isinstance(other, RatInterval):
            return other
        if isinstance(other, (Fraction, int)) and not isinstance(other, bool):
            return RatInterval.point(other)
        return NotImplemented

    def __add__(self, other: Any) -> "RatInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatInterval(lo=self.lo + other.lo, hi=self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "RatInterval":
        return RatInterval(lo=-self.hi, hi=-self.lo)

    def __sub__(self, other: Any) -> "RatInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatInterval(lo=self.lo - other.hi, hi=self.hi - other.lo)

    def __rsub__(self, other: Any) -> "RatInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> "RatInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RatInterval(lo=min(products), hi=max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RatInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval reciprocal across zero")
        return RatInterval(lo=1 / self.hi, hi=1 / self.lo)

    def __truediv__(self, other: Any) -> "RatInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.reciprocal()

    def __pow__(self, exponent: int) -> "RatInterval":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("interval powers must be nonnegative integers")
        if exponent == 0:
            return RatInterval.point(1)
        if self.lo >= 0:
            return RatInterval(lo=self.lo**exponent, hi=self.hi**exponent)
        if self.hi <= 0:
            return RatInterval.hull(self.lo**exponent, self.hi**exponent)
        # Straddles zero
        top = max(self.lo**exponent, self.hi**exponent)
        bottom = min(self.lo**exponent, 0) if exponent % 2 else Fraction(0)
        return RatInterval(lo=bottom, hi=top)

    def sqrt(self, digits: int) -> "RatInterval":
        return sqrt_interval(self, digits)


class PiEnclosure(BaseModel):
    """A certified interval around pi, tight to 10^-digits."""

    model_config = ConfigDict(frozen=True)

    interval: RatInterval
    digits: int = Field(..., ge=1, le=MAX_PI_DIGITS)

    @model_validator(mode="after")
    def _check_enclosure(self) -> "PiEnclosure":
        if self.interval.width > Fraction(1, 10**self.digits):
            raise ValueError("pi enclosure is wider than requested")
        if not (3 < self.interval.lo and self.interval.hi < 4):
            raise ValueError("pi enclosure fails the 3 < pi < 4 sanity check")
        return self


def sqrt_interval(interval: RatInterval, digits: int) -> RatInterval:
    """
    Enclose the square root of a nonnegative interval.

    Endpoints are rounded outward to multiples of 10^-digits.
    """
    if interval.lo < 0:
        raise DomainError("square root of an interval reaching below zero")
    scale_sq = 10 ** (2 * digits)
    lo_floor = interval.lo.numerator * scale_sq // interval.lo.denominator
    hi_ceil = -(-interval.hi.numerator * scale_sq // interval.hi.denominator)
    lo_root = isqrt(lo_floor)
    hi_root = isqrt(hi_ceil)
    if hi_root * hi_root < hi_ceil:
        hi_root += 1
    scale = 10**digits
    return RatInterval(lo=Fraction(lo_root, scale), hi=Fraction(hi_root, scale))


def _arctan_inverse_bounds(m: int, scale: int) -> Tuple[int, int]:
    """
    Bound scale * arctan(1/m) between two integers.

    Each series term is floored or ceiled so the partial sums stay on the
    safe side; the alternating-series remainder is bounded by the first
    omitted term.
    """
    lo = hi = 0
    power = m
    k = 0
    m_sq = m * m
    while True:
        denom = (2 * k + 1) * power
        t_floor = scale // denom
        t_ceil = -(-scale // denom)
        if t_floor == 0:
            # Remainder is at most this term, which is below one unit
            lo -= t_ceil
            hi += t_ceil
            return lo, hi
        if k % 2 == 0:
            lo += t_floor
            hi += t_ceil
        else:
            lo -= t_ceil
            hi -= t_floor
        power *= m_sq
        k += 1


@lru_cache(maxsize=64)
def pi_enclosure(digits: int) -> PiEnclosure:
    """
    Certified rational enclosure of pi with width at most 10^-digits.

    Uses pi/4 = 4*arctan(1/5) - arctan(1/239) in scaled integer arithmetic,
    then rounds the endpoints outward to the grid 10^-(digits+1).

    Args:
        digits: Requested decimal accuracy, 1 <= digits <= 1000

    Returns:
        PiEnclosure whose interval provably contains pi

    Raises:
        DomainError: if digits is out of range
    """
    if isinstance(digits, bool) or not isinstance(digits, int):
        raise DomainError(f"digits must be an integer, got {digits!r}")
    if not 1 <= digits <= MAX_PI_DIGITS:
        raise DomainError(f"digits must lie in [1, {MAX_PI_DIGITS}], got {digits}")

    guard = 8 + len(str(digits))
    precision = digits + 1 + guard
    scale = 10**precision

    lo5, hi5 = _arctan_inverse_bounds(5, scale)
    lo239, hi239 = _arctan_inverse_bounds(239, scale)
    pi_lo = 16 * lo5 - 4 * hi239
    pi_hi = 16 * hi5 - 4 * lo239

    # Outward rounding onto the 10^-(digits+1) grid
    shrink = 10**guard
    grid_lo = pi_lo // shrink
    grid_hi = -(-pi_hi // shrink)
    grid = 10 ** (digits + 1)
    interval = RatInterval(lo=Fraction(grid_lo, grid), hi=Fraction(grid_hi, grid))
    logger.debug("pi enclosure at %d digits: [%s, %s]", digits, grid_lo, grid_hi)
    return PiEnclosure(interval=interval, digits=digits)


def pi_power_interval(half_pi_power: int, enc: PiEnclosure) -> RatInterval:
    """Enclose pi^(half_pi_power / 2)."""
    whole, odd = divmod(half_pi_power, 2)
    interval = enc.interval**whole
    if odd:
        interval = interval * sqrt_interval(enc.interval, enc.digits + 3)
    return interval


def scalar_to_interval(x: PiScalar, enc: PiEnclosure) -> RatInterval:
    """
    Enclose the real value of a PiScalar.

    Args:
        x: The scalar to enclose
        enc: Enclosure of pi used for the pi-power part

    Returns:
        Outward-conservative rational interval containing coeff * pi^(k/2)
    """
    if x.half_pi_power == 0:
        return RatInterval.point(x.coeff)
    return pi_power_interval(x.half_pi_power, enc).scale(x.coeff)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def scalar_compare(a: PiScalar, b: PiScalar, enc: PiEnclosure) -> Comparison:
    """
    Order two PiScalars.

    Equal powers of pi and sign differences are decided exactly; otherwise the
    enclosures must be disjoint for a certified LESS or GREATER.  Overlapping
    enclosures give UNDECIDED and the caller decides whether to retry with
    more digits.
    """
    if a.half_pi_power == b.half_pi_power:
        if a.coeff == b.coeff:
            return Comparison.EQUAL
        return Comparison.LESS if a.coeff < b.coeff else Comparison.GREATER

    sa, sb = _sign(a.coeff), _sign(b.coeff)
    if sa != sb:
        return Comparison.LESS if sa < sb else Comparison.GREATER

    ia = scalar_to_interval(a, enc)
    ib = scalar_to_interval(b, enc)
    if ia.hi < ib.lo:
        return Comparison.LESS
    if ia.lo > ib.hi:
        return Comparison.GREATER
    return Comparison.UNDECIDED


def render_decimal(value: Rational, digits: int) -> str:
    """
    Render a rational with ``digits`` places after the point.

    Truncates toward zero, so the rendering never overstates magnitude.
    """
    if digits < 0:
        raise DomainError("digits must be nonnegative")
    q = Fraction(value)
    magnitude = abs(q)
    scaled = magnitude.numerator * 10**digits // magnitude.denominator
    whole, frac = divmod(scaled, 10**digits)
    sign = "-" if q < 0 and scaled else ""
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def render_interval(interval: RatInterval, digits: int) -> str:
    return f"[{render_decimal(interval.lo, digits)}, {render_decimal(interval.hi, digits)}]"


def render_scalar(x: PiScalar) -> str:
    """Lossless text form: "2/3", "1/2·√π", "3/16·π", "1/4·π^2", "1·π^(3/2)"."""
    k = x.half_pi_power
    coeff = str(x.coeff)
    if k == 0:
        return coeff
    if k == 1:
        pi_part = "√π"
    elif k == 2:
        pi_part = "π"
    elif k % 2 == 0:
        pi_part = f"π^{k // 2}"
    else:
        pi_part = f"π^({k}/2)"
    return f"{coeff}·{pi_part}"


_SCALAR_PATTERN = re.compile(
    r"^\s*(?P<coeff>-?\d+(?:/\d+)?)"
    r"(?:·(?:(?P<root>√π)|π(?:\^(?P<even>\d+)|\^\((?P<odd>\d+)/2\))?))?\s*$"
)


def parse_scalar(text: str) -> PiScalar:
    """Inverse of render_scalar."""
    match = _SCALAR_PATTERN.match(text)
    if match is None:
        raise DomainError(f"not a PiScalar rendering: {text!r}")
    coeff = Fraction(match.group("coeff"))
    if match.group("root"):
        k = 1
    elif match.group("even"):
        k = 2 * int(match.group("even"))
    elif match.group("odd"):
        k = int(match.group("odd"))
    elif "π" in text:
        k = 2
    else:
        k = 0
    return PiScalar.of(coeff, k)


def scalar_to_decimal(x: PiScalar, digits: int, enc: Optional[PiEnclosure] = None) -> str:
    """Decimal rendering of a PiScalar (midpoint of its enclosure, truncated)."""
    if enc is None:
        enc = pi_enclosure(min(digits + 3, MAX_PI_DIGITS))
    return render_decimal(scalar_to_interval(x, enc).midpoint, digits)
