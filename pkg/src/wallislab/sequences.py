"""
Exact generators for the Wallis product, its variations and the reduction-formula integrals
"""

import logging
import threading
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from .exact_core import (
    HALF_PI,
    MAX_PI_DIGITS,
    ONE,
    ExactRational,
    PiEnclosure,
    PiScalar,
    RatInterval,
    pi_enclosure,
    render_decimal,
    render_scalar,
    scalar_to_interval,
    sqrt_interval,
)
from .exceptions import DomainError, OperationCancelled

logger = logging.getLogger(__name__)

# Above this many factors the products switch to balanced product trees
TREE_THRESHOLD = 10_000


class ProductForm(str, Enum):
    PAIRED = "paired"
    SQUARED_OVER_ODD = "squared_over_odd"
    SQUARED_TIMES_ODD = "squared_times_odd"


class VariationId(str, Enum):
    V1 = "v1"
    V2 = "v2"
    V3 = "v3"
    V4 = "v4"
    V5 = "v5"


class CancellationToken:
    """Cooperative cancellation flag checked between product factors."""

    def __init__(self) -> None:
        self._event = threading.Event()

    def cancel(self) -> None:
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def check(self, completed: int) -> None:
        if self._event.is_set():
            raise OperationCancelled(completed)


class VariationTerm(BaseModel):
    """
    n-th term of a variation, kept exact as rational * sqrt(radicand) * pi^(k/2).

    Squaring removes every square root, so ``squared()`` is an exact PiScalar.
    """

    model_config = ConfigDict(frozen=True)

    variation: VariationId
    n: int = Field(..., ge=1)
    rational: ExactRational
    radicand: ExactRational
    half_pi_power: int = Field(0, ge=0, le=1)

    def squared(self) -> PiScalar:
        return PiScalar.of(self.rational**2 * self.radicand, 2 * self.half_pi_power)

    def interval(self, enc: PiEnclosure) -> RatInterval:
        """Enclosure of the (positive) term value."""
        return sqrt_interval(scalar_to_interval(self.squared(), enc), enc.digits + 3)

    def render(self) -> str:
        text = str(self.rational)
        if self.radicand != 1:
            text += f"·√({self.radicand})"
        if self.half_pi_power:
            text += "·√π"
        return text


class VariationTarget(BaseModel):
    """Limit of a variation: ``scalar``, or its reciprocal when ``inverse`` is set."""

    model_config = ConfigDict(frozen=True)

    variation: VariationId
    scalar: PiScalar
    inverse: bool = False
    label: str

    def interval(self, enc: PiEnclosure) -> RatInterval:
        interval = scalar_to_interval(self.scalar, enc)
        return interval.reciprocal() if self.inverse else interval


_TARGETS: Dict[VariationId, Tuple[PiScalar, bool, str]] = {
    VariationId.V1: (PiScalar.of(1, 1), False, "√π"),
    VariationId.V2: (PiScalar.of(Fraction(1, 2), 1), False, "√π/2"),
    VariationId.V3: (PiScalar.of(1, 1), True, "1/√π"),
    VariationId.V4: (PiScalar.of(Fraction(1, 2), 2), True, "2/π"),
    VariationId.V5: (ONE, False, "1"),
}


class SeqRow(BaseModel):
    """One row of a convergence table."""

    kind: Literal["seq_row"] = "seq_row"
    n: int
    exact: str
    decimal: str
    target: Optional[str] = None
    abs_error: Optional[str] = None


class SeqTable(BaseModel):
    """A tabulated sequence ready for CSV, JSON or HTML emission."""

    kind: Literal["seq_table"] = "seq_table"
    name: str
    digits: int = Field(..., ge=1)
    truncation: Literal["toward-zero"] = "toward-zero"
    rows: List[SeqRow] = Field(default_factory=list)


class CertifiedDecimal(BaseModel):
    """A decimal value with the certified interval it was read from."""

    model_config = ConfigDict(frozen=True)

    value: Decimal
    interval: RatInterval
    error_bound: ExactRational


def _require_index(n: int, minimum: int, name: str = "n") -> None:
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {n}")


def _tree_product(
    values: Sequence[int],
    cancel: Optional[CancellationToken] = None,
    lo: int = 0,
    hi: Optional[int] = None,
) -> int:
    """Balanced product of values[lo:hi]; the token is checked at every leaf."""
    if hi is None:
        hi = len(values)
    if hi - lo <= 8:
        if cancel is not None:
            cancel.check(lo)
        result = 1
        for v in values[lo:hi]:
            result *= v
        return result
    mid = (lo + hi) // 2
    return _tree_product(values, cancel, lo, mid) * _tree_product(values, cancel, mid, hi)


def _accumulate(
    factors: Iterator[Fraction], cancel: Optional[CancellationToken]
) -> Fraction:
    result = Fraction(1)
    for done, factor in enumerate(factors):
        if cancel is not None:
            cancel.check(done)
        result *= factor
    return result


def _even_over_odd(n: int, cancel: Optional[CancellationToken], tree: bool) -> Fraction:
    """P_n = (2/1)(4/3)...(2n/(2n-1))."""
    if tree:
        return Fraction(
            _tree_product([2 * k for k in range(1, n + 1)], cancel),
            _tree_product([2 * k - 1 for k in range(1, n + 1)], cancel),
        )
    return _accumulate((Fraction(2 * k, 2 * k - 1) for k in range(1, n + 1)), cancel)


def _even_over_next_odd(
    n: int, cancel: Optional[CancellationToken], tree: bool
) -> Fraction:
    """Q_n = (2/3)(4/5)...(2n/(2n+1))."""
    if tree:
        return Fraction(
            _tree_product([2 * k for k in range(1, n + 1)], cancel),
            _tree_product([2 * k + 1 for k in range(1, n + 1)], cancel),
        )
    return _accumulate((Fraction(2 * k, 2 * k + 1) for k in range(1, n + 1)), cancel)


def wallis_product(
    n: int,
    form: ProductForm = ProductForm.PAIRED,
    cancel: Optional[CancellationToken] = None,
    tree: Optional[bool] = None,
) -> Fraction:
    """
    Exact partial Wallis product a_n = prod_{k<=n} (2k/(2k-1)) (2k/(2k+1)).

    Args:
        n: Number of factor pairs, n >= 1
        form: Which of the three equivalent expressions to evaluate
        cancel: Optional token checked between factors
        tree: Force (True) or forbid (False) the balanced product tree;
            by default it is used when n exceeds TREE_THRESHOLD

    Returns:
        a_n as a reduced fraction
    """
    _require_index(n, 1)
    form = ProductForm(form)
    use_tree = n > TREE_THRESHOLD if tree is None else tree

    if form is ProductForm.PAIRED:
        if use_tree:
            return Fraction(
                _tree_product([4 * k * k for k in range(1, n + 1)], cancel),
                _tree_product([(2 * k - 1) * (2 * k + 1) for k in range(1, n + 1)], cancel),
            )
        return _accumulate(
            (Fraction(4 * k * k, (2 * k - 1) * (2 * k + 1)) for k in range(1, n + 1)),
            cancel,
        )
    if form is ProductForm.SQUARED_OVER_ODD:
        return _even_over_odd(n, cancel, use_tree) ** 2 / (2 * n + 1)
    return _even_over_next_odd(n, cancel, use_tree) ** 2 * (2 * n + 1)


def iter_wallis_products(
    max_n: int, form: ProductForm = ProductForm.PAIRED
) -> Iterator[Tuple[int, Fraction]]:
    """Yield (n, a_n) for n = 1..max_n, each form built incrementally."""
    _require_index(max_n, 1, "max_n")
    form = ProductForm(form)
    paired = Fraction(1)
    p = Fraction(1)
    q = Fraction(1)
    for n in range(1, max_n + 1):
        if form is ProductForm.PAIRED:
            paired *= Fraction(4 * n * n, (2 * n - 1) * (2 * n + 1))
            yield n, paired
        elif form is ProductForm.SQUARED_OVER_ODD:
            p *= Fraction(2 * n, 2 * n - 1)
            yield n, p * p / (2 * n + 1)
        else:
            q *= Fraction(2 * n, 2 * n + 1)
            yield n, q * q * (2 * n + 1)


def _variation_parts(variation: VariationId, n: int, rational: Fraction) -> VariationTerm:
    if variation is VariationId.V1:
        return VariationTerm(variation=variation, n=n, rational=rational, radicand=Fraction(1, n))
    if variation is VariationId.V4:
        return VariationTerm(variation=variation, n=n, rational=rational, radicand=Fraction(1))
    return VariationTerm(
        variation=variation,
        n=n,
        rational=rational,
        radicand=Fraction(n),
        half_pi_power=1 if variation is VariationId.V5 else 0,
    )


def _parse_variation(v: Union[VariationId, str]) -> VariationId:
    try:
        return VariationId(v.lower() if isinstance(v, str) else v)
    except ValueError as e:
        raise DomainError(f"unknown variation {v!r}") from e


def iter_variation_terms(
    v: Union[VariationId, str], max_n: int
) -> Iterator[VariationTerm]:
    """Yield the terms of a variation for n = 1..max_n."""
    variation = _parse_variation(v)
    _require_index(max_n, 1, "max_n")
    running = Fraction(1)
    for n in range(1, max_n + 1):
        if variation is VariationId.V1:
            running *= Fraction(2 * n, 2 * n - 1)
        elif variation is VariationId.V2:
            running *= Fraction(2 * n, 2 * n + 1)
        elif variation is VariationId.V4:
            running *= 1 - Fraction(1, (2 * n) ** 2)
        else:
            # V3 and V5 share (1/2)(3/4)...((2n-1)/(2n)) = C(2n,n)/4^n
            running *= Fraction(2 * n - 1, 2 * n)
        yield _variation_parts(variation, n, running)


def variation_term(v: Union[VariationId, str], n: int) -> VariationTerm:
    """
    Exact n-th term of one of the five variations of Wallis's formula.

    V1: P_n/sqrt(n), V2: sqrt(n) Q_n, V3: sqrt(n)/P_n, V4: prod (1 - 1/(2k)^2),
    V5: C(2n,n) sqrt(pi n)/4^n, with P_n and Q_n the half products of a_n.
    """
    variation = _parse_variation(v)
    _require_index(n, 1)
    if variation is VariationId.V1:
        rational = _even_over_odd(n, None, n > TREE_THRESHOLD)
    elif variation is VariationId.V2:
        rational = _even_over_next_odd(n, None, n > TREE_THRESHOLD)
    elif variation is VariationId.V3:
        rational = 1 / _even_over_odd(n, None, n > TREE_THRESHOLD)
    elif variation is VariationId.V4:
        rational = 1 / wallis_product(n)
    else:
        rational = Fraction(central_binomial(n), 4**n)
    return _variation_parts(variation, n, rational)


def variation_target(v: Union[VariationId, str]) -> VariationTarget:
    variation = _parse_variation(v)
    scalar, inverse, label = _TARGETS[variation]
    return VariationTarget(variation=variation, scalar=scalar, inverse=inverse, label=label)


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 0!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial undefined for {n}")
    result = 1
    for k in range(n, 0, -2):
        result *= k
    return result


def wallis_integral(n: int) -> PiScalar:
    """
    Exact I_n, the integral of cos^n over [0, pi/2], by the reduction formula.

    Starts from I_0 = pi/2 and I_1 = 1 and applies I_m = (m-1)/m I_{m-2}.
    """
    _require_index(n, 0)
    if n % 2 == 0:
        value = HALF_PI
        start = 2
    else:
        value = ONE
        start = 3
    for m in range(start, n + 1, 2):
        value = value * Fraction(m - 1, m)
    return value


def iter_wallis_integrals(max_n: int) -> Iterator[Tuple[int, PiScalar]]:
    """Yield (n, I_n) for n = 0..max_n."""
    _require_index(max_n, 0, "max_n")
    previous = {0: HALF_PI, 1: ONE}
    for n in range(max_n + 1):
        if n >= 2:
            previous[n % 2] = previous[n % 2] * Fraction(n - 1, n)
        yield n, previous[n % 2]


def wallis_integral_closed_form(n: int) -> PiScalar:
    """
    I_n from the closed forms: I_2m = (pi/2)(2m-1)!!/(2m)!!, I_2m+1 = (2m)!!/(2m+1)!!.
    """
    _require_index(n, 0)
    m, odd = divmod(n, 2)
    if odd:
        return PiScalar.of(Fraction(double_factorial(2 * m), double_factorial(2 * m + 1)))
    return HALF_PI * Fraction(double_factorial(2 * m - 1), double_factorial(2 * m))


# E_0 = sqrt(pi)/2 is built into the representation; everything else follows
# from E_1 = 1/2 and E_{n+2} = (n+1)/2 E_n.
MOMENT_E0 = PiScalar.of(Fraction(1, 2), 1)
MOMENT_E1 = PiScalar.of(Fraction(1, 2))


def moment_integral(n: int) -> PiScalar:
    """Exact E_n, the integral of x^n exp(-x^2) over [0, inf), by the reduction formula."""
    _require_index(n, 0)
    value = MOMENT_E0 if n % 2 == 0 else MOMENT_E1
    for j in range(n % 2, n - 1, 2):
        value = value * Fraction(j + 1, 2)
    return value


def iter_moment_integrals(max_n: int) -> Iterator[Tuple[int, PiScalar]]:
    """Yield (n, E_n) for n = 0..max_n."""
    _require_index(max_n, 0, "max_n")
    previous = {0: MOMENT_E0, 1: MOMENT_E1}
    for n in range(max_n + 1):
        if n >= 2:
            previous[n % 2] = previous[n % 2] * Fraction(n - 1, 2)
        yield n, previous[n % 2]


def moment_integral_closed_form(n: int) -> PiScalar:
    """E_2m = (2m-1)!!/2^m E_0 and E_2m+1 = m!/2."""
    _require_index(n, 0)
    m, odd = divmod(n, 2)
    if odd:
        return PiScalar.of(Fraction(factorial(m), 2))
    return MOMENT_E0 * Fraction(double_factorial(2 * m - 1), 2**m)


def central_binomial(n: int) -> int:
    """C(2n, n)."""
    _require_index(n, 0)
    return comb(2 * n, n)


def central_binomial_ratio(n: int, digits: int) -> CertifiedDecimal:
    """
    C(2n,n) sqrt(pi n) / 4^n to ``digits`` places.

    The square of the ratio is the exact PiScalar C(2n,n)^2 n pi / 16^n; its
    enclosure is square-rooted outward, so the error bound comes only from the
    pi enclosure, the root rounding and the final truncation.
    """
    _require_index(n, 1)
    _require_index(digits, 1, "digits")
    c = central_binomial(n)
    squared = PiScalar.of(Fraction(c * c * n, 16**n), 2)
    enc = pi_enclosure(min(digits + 3, MAX_PI_DIGITS))
    interval = sqrt_interval(scalar_to_interval(squared, enc), digits + 3)
    text = render_decimal(interval.midpoint, digits)
    return CertifiedDecimal(
        value=Decimal(text),
        interval=interval,
        error_bound=interval.width / 2 + Fraction(1, 10**digits),
    )


SEQUENCE_NAMES = ("a_n", "I_n", "E_n", "v1", "v2", "v3", "v4", "v5", "binom_ratio")


def _table_source(
    sequence: str, max_n: int, enc: PiEnclosure
) -> Iterator[Tuple[int, str, RatInterval]]:
    """Yield (n, exact rendering, value enclosure) for a named sequence."""
    if sequence == "a_n":
        for n, value in iter_wallis_products(max_n):
            yield n, str(value), RatInterval.point(value)
    elif sequence == "I_n":
        for n, value in iter_wallis_integrals(max_n):
            yield n, render_scalar(value), scalar_to_interval(value, enc)
    elif sequence == "E_n":
        for n, value in iter_moment_integrals(max_n):
            yield n, render_scalar(value), scalar_to_interval(value, enc)
    elif sequence == "binom_ratio":
        for term in iter_variation_terms(VariationId.V5, max_n):
            n = term.n
            exact = f"{central_binomial(n)}/{4**n}·√({n}π)"
            yield n, exact, term.interval(enc)
    else:
        for term in iter_variation_terms(sequence, max_n):
            yield term.n, term.render(), term.interval(enc)


def _table_target(sequence: str, enc: PiEnclosure) -> Optional[Tuple[str, RatInterval]]:
    if sequence == "a_n":
        return "π/2", scalar_to_interval(HALF_PI, enc)
    if sequence == "binom_ratio":
        return "1", RatInterval.point(1)
    if sequence in {"v1", "v2", "v3", "v4", "v5"}:
        target = variation_target(sequence)
        return target.label, target.interval(enc)
    return None


def tabulate(sequence: str, max_n: int, step: int = 1, digits: int = 10) -> SeqTable:
    """
    Tabulate a named sequence.

    Args:
        sequence: One of SEQUENCE_NAMES
        max_n: Last index to include, max_n >= 1
        step: Index stride between emitted rows
        digits: Places after the decimal point in renderings

    Returns:
        SeqTable with exact renderings, truncated decimals and, where the
        limit is known, the distance to it
    """
    if sequence not in SEQUENCE_NAMES:
        raise DomainError(
            f"unknown sequence {sequence!r}; expected one of {', '.join(SEQUENCE_NAMES)}"
        )
    _require_index(max_n, 1, "max_n")
    _require_index(step, 1, "step")
    _require_index(digits, 1, "digits")

    enc = pi_enclosure(min(digits + 3, MAX_PI_DIGITS))
    target = _table_target(sequence, enc)
    start = 0 if sequence in {"I_n", "E_n"} else 1

    rows = []
    for n, exact, interval in _table_source(sequence, max_n, enc):
        if (n - start) % step:
            continue
        row = SeqRow(n=n, exact=exact, decimal=render_decimal(interval.midpoint, digits))
        if target is not None:
            label, target_interval = target
            error = abs(interval.midpoint - target_interval.midpoint)
            row = row.model_copy(
                update={"target": label, "abs_error": render_decimal(error, digits)}
            )
        rows.append(row)

    logger.debug("tabulated %s up to n=%d (%d rows)", sequence, max_n, len(rows))
    return SeqTable(name=sequence, digits=digits, rows=rows)
