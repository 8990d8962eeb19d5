"""
wallislab: certified enclosures and exact checks for Wallis's formula and the probability integral
"""

__version__ = "0.3.0"

import sys

# Exact renderings at n = 10^4 and beyond have numerators far past the
# default 4300-digit str/int conversion cap
sys.set_int_max_str_digits(0)

from .exact_core import (
    Comparison,
    PiEnclosure,
    PiScalar,
    RatInterval,
    pi_enclosure,
    render_decimal,
    render_scalar,
    scalar_compare,
    scalar_to_interval,
)
from .exceptions import (
    BoundViolation,
    DomainError,
    MixedPowerError,
    NegativeRadicandError,
    OperationCancelled,
    QuadratureBudgetExceeded,
    WallisLabError,
)
from .inequalities import CheckOutcome, Enclosure, Grade, Verdict
from .quadrature import IntegrandFamily, QuadResult, gauss_truncated, integrate
from .sequences import (
    ProductForm,
    SeqTable,
    VariationId,
    moment_integral,
    tabulate,
    variation_term,
    wallis_integral,
    wallis_product,
)

__all__ = [
    "BoundViolation",
    "CheckOutcome",
    "Comparison",
    "DomainError",
    "Enclosure",
    "Grade",
    "IntegrandFamily",
    "MixedPowerError",
    "NegativeRadicandError",
    "OperationCancelled",
    "PiEnclosure",
    "PiScalar",
    "ProductForm",
    "QuadResult",
    "QuadratureBudgetExceeded",
    "RatInterval",
    "SeqTable",
    "VariationId",
    "Verdict",
    "WallisLabError",
    "gauss_truncated",
    "integrate",
    "moment_integral",
    "pi_enclosure",
    "render_decimal",
    "render_scalar",
    "scalar_compare",
    "scalar_to_interval",
    "tabulate",
    "variation_term",
    "wallis_integral",
    "wallis_product",
]
