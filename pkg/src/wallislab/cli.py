"""
Command-line interface for wallislab.

Usage:
    wallislab pi --terms 10 --method wallis
    wallislab table --sequence a_n --max-n 3
    wallislab verify --suite all --max-n 20 --tol 1e-9
    wallislab erf --t inf --tol 1e-10
    wallislab schema

Exit codes: 0 success, 1 a FAILS verdict or computation error, 2 invalid
input, 3 UNDECIDED verdicts without any FAILS.
"""

import functools
import json
import logging
import math
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Union

import click

from . import __version__
from .config import Settings, get_settings
from .exact_core import (
    MAX_PI_DIGITS,
    pi_enclosure,
    render_decimal,
    sqrt_interval,
)
from .exceptions import DomainError, WallisLabError
from .html_renderer import render_report_html
from .inequalities import (
    Enclosure,
    EnclosureTarget,
    Verdict,
    pi_enclosure_moments,
    pi_enclosure_wallis,
    probability_integral_enclosure,
)
from .ode_probe import REFERENCE_DIGITS, probability_integral_via_F
from .quadrature import MIN_TOL, gauss_truncated
from .reports import (
    IntegralResult,
    PiEstimate,
    ReportEnvelope,
    report_schema,
    to_csv,
    to_json,
    write_atomic,
)
from .sequences import SEQUENCE_NAMES, VariationId, tabulate, variation_term
from .suites import SUITES, run_suite, summarize

__all__ = [
    "cli",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_UNDECIDED = 3

FORMATS = ("json", "csv", "html")


class NonNegativeReal(click.ParamType):
    """A float >= 0, or "inf"."""

    name = "t"

    def convert(
        self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]
    ) -> float:
        if isinstance(value, float):
            t = value
        else:
            text = str(value).strip().lower()
            if text in {"inf", "infinity", "+inf"}:
                return math.inf
            try:
                t = float(text)
            except ValueError:
                self.fail(f"{value!r} is not a real number or 'inf'", param, ctx)
        if math.isnan(t) or t < 0:
            self.fail(f"t must be >= 0 or 'inf', got {value!r}", param, ctx)
        return t


def _format_t(t: float) -> str:
    return "inf" if math.isinf(t) else repr(t)


def output_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """--format, --out and --theme, shared by every report command."""

    @click.option(
        "--format",
        "fmt",
        type=click.Choice(FORMATS),
        default="json",
        show_default=True,
        help="Output format",
    )
    @click.option(
        "--out", "-o", type=click.Path(dir_okay=False), help="Write to a file instead of stdout"
    )
    @click.option("--theme", type=click.Choice(["light", "dark"]), help="Theme for --format html")
    @click.option(
        "--css",
        type=click.Path(exists=True, dir_okay=False),
        help="Stylesheet for --format html, replacing the theme",
    )
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        return func(*args, **kwargs)

    return wrapper


def handle_errors(func: Callable[..., Any]) -> Callable[..., Any]:
    """Map library errors to a one-line message on stderr and the exit code contract."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except DomainError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_USAGE)
        except WallisLabError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_FAILS)

    return wrapper


def emit(
    report: ReportEnvelope,
    fmt: str,
    out: Optional[str],
    theme: Optional[str] = None,
    css: Optional[str] = None,
) -> None:
    """Serialize a report and write it to ``out`` (atomically) or stdout."""
    if fmt == "csv":
        text = to_csv(report)
    elif fmt == "html":
        custom_css = None
        if css:
            with open(css, encoding="utf-8") as handle:
                custom_css = handle.read()
        text = render_report_html(report, theme=theme, custom_css=custom_css)
    else:
        text = to_json(report)

    if out:
        write_atomic(out, text if text.endswith("\n") else text + "\n")
        logger.info("wrote %s report to %s", report.command, out)
    else:
        click.echo(text.rstrip("\n"))


def exit_code(verdicts: List[Verdict]) -> int:
    if Verdict.FAILS in verdicts:
        return EXIT_FAILS
    if Verdict.UNDECIDED in verdicts:
        return EXIT_UNDECIDED
    return EXIT_OK


@click.group()
@click.version_option(version=__version__, prog_name="wallislab")
@click.option("--verbose", "-v", is_flag=True, help="Log debug output to stderr")
@click.pass_context
def cli(ctx: click.Context, verbose: bool) -> None:
    """Certified enclosures and exact checks for Wallis's formula."""
    try:
        settings = get_settings()
    except DomainError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_USAGE)

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else settings.log_level_value,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    ctx.obj = settings


@cli.command()
@click.option(
    "--terms",
    "-n",
    type=click.IntRange(min=1),
    default=10,
    show_default=True,
    help="Number of factors",
)
@click.option(
    "--method",
    type=click.Choice(["wallis", "variation4", "machin", "moments"]),
    default="wallis",
    show_default=True,
)
@click.option(
    "--digits",
    type=click.IntRange(1, MAX_PI_DIGITS),
    default=10,
    show_default=True,
    help="Places after the decimal point",
)
@output_options
@handle_errors
def pi(
    terms: int,
    method: str,
    digits: int,
    fmt: str,
    out: Optional[str],
    theme: Optional[str],
    css: Optional[str],
) -> None:
    """Enclose or estimate pi."""
    record: Union[Enclosure, PiEstimate]
    if method == "wallis":
        record = pi_enclosure_wallis(terms).with_decimals(digits)
    elif method == "moments":
        record = pi_enclosure_moments(terms).with_decimals(digits)
    elif method == "machin":
        machin = pi_enclosure(digits).interval
        enclosure = Enclosure.between(EnclosureTarget.PI, digits, machin.lo, machin.hi)
        record = enclosure.with_decimals(digits + 1)
    else:
        value = 2 / variation_term(VariationId.V4, terms).rational
        reference = pi_enclosure(min(digits + 3, MAX_PI_DIGITS)).interval.midpoint
        record = PiEstimate(
            method=method,
            n=terms,
            value=value,
            decimal=render_decimal(value, digits),
            abs_error=render_decimal(abs(value - reference), digits),
        )

    report = ReportEnvelope(
        command="pi",
        parameters={"terms": terms, "method": method, "digits": digits},
        results=[record],
    )
    emit(report, fmt, out, theme, css)


@cli.command()
@click.option("--sequence", "-s", type=click.Choice(list(SEQUENCE_NAMES)), required=True)
@click.option("--max-n", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--step", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--digits", type=click.IntRange(1, MAX_PI_DIGITS - 3), default=10, show_default=True)
@output_options
@handle_errors
def table(
    sequence: str,
    max_n: int,
    step: int,
    digits: int,
    fmt: str,
    out: Optional[str],
    theme: Optional[str],
    css: Optional[str],
) -> None:
    """Tabulate a sequence with its distance to the limit."""
    report = ReportEnvelope(
        command="table",
        parameters={"sequence": sequence, "max_n": max_n, "step": step, "digits": digits},
        results=tabulate(sequence, max_n, step=step, digits=digits),
    )
    emit(report, fmt, out, theme, css)


@cli.command()
@click.option("--suite", type=click.Choice(list(SUITES)), default="all", show_default=True)
@click.option("--max-n", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True, help="Quadrature tolerance")
@click.option(
    "--jobs",
    "-j",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="Worker processes",
)
@output_options
@handle_errors
def verify(
    suite: str,
    max_n: int,
    tol: float,
    jobs: int,
    fmt: str,
    out: Optional[str],
    theme: Optional[str],
    css: Optional[str],
) -> None:
    """Run a verification suite."""
    if not math.isfinite(tol) or tol < MIN_TOL:
        raise click.BadParameter(f"must be a finite number >= {MIN_TOL}", param_hint="--tol")

    records = run_suite(suite, max_n, tol=tol, jobs=jobs)
    counts = summarize(records)
    summary: Dict[str, int] = {verdict.value: count for verdict, count in counts.items()}
    report = ReportEnvelope(
        command="verify",
        parameters={"suite": suite, "max_n": max_n, "tol": tol, "jobs": jobs},
        results=list(records),
        summary=summary,
    )
    emit(report, fmt, out, theme, css)
    click.echo(
        f"{suite}: " + ", ".join(f"{count} {name}" for name, count in summary.items()),
        err=True,
    )
    sys.exit(exit_code(report.verdicts()))


def _squeeze_index(t: float) -> int:
    n = round(t * t) if math.isfinite(t) else 0
    if n < 2 or abs(t * t - n) > 1e-9 * n:
        raise click.BadParameter(
            "--method squeeze needs t = sqrt(n) with n >= 2 an integer", param_hint="--t"
        )
    return n


def _half_sqrt_pi(digits: int) -> Enclosure:
    root = sqrt_interval(pi_enclosure(digits + 2).interval, digits + 2).scale(Fraction(1, 2))
    return Enclosure.between(
        EnclosureTarget.PROBABILITY_INTEGRAL, digits, root.lo, root.hi, upper_limit="inf"
    ).with_decimals(digits)


@cli.command()
@click.option(
    "--t", "t", type=NonNegativeReal(), required=True, help="Upper limit, a real >= 0 or 'inf'"
)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option(
    "--method",
    type=click.Choice(["direct", "borwein", "squeeze"]),
    default="direct",
    show_default=True,
)
@click.option("--digits", type=click.IntRange(1, 60), default=10, show_default=True)
@output_options
@handle_errors
def erf(
    t: float,
    tol: float,
    method: str,
    digits: int,
    fmt: str,
    out: Optional[str],
    theme: Optional[str],
    css: Optional[str],
) -> None:
    """Integral of exp(-x^2) over [0, t]."""
    parameters: Dict[str, Union[str, int, float]] = {
        "t": _format_t(t),
        "tol": tol,
        "method": method,
        "digits": digits,
    }
    record: Union[Enclosure, IntegralResult]
    if method == "squeeze":
        record = probability_integral_enclosure(_squeeze_index(t)).with_decimals(digits)
    else:
        settings: Settings = click.get_current_context().obj or get_settings()
        if method == "borwein":
            result = probability_integral_via_F(t, tol, settings)
        else:
            result = gauss_truncated(t, tol, settings)
        record = IntegralResult(
            t=_format_t(t),
            method=method,
            result=result,
            decimal=render_decimal(Fraction(result.value), digits),
            enclosure=_half_sqrt_pi(REFERENCE_DIGITS) if math.isinf(t) else None,
        )

    report = ReportEnvelope(command="erf", parameters=parameters, results=[record])
    emit(report, fmt, out, theme, css)


@cli.command()
def schema() -> None:
    """Print the JSON schema of the report envelope."""
    click.echo(json.dumps(report_schema(), indent=2))


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
