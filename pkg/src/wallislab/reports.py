"""
Report envelope shared by every CLI command, with JSON and CSV emitters
"""

import csv
import io
import os
import tempfile
from datetime import datetime, timezone
from typing import Annotated, Any, Dict, Iterable, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .exact_core import ExactRational
from .inequalities import CheckOutcome, Enclosure, Verdict
from .ode_probe import ConservationReport
from .quadrature import QuadResult
from .sequences import SeqTable

ParameterValue = Union[str, int, float, bool, None]


class PiEstimate(BaseModel):
    """A point estimate of pi from a convergent sequence."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["estimate"] = "estimate"
    method: str
    n: int
    value: ExactRational
    decimal: str
    abs_error: str = Field(..., description="distance to the Machin midpoint, truncated")


class IntegralResult(BaseModel):
    """Value of the integral of exp(-x^2) over [0, t]."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["integral"] = "integral"
    t: str
    method: str
    result: QuadResult
    decimal: str
    enclosure: Optional[Enclosure] = None


Record = Annotated[
    Union[Enclosure, PiEstimate, CheckOutcome, ConservationReport, IntegralResult],
    Field(discriminator="kind"),
]


class ReportEnvelope(BaseModel):
    """
    Self-describing output of one command.

    ``parameters`` echoes every input; infinite values are stored as the
    string "inf".
    """

    command: str
    parameters: Dict[str, ParameterValue]
    generated_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    results: Union[SeqTable, List[Record]]
    summary: Optional[Dict[str, int]] = None
    decimal_policy: Literal["truncate-toward-zero"] = "truncate-toward-zero"
    artifact_version: str = __version__

    def verdicts(self) -> List[Verdict]:
        found = []
        if isinstance(self.results, list):
            for record in self.results:
                if isinstance(record, CheckOutcome):
                    found.append(record.verdict)
                elif isinstance(record, ConservationReport):
                    found.append(Verdict.HOLDS if record.within_tolerance else Verdict.FAILS)
        return found


def report_schema() -> Dict[str, Any]:
    return ReportEnvelope.model_json_schema()


def to_json(report: ReportEnvelope) -> str:
    return report.model_dump_json(indent=2)


def _flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def to_csv(report: ReportEnvelope) -> str:
    """
    CSV of the report results.

    Tables use the columns n,exact,decimal,target,abs_error; other records are
    flattened with dotted column names for nested values.
    """
    buffer = io.StringIO()
    if isinstance(report.results, SeqTable):
        columns = ["n", "exact", "decimal", "target", "abs_error"]
        rows: Iterable[Dict[str, Any]] = (
            row.model_dump(mode="json", include=set(columns)) for row in report.results.rows
        )
    else:
        rows = [_flatten(record.model_dump(mode="json")) for record in report.results]
        columns = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)

    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: "" if value is None else value for key, value in row.items()})
    return buffer.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write text to path through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".wallislab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise
