"""
HTML renderer for report envelopes and their records
"""

from datetime import date, datetime
from enum import Enum
from html import escape
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel

from .reports import ReportEnvelope
from .sequences import SeqTable

TABLE_COLUMNS = ["n", "exact", "decimal", "target", "abs_error"]


def render_report_html(
    report: ReportEnvelope,
    theme: Optional[str] = None,
    max_depth: Optional[int] = None,
    custom_css: Optional[str] = None,
) -> str:
    """
    Render a report as a self-contained HTML page.

    Args:
        report: The envelope to render
        theme: "light" or "dark"; the default styling when omitted
        max_depth: Maximum depth for nested records
        custom_css: Stylesheet used instead of the theme

    Returns:
        HTML document with the parameters table followed by the results
    """
    if custom_css:
        css = custom_css
    else:
        css = _get_theme_css(theme) if theme else _get_default_css()

    html_parts = [
        "<!DOCTYPE html>",
        '<html><head><meta charset="utf-8">',
        f"<title>wallislab {escape(report.command)}</title>",
        f"<style>{css}</style>",
        "</head><body>",
        '<div class="wallislab-report">',
        f'<h2 class="model-title">{escape(report.command)}</h2>',
        '<div class="model-content">',
        _render_mapping(
            {
                "generated_at": report.generated_at,
                "artifact_version": report.artifact_version,
                "decimal_policy": report.decimal_policy,
            }
        ),
        '<h3 class="section-title">parameters</h3>',
        _render_mapping(report.parameters),
    ]
    if report.summary is not None:
        html_parts.append('<h3 class="section-title">summary</h3>')
        html_parts.append(_render_mapping(report.summary))

    html_parts.append('<h3 class="section-title">results</h3>')
    if isinstance(report.results, SeqTable):
        html_parts.append(_render_seq_table(report.results))
    else:
        for record in report.results:
            html_parts.append(model_to_html(record, include_css=False, max_depth=max_depth))

    html_parts.append("</div></div></body></html>")
    return "".join(html_parts)


def model_to_html(
    model: BaseModel,
    include_css: bool = True,
    custom_css: Optional[str] = None,
    max_depth: Optional[int] = None,
) -> str:
    """
    Convert one record to an HTML block.

    Args:
        model: The pydantic model to convert
        include_css: Whether to include default CSS
        custom_css: Custom CSS to include instead of the default
        max_depth: Maximum depth for nested models

    Returns:
        HTML representation of the model
    """
    css = _get_default_css() if include_css and not custom_css else custom_css or ""

    html_parts = []
    if css:
        html_parts.append(f"<style>{css}</style>")

    verdict = getattr(model, "verdict", None)
    css_class = "report-record"
    if isinstance(verdict, Enum):
        css_class += f" verdict-{verdict.value.lower()}"

    html_parts.append(f'<div class="{css_class}">')
    html_parts.append(f'<h4 class="model-title">{escape(_record_title(model))}</h4>')
    html_parts.append(_render_model_fields(model, current_depth=0, max_depth=max_depth))
    html_parts.append("</div>")
    return "".join(html_parts)


def _record_title(model: BaseModel) -> str:
    name = getattr(model, "name", None) or getattr(model, "kind", None) or model.__class__.__name__
    n = getattr(model, "n", None)
    return f"{name} n={n}" if n is not None else str(name)


def _format_value(value: Any) -> str:
    if value is None:
        return "None"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, datetime):
        return value.isoformat()
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def _render_mapping(mapping: Dict[str, Any]) -> str:
    html_parts = ['<table class="model-fields">']
    for key, value in mapping.items():
        html_parts.append(
            f'<tr><th class="field-name">{escape(str(key))}</th>'
            f'<td class="field-value">{escape(_format_value(value))}</td></tr>'
        )
    html_parts.append("</table>")
    return "".join(html_parts)


def _render_model_fields(
    model: BaseModel, current_depth: int = 0, max_depth: Optional[int] = None
) -> str:
    """
    Render model fields recursively.

    Args:
        model: The record to render
        current_depth: Current nesting depth
        max_depth: Maximum allowed depth for nested models

    Returns:
        HTML table of the model fields
    """
    if max_depth is not None and current_depth > max_depth:
        return '<div class="model-summary">[Nested record, depth limit reached]</div>'

    html_parts = ['<table class="model-fields">']
    for name in type(model).model_fields:
        value = getattr(model, name)
        if value is None or name == "kind":
            continue
        html_parts.append("<tr>")
        html_parts.append(f'<th class="field-name">{escape(name)}</th>')

        if isinstance(value, BaseModel):
            if max_depth is None or current_depth < max_depth:
                nested = _render_model_fields(value, current_depth + 1, max_depth)
                html_parts.append(f'<td class="field-value field-nested">{nested}</td>')
            else:
                html_parts.append(
                    f'<td class="field-value">[Nested {value.__class__.__name__}]</td>'
                )
        elif isinstance(value, dict):
            html_parts.append(f'<td class="field-value field-nested">{_render_mapping(value)}</td>')
        elif isinstance(value, list):
            items = "".join(
                f'<div class="list-item">{escape(_format_value(item))}</div>' for item in value
            )
            html_parts.append(f'<td class="field-value field-list">{items}</td>')
        else:
            html_parts.append(f'<td class="field-value">{escape(_format_value(value))}</td>')
        html_parts.append("</tr>")

    html_parts.append("</table>")
    return "".join(html_parts)


def _render_seq_table(table: SeqTable, columns: Sequence[str] = TABLE_COLUMNS) -> str:
    header = "".join(f'<th class="field-name">{escape(c)}</th>' for c in columns)
    html_parts: List[str] = [
        f'<p class="table-caption">{escape(table.name)}, {table.digits} digits, '
        f"{escape(table.truncation)}</p>",
        f'<table class="model-fields seq-table"><tr>{header}</tr>',
    ]
    for row in table.rows:
        values = [getattr(row, c) for c in columns]
        cells = "".join(
            f'<td class="field-value">{escape("" if v is None else _format_value(v))}</td>'
            for v in values
        )
        html_parts.append(f"<tr>{cells}</tr>")
    html_parts.append("</table>")
    return "".join(html_parts)


def _get_default_css() -> str:
    return """
    .wallislab-report, .report-record {
        font-family: -apple-system, BlinkMacSystemFont, "Segoe UI", Roboto, Helvetica, Arial, sans-serif;
        border: 1px solid #ddd;
        border-radius: 4px;
        padding: 1rem;
        margin: 1rem 0;
    }
    .model-title {
        margin-top: 0;
        color: #333;
    }
    .section-title {
        color: #555;
        margin-bottom: 0.25rem;
    }
    .model-fields {
        border-collapse: collapse;
        width: 100%;
    }
    .model-fields th, .model-fields td {
        padding: 0.5rem;
        text-align: left;
        border-bottom: 1px solid #eee;
    }
    .field-name {
        font-weight: 600;
        color: #555;
    }
    .field-value {
        font-family: Menlo, Monaco, "Courier New", monospace;
    }
    .field-nested, .field-list {
        padding: 0;
    }
    .list-item {
        padding: 0.25rem 0;
    }
    .verdict-holds { border-left: 4px solid #3c9a5f; }
    .verdict-fails { border-left: 4px solid #d64545; }
    .verdict-undecided { border-left: 4px solid #d6a545; }
    """


def _get_theme_css(theme: str) -> str:
    """
    Get CSS for a specific theme.

    Args:
        theme: Theme name

    Returns:
        CSS for the theme; the default styling for unknown names
    """
    themes = {
        "light": """
        body { background-color: #fafafa; }
        .wallislab-report, .report-record {
            font-family: -apple-system, BlinkMacSystemFont, "Segoe UI", Roboto, Helvetica, Arial, sans-serif;
            border: 1px solid #e0e0e0;
            border-radius: 8px;
            padding: 1.25rem;
            margin: 1.25rem 0;
            box-shadow: 0 2px 5px rgba(0,0,0,0.05);
            background-color: #ffffff;
        }
        .model-title {
            margin-top: 0;
            font-size: 1.5rem;
            color: #333;
            border-bottom: 1px solid #f0f0f0;
            padding-bottom: 0.5rem;
        }
        .section-title { color: #444; }
        .model-fields { border-collapse: collapse; width: 100%; }
        .model-fields th, .model-fields td {
            padding: 0.75rem;
            text-align: left;
            border-bottom: 1px solid #f0f0f0;
        }
        .field-name { font-weight: 600; color: #444; background-color: #fafafa; }
        .field-value { font-family: Menlo, Monaco, "Courier New", monospace; color: #333; }
        .field-nested, .field-list { padding: 0; }
        .list-item { padding: 0.5rem 0; border-bottom: 1px solid #f5f5f5; }
        .verdict-holds { border-left: 4px solid #3c9a5f; }
        .verdict-fails { border-left: 4px solid #d64545; }
        .verdict-undecided { border-left: 4px solid #d6a545; }
        """,
        "dark": """
        body { background-color: #121212; }
        .wallislab-report, .report-record {
            font-family: -apple-system, BlinkMacSystemFont, "Segoe UI", Roboto, Helvetica, Arial, sans-serif;
            border: 1px solid #333;
            border-radius: 8px;
            padding: 1.25rem;
            margin: 1.25rem 0;
            box-shadow: 0 4px 6px rgba(0,0,0,0.2);
            background-color: #1e1e1e;
            color: #e0e0e0;
        }
        .model-title {
            margin-top: 0;
            font-size: 1.5rem;
            color: #e0e0e0;
            border-bottom: 1px solid #333;
            padding-bottom: 0.5rem;
        }
        .section-title { color: #a0a0a0; }
        .model-fields { border-collapse: collapse; width: 100%; }
        .model-fields th, .model-fields td {
            padding: 0.75rem;
            text-align: left;
            border-bottom: 1px solid #333;
        }
        .field-name { font-weight: 600; color: #a0a0a0; background-color: #252525; }
        .field-value { font-family: Menlo, Monaco, "Courier New", monospace; color: #e0e0e0; }
        .field-nested, .field-list { padding: 0; }
        .list-item { padding: 0.5rem 0; border-bottom: 1px solid #333; }
        .verdict-holds { border-left: 4px solid #4caf7a; }
        .verdict-fails { border-left: 4px solid #ef5f5f; }
        .verdict-undecided { border-left: 4px solid #e0b050; }
        """,
    }
    return themes.get(theme, _get_default_css())
