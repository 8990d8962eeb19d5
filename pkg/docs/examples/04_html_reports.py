"""
Example 4: HTML Reports

Builds report envelopes by hand and writes them as themed HTML pages.
"""

from wallislab.html_renderer import render_report_html
from wallislab.reports import ReportEnvelope, to_csv, write_atomic
from wallislab.sequences import tabulate
from wallislab.suites import run_suite, summarize


def main():
    table = ReportEnvelope(
        command="table",
        parameters={"sequence": "v2", "max_n": 50, "step": 5, "digits": 12},
        results=tabulate("v2", 50, step=5, digits=12),
    )
    write_atomic("v2_table.html", render_report_html(table, theme="light"))
    write_atomic("v2_table.csv", to_csv(table))

    records = run_suite("squeeze", 10)
    checks = ReportEnvelope(
        command="verify",
        parameters={"suite": "squeeze", "max_n": 10},
        results=records,
        summary={verdict.value: count for verdict, count in summarize(records).items()},
    )
    write_atomic("squeeze_suite.html", render_report_html(checks, theme="dark"))
    print("wrote v2_table.html, v2_table.csv and squeeze_suite.html")


if __name__ == "__main__":
    main()
