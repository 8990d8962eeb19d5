"""
Tests for the report envelope and its JSON and CSV emitters
"""

import csv
import io
import json
import os
import tempfile
import unittest

from wallislab import __version__
from wallislab.inequalities import (
    CheckOutcome,
    Grade,
    Verdict,
    check_stieltjes,
    pi_enclosure_wallis,
)
from wallislab.reports import (
    ReportEnvelope,
    report_schema,
    to_csv,
    to_json,
    write_atomic,
)
from wallislab.sequences import tabulate


def table_report():
    return ReportEnvelope(
        command="table",
        parameters={"sequence": "a_n", "max_n": 4, "step": 1, "digits": 6},
        results=tabulate("a_n", 4, digits=6),
    )


def check_report():
    undecided = CheckOutcome(name="spivak_sandwich", n=3, grade=Grade.NUMERIC, verdict=Verdict.UNDECIDED)
    return ReportEnvelope(
        command="verify",
        parameters={"suite": "stieltjes", "max_n": 2, "tol": 1e-9, "jobs": 1},
        results=[check_stieltjes(1), check_stieltjes(2), undecided],
        summary={"HOLDS": 2, "FAILS": 0, "UNDECIDED": 1},
    )


class TestEnvelope(unittest.TestCase):
    def test_metadata(self):
        report = table_report()
        self.assertEqual(report.artifact_version, __version__)
        self.assertEqual(report.decimal_policy, "truncate-toward-zero")
        self.assertIsNotNone(report.generated_at.tzinfo)

    def test_verdicts(self):
        self.assertEqual(check_report().verdicts(), [Verdict.HOLDS, Verdict.HOLDS, Verdict.UNDECIDED])
        self.assertEqual(table_report().verdicts(), [])

    def test_json_round_trip(self):
        for report in (table_report(), check_report()):
            restored = ReportEnvelope.model_validate_json(to_json(report))
            self.assertEqual(restored, report)

    def test_enclosure_json_uses_rational_strings(self):
        report = ReportEnvelope(command="pi", parameters={"terms": 1}, results=[pi_enclosure_wallis(1)])
        data = json.loads(to_json(report))
        self.assertEqual(data["results"][0]["lo"], "8/3")
        self.assertEqual(data["results"][0]["hi"], "4")
        self.assertEqual(data["results"][0]["kind"], "enclosure")

    def test_schema(self):
        schema = report_schema()
        self.assertIn("results", schema["properties"])
        self.assertIn("parameters", schema["properties"])
        json.dumps(schema)


class TestCsv(unittest.TestCase):
    def test_table_columns(self):
        text = to_csv(table_report())
        self.assertEqual(text.splitlines()[0], "n,exact,decimal,target,abs_error")
        self.assertEqual(len(text.splitlines()), 5)

    def test_csv_decimals_match_json(self):
        report = table_report()
        rows = list(csv.DictReader(io.StringIO(to_csv(report))))
        data = json.loads(to_json(report))
        self.assertEqual([r["decimal"] for r in rows], [r["decimal"] for r in data["results"]["rows"]])
        self.assertEqual(rows[0]["exact"], "4/3")
        self.assertEqual(rows[0]["target"], "π/2")

    def test_records_are_flattened(self):
        rows = list(csv.DictReader(io.StringIO(to_csv(check_report()))))
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[0]["name"], "stieltjes")
        self.assertEqual(rows[2]["verdict"], "UNDECIDED")
        self.assertEqual(rows[2]["witness"], "")


class TestWriteAtomic(unittest.TestCase):
    def test_writes_and_replaces(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "report.json")
            write_atomic(path, "first\n")
            write_atomic(path, "second\n")
            with open(path, encoding="utf-8") as handle:
                self.assertEqual(handle.read(), "second\n")
            self.assertEqual(os.listdir(directory), ["report.json"])

    def test_missing_directory_leaves_nothing(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "missing", "report.json")
            with self.assertRaises(OSError):
                write_atomic(path, "text")
            self.assertEqual(os.listdir(directory), [])


if __name__ == "__main__":
    unittest.main()
