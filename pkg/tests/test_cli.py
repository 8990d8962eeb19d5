"""
Tests for the wallislab command-line interface
"""

import csv
import io
import json
import os
import unittest
from decimal import Decimal
from fractions import Fraction

from click.testing import CliRunner

from wallislab import __version__
from wallislab.cli import cli
from wallislab.reports import ReportEnvelope

HALF_SQRT_PI = Decimal("0.886226925452758013649083741670572591")


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner()

    def run_report(self, args, expected_code=0, env=None):
        """Invoke a command with --out and return the parsed JSON report."""
        with self.runner.isolated_filesystem():
            result = self.runner.invoke(cli, args + ["--out", "report.json"], env=env)
            self.assertEqual(result.exit_code, expected_code, result.output)
            with open("report.json", encoding="utf-8") as handle:
                text = handle.read()
        return text


class TestPiCommand(CliTestCase):
    def test_wallis_first_term(self):
        data = json.loads(self.run_report(["pi", "--terms", "1", "--method", "wallis"]))
        record = data["results"][0]
        self.assertEqual(data["command"], "pi")
        self.assertEqual(record["lo"], "8/3")
        self.assertEqual(record["hi"], "4")
        self.assertEqual(record["lo_decimal"], "2.6666666666")
        self.assertEqual(data["parameters"], {"terms": 1, "method": "wallis", "digits": 10})

    def test_machin(self):
        data = json.loads(self.run_report(["pi", "--method", "machin", "--digits", "15"]))
        record = data["results"][0]
        self.assertLessEqual(Fraction(record["width"]), Fraction(1, 10**15))
        self.assertTrue(record["lo_decimal"].startswith("3.141592653589793"))

    def test_variation_estimate(self):
        data = json.loads(self.run_report(["pi", "--method", "variation4", "--terms", "1000"]))
        record = data["results"][0]
        self.assertEqual(record["kind"], "estimate")
        self.assertLess(Decimal(record["abs_error"]), Decimal("0.001"))

    def test_moments(self):
        data = json.loads(self.run_report(["pi", "--method", "moments", "--terms", "50"]))
        record = data["results"][0]
        self.assertLess(Fraction(record["lo"]), Fraction("3.1415926536"))
        self.assertGreater(Fraction(record["hi"]), Fraction("3.1415926535"))

    def test_round_trip(self):
        text = self.run_report(["pi", "--terms", "5"])
        report = ReportEnvelope.model_validate_json(text)
        self.assertEqual(report.results[0].n, 5)
        self.assertEqual(report.artifact_version, __version__)

    def test_ten_thousand_terms(self):
        data = json.loads(self.run_report(["pi", "--terms", "10000", "--method", "wallis"]))
        record = data["results"][0]
        lo, hi = Fraction(record["lo"]), Fraction(record["hi"])
        self.assertLess(lo, Fraction("3.14159265358979"))
        self.assertGreater(hi, Fraction("3.14159265358980"))
        self.assertLessEqual(Fraction(record["width"]), Fraction("3.2e-4"))

    def test_custom_stylesheet(self):
        with self.runner.isolated_filesystem():
            with open("plain.css", "w", encoding="utf-8") as handle:
                handle.write("body { color: teal; }")
            args = ["pi", "--terms", "2", "--format", "html", "--css", "plain.css", "--out", "pi.html"]
            result = self.runner.invoke(cli, args)
            self.assertEqual(result.exit_code, 0, result.output)
            with open("pi.html", encoding="utf-8") as handle:
                html = handle.read()
        self.assertIn("<style>body { color: teal; }</style>", html)
        self.assertNotIn("#121212", html)

    def test_missing_stylesheet(self):
        result = self.runner.invoke(cli, ["pi", "--format", "html", "--css", "absent.css"])
        self.assertEqual(result.exit_code, 2)

    def test_invalid_terms(self):
        result = self.runner.invoke(cli, ["pi", "--terms", "0"])
        self.assertEqual(result.exit_code, 2)

    def test_html(self):
        html = self.run_report(["pi", "--terms", "2", "--format", "html", "--theme", "dark"])
        self.assertTrue(html.startswith("<!DOCTYPE html>"))
        self.assertIn("128/45", html)
        self.assertIn("#121212", html)


class TestTableCommand(CliTestCase):
    def test_json(self):
        data = json.loads(self.run_report(["table", "--sequence", "a_n", "--max-n", "3"]))
        rows = data["results"]["rows"]
        self.assertEqual([row["exact"] for row in rows], ["4/3", "64/45", "256/175"])

    def test_csv(self):
        text = self.run_report(["table", "-s", "I_n", "--max-n", "4", "--format", "csv"])
        lines = text.splitlines()
        self.assertEqual(lines[0], "n,exact,decimal,target,abs_error")
        self.assertEqual(lines[1].split(",")[:2], ["0", "1/2·π"])
        self.assertEqual(len(lines), 6)

    def test_csv_decimals_match_json(self):
        args = ["table", "--sequence", "E_n", "--max-n", "12", "--digits", "14"]
        rows = json.loads(self.run_report(args))["results"]["rows"]
        text = self.run_report(args + ["--format", "csv"])
        csv_rows = list(csv.DictReader(io.StringIO(text)))
        self.assertEqual(len(csv_rows), len(rows))
        for row, csv_row in zip(rows, csv_rows):
            self.assertEqual(csv_row["exact"], row["exact"])
            self.assertEqual(Decimal(csv_row["decimal"]), Decimal(row["decimal"]))
            if row["abs_error"] is not None:
                self.assertEqual(Decimal(csv_row["abs_error"]), Decimal(row["abs_error"]))

    def test_stdout(self):
        result = self.runner.invoke(cli, ["table", "-s", "a_n", "--max-n", "2", "--format", "csv"])
        self.assertEqual(result.exit_code, 0)
        self.assertIn("n,exact,decimal,target,abs_error", result.output)
        self.assertIn("64/45", result.output)

    def test_unknown_sequence(self):
        result = self.runner.invoke(cli, ["table", "--sequence", "b_n"])
        self.assertEqual(result.exit_code, 2)


class TestVerifyCommand(CliTestCase):
    def test_stieltjes_holds(self):
        data = json.loads(self.run_report(["verify", "--suite", "stieltjes", "--max-n", "10"]))
        self.assertEqual(data["summary"], {"HOLDS": 10, "FAILS": 0, "UNDECIDED": 0})
        self.assertEqual(len(data["results"]), 10)

    def test_undecided_exit_code(self):
        text = self.run_report(
            ["verify", "--suite", "sandwich", "--max-n", "5", "--tol", "10"], expected_code=3
        )
        data = json.loads(text)
        self.assertGreater(data["summary"]["UNDECIDED"], 0)
        self.assertEqual(data["summary"]["FAILS"], 0)

    def test_all_suites(self):
        text = self.run_report(["verify", "--suite", "all", "--max-n", "20", "--tol", "1e-9"])
        report = ReportEnvelope.model_validate_json(text)
        self.assertEqual(report.summary["FAILS"], 0)
        self.assertEqual(report.summary["UNDECIDED"], 0)
        self.assertEqual(sum(report.summary.values()), len(report.results))
        schema = ReportEnvelope.model_json_schema()
        self.assertTrue(set(json.loads(text)) <= set(schema["properties"]))

    def test_tolerance_floor(self):
        result = self.runner.invoke(cli, ["verify", "--suite", "stieltjes", "--tol", "1e-20"])
        self.assertEqual(result.exit_code, 2)

    def test_unknown_suite(self):
        result = self.runner.invoke(cli, ["verify", "--suite", "everything"])
        self.assertEqual(result.exit_code, 2)


class TestErfCommand(CliTestCase):
    def test_zero(self):
        data = json.loads(self.run_report(["erf", "--t", "0"]))
        self.assertEqual(data["results"][0]["decimal"], "0.0000000000")
        self.assertEqual(data["parameters"]["t"], "0.0")

    def test_negative_t(self):
        result = self.runner.invoke(cli, ["erf", "--t=-1"])
        self.assertEqual(result.exit_code, 2)
        result = self.runner.invoke(cli, ["erf", "--t", "nan"])
        self.assertEqual(result.exit_code, 2)

    def test_infinite_t(self):
        data = json.loads(self.run_report(["erf", "--t", "inf", "--tol", "1e-10"]))
        record = data["results"][0]
        self.assertEqual(data["parameters"]["t"], "inf")
        self.assertLessEqual(abs(Decimal(record["result"]["value"]) - HALF_SQRT_PI), Decimal("1e-10"))
        self.assertTrue(record["decimal"].startswith("0.88622692"))
        enclosure = record["enclosure"]
        self.assertLess(Fraction(enclosure["lo"]), Fraction(str(HALF_SQRT_PI)))
        self.assertGreater(Fraction(enclosure["hi"]), Fraction(str(HALF_SQRT_PI)))

    def test_borwein_agrees_with_direct(self):
        direct = json.loads(self.run_report(["erf", "--t", "1"]))
        borwein = json.loads(self.run_report(["erf", "--t", "1", "--method", "borwein"]))
        a = Decimal(direct["results"][0]["result"]["value"])
        b = Decimal(borwein["results"][0]["result"]["value"])
        self.assertLess(abs(a - b), Decimal("1e-9"))

    def test_squeeze(self):
        data = json.loads(self.run_report(["erf", "--t", "2", "--method", "squeeze"]))
        record = data["results"][0]
        self.assertEqual(record["upper_limit"], "√4")
        # integral of exp(-x^2) over [0, 2]
        self.assertLess(Fraction(record["lo"]), Fraction("0.8820813907"))
        self.assertGreater(Fraction(record["hi"]), Fraction("0.8820813908"))

    def test_squeeze_needs_square_root_of_integer(self):
        result = self.runner.invoke(cli, ["erf", "--t", "1.5", "--method", "squeeze"])
        self.assertEqual(result.exit_code, 2)

    def test_budget_exhaustion_is_a_failure(self):
        result = self.runner.invoke(
            cli, ["erf", "--t", "1", "--tol", "1e-14"], env={"WALLISLAB_MAX_EVALS": "30"}
        )
        self.assertEqual(result.exit_code, 1)


class TestMisc(CliTestCase):
    def test_schema(self):
        result = self.runner.invoke(cli, ["schema"])
        self.assertEqual(result.exit_code, 0)
        schema = json.loads(result.output)
        self.assertIn("results", schema["properties"])

    def test_version(self):
        result = self.runner.invoke(cli, ["--version"])
        self.assertEqual(result.exit_code, 0)
        self.assertIn(__version__, result.output)

    def test_bad_environment(self):
        result = self.runner.invoke(cli, ["schema"], env={"WALLISLAB_WORKING_DPS": "1"})
        self.assertEqual(result.exit_code, 2)

    def test_out_file_has_trailing_newline(self):
        with self.runner.isolated_filesystem():
            result = self.runner.invoke(cli, ["pi", "--out", "pi.json"])
            self.assertEqual(result.exit_code, 0)
            self.assertTrue(os.path.exists("pi.json"))
            with open("pi.json", encoding="utf-8") as handle:
                self.assertTrue(handle.read().endswith("}\n"))


if __name__ == "__main__":
    unittest.main()
