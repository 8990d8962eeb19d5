"""
Tests for the F(t) + G(t) = pi/4 conservation check
"""

import math
import unittest
from decimal import Decimal

from wallislab.exceptions import DomainError
from wallislab.inequalities import Grade, Verdict
from wallislab.ode_probe import (
    T_CAP,
    F_of_t,
    G_of_t,
    check_conservation,
    check_derivative_identities,
    check_f_decay,
    conservation_grid,
    decay_bound,
    probability_integral_via_F,
    sweep_conservation,
)
from wallislab.quadrature import gauss_truncated

QUARTER_PI = Decimal("0.785398163397448309615660845819875721049")
ERF_ONE = Decimal("0.746824132812427025399467436131664")


class TestFAndG(unittest.TestCase):
    def test_f_at_zero_is_quarter_pi(self):
        f = F_of_t(0.0, 1e-12)
        self.assertLessEqual(abs(f.value - QUARTER_PI), Decimal("1e-12"))

    def test_g_at_zero(self):
        g = G_of_t(0.0, 1e-12)
        self.assertEqual(g.value, 0)

    def test_g_squares_the_gaussian_integral(self):
        g = G_of_t(1.0, 1e-12)
        self.assertLessEqual(abs(g.value - ERF_ONE * ERF_ONE), Decimal("1e-11"))
        self.assertLessEqual(g.uncertainty, Decimal("1e-11"))

    def test_f_respects_decay_bound(self):
        for t in (0.5, 1.0, 3.0):
            f = F_of_t(t, 1e-12)
            self.assertGreaterEqual(f.value, 0)
            self.assertLessEqual(f.value, decay_bound(t) + f.uncertainty)

    def test_f_beyond_cap(self):
        f = F_of_t(T_CAP + 10, 1e-10)
        self.assertEqual(f.value, 0)
        self.assertGreater(f.tail_bound, 0)
        self.assertEqual(F_of_t(math.inf, 1e-10).uncertainty, 0)
        self.assertEqual(decay_bound(math.inf), 0)

    def test_negative_t(self):
        with self.assertRaises(DomainError):
            F_of_t(-1.0, 1e-10)
        with self.assertRaises(DomainError):
            check_conservation(math.nan, 1e-10)


class TestConservation(unittest.TestCase):
    def test_sum_is_quarter_pi(self):
        for t in (0.0, 0.3, 1.0, 2.5, 6.0):
            report = check_conservation(t, 1e-10)
            self.assertTrue(report.within_tolerance, f"t={t}")
            self.assertLessEqual(report.sum_deviation, Decimal("1e-9"))
            self.assertTrue(report.pi_quarter_ref.startswith("0.78539816339744830961"))

    def test_infinite_t(self):
        report = check_conservation(math.inf, 1e-10)
        self.assertTrue(report.within_tolerance)
        self.assertEqual(report.t, Decimal("Infinity"))
        self.assertEqual(report.F.value, 0)

    def test_grid(self):
        grid = conservation_grid()
        self.assertEqual(len(grid), 25)
        self.assertEqual(grid[0], 0.0)
        self.assertEqual(grid[-1], 6.0)
        self.assertEqual(grid, sorted(grid))

    def test_full_grid(self):
        reports = sweep_conservation(1e-10)
        self.assertEqual(len(reports), 25)
        for report in reports:
            self.assertTrue(report.within_tolerance, f"t={report.t}")
            self.assertLessEqual(report.sum_deviation, Decimal("1e-8"), f"t={report.t}")

    def test_f_falls_and_g_rises_across_the_grid(self):
        reports = sweep_conservation(1e-10)
        for before, after in zip(reports, reports[1:]):
            f_slack = before.F.uncertainty + after.F.uncertainty
            g_slack = before.G.uncertainty + after.G.uncertainty
            self.assertLess(after.F.value, before.F.value + f_slack, f"t={after.t}")
            self.assertGreater(after.G.value, before.G.value - g_slack, f"t={after.t}")
            # the steps are resolvable while exp(-t^2) stays well above tol
            if after.t <= 4:
                self.assertLess(after.F.upper, before.F.lower, f"t={after.t}")
                self.assertGreater(after.G.lower, before.G.upper, f"t={after.t}")

    def test_sweep_is_sorted(self):
        reports = sweep_conservation(1e-9, grid=[2.0, 0.0, 0.5])
        self.assertEqual([r.t for r in reports], [Decimal("0.0"), Decimal("0.5"), Decimal("2.0")])
        self.assertTrue(all(r.within_tolerance for r in reports))

    def test_report_round_trips_through_json(self):
        report = check_conservation(1.0, 1e-10)
        restored = type(report).model_validate_json(report.model_dump_json())
        self.assertEqual(restored, report)


class TestProbabilityIntegralViaF(unittest.TestCase):
    def test_agrees_with_direct_quadrature(self):
        result = probability_integral_via_F(1.0, 1e-12)
        self.assertLessEqual(abs(result.value - ERF_ONE), Decimal("1e-9"))
        self.assertLessEqual(abs(result.value - ERF_ONE), result.uncertainty + Decimal("1e-12"))

    def test_large_t_gives_half_sqrt_pi(self):
        result = probability_integral_via_F(8.0, 1e-12)
        self.assertLessEqual(abs(result.value - Decimal("0.886226925452758013649")), Decimal("1e-9"))

    def test_at_four(self):
        result = probability_integral_via_F(4.0, 1e-10)
        self.assertLessEqual(abs(result.value - Decimal("0.8862269255")), Decimal("2e-7"))

    def test_matches_direct_quadrature_on_grid(self):
        for t in conservation_grid():
            via_f = probability_integral_via_F(t, 1e-10)
            direct = gauss_truncated(t, 1e-10)
            allowed = via_f.uncertainty + direct.uncertainty + Decimal("1e-25")
            self.assertLessEqual(abs(via_f.value - direct.value), allowed, f"t={t}")

    def test_zero(self):
        self.assertEqual(probability_integral_via_F(0.0, 1e-10).value, 0)


class TestDerivativeAndDecay(unittest.TestCase):
    def test_derivative_identities(self):
        report = check_derivative_identities(1.0)
        self.assertTrue(report.holds)
        # F'(1) = -2 e^-1 * 0.746824...
        self.assertLess(abs(report.f_prime + Decimal("0.549482")), Decimal("1e-5"))

    def test_derivative_step_must_fit(self):
        with self.assertRaises(DomainError):
            check_derivative_identities(0.0)
        with self.assertRaises(DomainError):
            check_derivative_identities(1.0, h=2.0)

    def test_f_decay_outcome(self):
        outcome = check_f_decay(2.0, 1e-10, index=7)
        self.assertEqual(outcome.name, "f_decay")
        self.assertEqual(outcome.n, 7)
        self.assertEqual(outcome.grade, Grade.NUMERIC)
        self.assertEqual(outcome.verdict, Verdict.HOLDS)


if __name__ == "__main__":
    unittest.main()
