"""
Tests for the exact arithmetic core
"""

import random
import unittest
from fractions import Fraction

from pydantic import ValidationError

from wallislab.exact_core import (
    HALF_PI,
    PI,
    SQRT_PI,
    ZERO,
    Comparison,
    PiScalar,
    RatInterval,
    parse_scalar,
    pi_enclosure,
    render_decimal,
    render_interval,
    render_scalar,
    scalar_compare,
    scalar_to_decimal,
    scalar_to_interval,
    sqrt_interval,
)
from wallislab.exceptions import DomainError, MixedPowerError

PI_50 = "3.14159265358979323846264338327950288419716939937510"


class TestPiScalar(unittest.TestCase):
    def test_multiplication_adds_powers(self):
        x = PiScalar.of(Fraction(3, 4), 1) * PiScalar.of(2, 1)
        self.assertEqual(x, PiScalar.of(Fraction(3, 2), 2))

    def test_addition_needs_equal_powers(self):
        self.assertEqual(HALF_PI + HALF_PI, PI)
        with self.assertRaises(MixedPowerError):
            PI + SQRT_PI

    def test_zero_is_canonical(self):
        self.assertEqual(PI - PI, ZERO)
        self.assertEqual(ZERO.half_pi_power, 0)
        self.assertEqual(ZERO + SQRT_PI, SQRT_PI)
        with self.assertRaises(ValidationError):
            PiScalar(coeff=Fraction(0), half_pi_power=2)

    def test_division(self):
        self.assertEqual(PI / HALF_PI, PiScalar.of(2))
        with self.assertRaises(MixedPowerError):
            SQRT_PI / PI
        with self.assertRaises(ZeroDivisionError):
            PI / 0

    def test_rational_accessor(self):
        self.assertEqual(PiScalar.of(Fraction(2, 3)).rational(), Fraction(2, 3))
        with self.assertRaises(MixedPowerError):
            PI.rational()

    def test_floats_are_rejected(self):
        with self.assertRaises(ValidationError):
            PiScalar(coeff=0.5)

    def test_json_keeps_exact_fractions(self):
        x = PiScalar.of(Fraction(3, 8), 1)
        data = x.model_dump_json()
        self.assertIn('"3/8"', data)
        self.assertEqual(PiScalar.model_validate_json(data), x)


class TestRendering(unittest.TestCase):
    def test_render_scalar(self):
        self.assertEqual(render_scalar(PiScalar.of(Fraction(2, 3))), "2/3")
        self.assertEqual(render_scalar(PiScalar.of(Fraction(3, 8), 1)), "3/8·√π")
        self.assertEqual(render_scalar(HALF_PI), "1/2·π")
        self.assertEqual(render_scalar(PiScalar.of(Fraction(1, 4), 4)), "1/4·π^2")
        self.assertEqual(render_scalar(PiScalar.of(1, 3)), "1·π^(3/2)")

    def test_parse_inverts_render(self):
        rng = random.Random(1234)
        for _ in range(50):
            x = PiScalar.of(Fraction(rng.randint(-99, 99), rng.randint(1, 99)), rng.randint(0, 6))
            self.assertEqual(parse_scalar(render_scalar(x)), x)

    def test_parse_rejects_garbage(self):
        with self.assertRaises(DomainError):
            parse_scalar("pi/2")

    def test_render_decimal_truncates_toward_zero(self):
        self.assertEqual(render_decimal(Fraction(2, 3), 4), "0.6666")
        self.assertEqual(render_decimal(Fraction(-2, 3), 4), "-0.6666")
        self.assertEqual(render_decimal(Fraction(256, 175), 5), "1.46285")
        self.assertEqual(render_decimal(Fraction(-1, 10**6), 3), "0.000")
        self.assertEqual(render_decimal(7, 0), "7")

    def test_render_interval(self):
        self.assertEqual(render_interval(RatInterval.hull(Fraction(8, 3), 4), 4), "[2.6666, 4.0000]")

    def test_scalar_to_decimal(self):
        self.assertEqual(scalar_to_decimal(HALF_PI, 8), "1.57079632")
        self.assertEqual(scalar_to_decimal(PiScalar.of(Fraction(3, 8), 1), 4), "0.6646")


class TestRatInterval(unittest.TestCase):
    def test_order_is_enforced(self):
        with self.assertRaises(ValidationError):
            RatInterval(lo=Fraction(2), hi=Fraction(1))

    def test_arithmetic_encloses_results(self):
        a = RatInterval.hull(1, 2)
        b = RatInterval.hull(-3, 1)
        self.assertEqual(a + b, RatInterval.hull(-2, 3))
        self.assertEqual(a - b, RatInterval.hull(0, 5))
        self.assertEqual(a * b, RatInterval.hull(-6, 2))
        self.assertEqual(b**2, RatInterval.hull(0, 9))
        self.assertEqual(a.reciprocal(), RatInterval.hull(Fraction(1, 2), 1))
        with self.assertRaises(ZeroDivisionError):
            b.reciprocal()

    def test_contains_and_intersect(self):
        a = RatInterval.hull(0, 2)
        self.assertTrue(a.contains(1))
        self.assertTrue(a.contains(RatInterval.hull(Fraction(1, 2), 1)))
        self.assertEqual(a.intersect(RatInterval.hull(1, 3)), RatInterval.hull(1, 2))
        with self.assertRaises(DomainError):
            a.intersect(RatInterval.hull(3, 4))

    def test_sqrt_rounds_outward(self):
        root = sqrt_interval(RatInterval.point(2), 5)
        self.assertEqual(root, RatInterval(lo=Fraction(141421, 10**5), hi=Fraction(141422, 10**5)))
        self.assertEqual(sqrt_interval(RatInterval.point(Fraction(9, 4)), 3), RatInterval.point(Fraction(3, 2)))
        with self.assertRaises(DomainError):
            sqrt_interval(RatInterval.hull(-1, 1), 3)


class TestPiEnclosure(unittest.TestCase):
    def test_contains_reference_digits(self):
        reference = Fraction(PI_50)
        for digits in (1, 2, 5, 10, 20, 40):
            enc = pi_enclosure(digits)
            self.assertTrue(enc.interval.lo <= reference - Fraction(1, 10**49))
            self.assertTrue(reference + Fraction(1, 10**49) <= enc.interval.hi)
            self.assertLessEqual(enc.interval.width, Fraction(1, 10**digits))

    def test_large_precision(self):
        enc = pi_enclosure(500)
        self.assertTrue(render_decimal(enc.interval.lo, 49).startswith(PI_50[:50]))
        self.assertLessEqual(enc.interval.width, Fraction(1, 10**500))

    def test_digits_out_of_range(self):
        for digits in (0, -3, 1001):
            with self.assertRaises(DomainError):
                pi_enclosure(digits)

    def test_sqrt_pi_interval(self):
        enc = pi_enclosure(20)
        interval = scalar_to_interval(SQRT_PI, enc)
        self.assertTrue(interval.contains(Fraction("1.7724538509055160272981674833411451827975")))


class TestIntervalConsistency(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(1234)
        self.enc = pi_enclosure(20)

    def random_scalar(self, half_pi_power):
        coeff = Fraction(self.rng.randint(-60, 60), self.rng.randint(1, 40))
        return PiScalar.of(coeff, half_pi_power)

    def test_products_overlap_interval_products(self):
        for case in range(1000):
            x = self.random_scalar(self.rng.randint(0, 3))
            y = self.random_scalar(self.rng.randint(0, 3))
            exact = scalar_to_interval(x * y, self.enc)
            product = scalar_to_interval(x, self.enc) * scalar_to_interval(y, self.enc)
            self.assertTrue(exact.overlaps(product), f"case {case}: {render_scalar(x)} * {render_scalar(y)}")

    def test_addition_is_outward(self):
        for case in range(300):
            k = self.rng.randint(0, 3)
            x, y = self.random_scalar(k), self.random_scalar(k)
            total = scalar_to_interval(x + y, self.enc)
            summed = scalar_to_interval(x, self.enc) + scalar_to_interval(y, self.enc)
            self.assertTrue(summed.contains(total), f"case {case}")
            if x.coeff * y.coeff >= 0:
                # same signs: every sum of points lies in the interval of x + y
                self.assertEqual(total, summed, f"case {case}")
                self.assertTrue(total.contains(summed.lo) and total.contains(summed.hi))


class TestPiEnclosureNesting(unittest.TestCase):
    def test_tighter_enclosures_nest_within_a_widening(self):
        for digits in range(1, 40):
            coarse = pi_enclosure(digits).interval
            fine = pi_enclosure(digits + 1).interval
            slack = Fraction(1, 10 ** (digits + 1))
            self.assertTrue(RatInterval(lo=coarse.lo - slack, hi=coarse.hi + slack).contains(fine), f"digits={digits}")

    def test_pairwise_intersections_are_nonempty(self):
        enclosures = [pi_enclosure(digits).interval for digits in (1, 2, 3, 5, 8, 13, 21, 34, 55, 89)]
        for a in enclosures:
            for b in enclosures:
                self.assertTrue(a.overlaps(b))
                self.assertTrue(a.contains(a.intersect(b)))


class TestScalarCompare(unittest.TestCase):
    def test_undecided_then_decided(self):
        approx = PiScalar.of(Fraction(355, 226))
        self.assertEqual(scalar_compare(approx, HALF_PI, pi_enclosure(2)), Comparison.UNDECIDED)
        self.assertEqual(scalar_compare(approx, HALF_PI, pi_enclosure(7)), Comparison.GREATER)
        self.assertEqual(scalar_compare(HALF_PI, approx, pi_enclosure(7)), Comparison.LESS)

    def test_equal_powers_are_exact(self):
        enc = pi_enclosure(1)
        self.assertEqual(scalar_compare(PI, HALF_PI + HALF_PI, enc), Comparison.EQUAL)
        self.assertEqual(scalar_compare(HALF_PI, PI, enc), Comparison.LESS)

    def test_signs_decide_without_enclosure(self):
        enc = pi_enclosure(1)
        self.assertEqual(scalar_compare(-SQRT_PI, PiScalar.of(1, 4), enc), Comparison.LESS)
        self.assertEqual(scalar_compare(SQRT_PI, ZERO, enc), Comparison.GREATER)


if __name__ == "__main__":
    unittest.main()
