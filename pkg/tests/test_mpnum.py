#!/usr/bin/env python3
"""
Tests for the arbitrary-precision layer
"""

import random
import unittest
from fractions import Fraction

from wzbarnes.errors import Divergent, GammaPole, NotConverged, PoleAtNonpositiveInteger
from wzbarnes.mpnum import (
    Precision,
    constants,
    gamma,
    log_gamma,
    nstr,
    pochhammer,
    rgamma,
    sum_terms,
    to_mp,
)


class TestPrecision(unittest.TestCase):

    def test_working_digits(self):
        prec = Precision(30, 20)
        self.assertEqual(prec.working_digits, 50)
        self.assertEqual(prec.context().dps, 50)

    def test_contexts_are_private(self):
        low = Precision(15).context()
        high = Precision(60).context()
        self.assertIsNot(low, high)
        self.assertEqual(low.dps, 35)
        self.assertEqual(Precision(15).context().dps, 35)

    def test_invalid(self):
        for digits, guard in ((0, 20), (5, 0), (9, 20), (30, 9)):
            with self.subTest(digits=digits, guard=guard):
                with self.assertRaises(ValueError):
                    Precision(digits, guard)

    def test_smallest_accepted(self):
        self.assertEqual(Precision(10, 10).working_digits, 20)

    def test_pass_threshold(self):
        prec = Precision(30)
        self.assertEqual(prec.pass_threshold(), prec.context().mpf(10) ** -25)


class TestGamma(unittest.TestCase):

    def setUp(self):
        self.prec = Precision(30)
        self.ctx = self.prec.context()
        self.rng = random.Random(20240611)

    def _points(self, count=20):
        for _ in range(count):
            yield self.ctx.mpc(self.rng.uniform(-6, 6), self.rng.uniform(-6, 6))

    def test_reflection(self):
        # Gamma(z) Gamma(1-z) = pi / sin(pi z)
        for z in self._points():
            lhs = gamma(z, self.prec) * gamma(1 - z, self.prec)
            rhs = self.ctx.pi / self.ctx.sinpi(z)
            self.assertLess(abs(lhs - rhs) / abs(rhs), self.ctx.mpf(10) ** -28)

    def test_recurrence(self):
        for z in self._points():
            diff = gamma(z + 1, self.prec) - z * gamma(z, self.prec)
            self.assertLess(abs(diff) / abs(z * gamma(z, self.prec)), self.ctx.mpf(10) ** -28)

    def test_log_gamma_matches_gamma(self):
        for z in self._points(5):
            self.assertLess(abs(self.ctx.exp(log_gamma(z, self.prec)) / gamma(z, self.prec) - 1),
                            self.ctx.mpf(10) ** -28)

    def test_known_values(self):
        self.assertLess(abs(gamma(Fraction(1, 2), self.prec) - self.ctx.sqrt(self.ctx.pi)), self.prec.tolerance())
        self.assertEqual(gamma(5, self.prec), 24)

    def test_poles(self):
        with self.assertRaises(GammaPole):
            gamma(0, self.prec)
        with self.assertRaises(PoleAtNonpositiveInteger):
            log_gamma(-3, self.prec)
        self.assertEqual(rgamma(-2, self.prec), 0)

    def test_pochhammer(self):
        self.assertEqual(pochhammer(Fraction(1, 2), 3, self.prec), self.ctx.mpf(15) / 8)
        value = pochhammer(Fraction(1, 2), Fraction(1, 2), self.prec)
        self.assertLess(abs(value - 1 / self.ctx.sqrt(self.ctx.pi)), self.prec.tolerance())


class TestConstants(unittest.TestCase):

    def test_constants(self):
        prec = Precision(40)
        ctx = prec.context()
        self.assertLess(abs(constants("sqrt3", prec) ** 2 - 3), prec.tolerance())
        self.assertLess(abs(constants("gamma_3_4", prec) - ctx.gamma(ctx.mpf(3) / 4)), prec.tolerance())
        self.assertTrue(nstr(constants("pi", prec), 40).startswith("3.14159265358979323846"))

    def test_unknown(self):
        with self.assertRaises(KeyError):
            constants("e", Precision())

    def test_nstr_fraction(self):
        self.assertEqual(nstr(Fraction(-1, 4), 10), "-1/4")


class TestSumTerms(unittest.TestCase):

    def setUp(self):
        self.prec = Precision(30)
        self.ctx = self.prec.context()

    def test_geometric(self):
        result = sum_terms(lambda n: self.ctx.mpf(1) / 2 ** n, self.prec)
        self.assertLess(abs(result.value - 2), self.prec.tolerance())
        self.assertLess(result.tail_bound, self.prec.tolerance(5))

    def test_start_index(self):
        result = sum_terms(lambda n: to_mp(self.ctx, Fraction(1, 3)) ** n, self.prec, start=1)
        self.assertLess(abs(result.value - self.ctx.mpf(1) / 2), self.prec.tolerance())

    def test_degenerate_single_term(self):
        result = sum_terms(lambda n: self.ctx.mpf(1) if n == 0 else self.ctx.mpf(0), self.prec)
        self.assertEqual(result.value, 1)

    def test_divergent(self):
        with self.assertRaises(Divergent):
            sum_terms(lambda n: (self.ctx.mpf(16) / 9) ** n, self.prec)

    def test_divergent_is_not_converged(self):
        self.assertTrue(issubclass(Divergent, NotConverged))

    def test_max_terms(self):
        with self.assertRaises(NotConverged):
            sum_terms(lambda n: self.ctx.mpf(1) / (n + 1) ** 2, self.prec, max_terms=50)


if __name__ == "__main__":
    unittest.main()
