#!/usr/bin/env python3
"""
Tests for exact rationals, polynomials and rational functions in (n, k)
"""

import unittest
from fractions import Fraction

from wzbarnes.errors import DivisionByZero, PoleAtPoint
from wzbarnes.exact import (
    AffineForm,
    BiPoly,
    RationalFunction,
    as_rational,
    rf_arith,
    rf_equal,
    rf_eval,
)

n = RationalFunction.variable("n")
k = RationalFunction.variable("k")


class TestRationals(unittest.TestCase):

    def test_as_rational_accepts_text(self):
        self.assertEqual(as_rational("3/6"), Fraction(1, 2))
        self.assertEqual(as_rational(-4), Fraction(-4))
        self.assertEqual(as_rational(Fraction(2, 4)).denominator, 2)

    def test_reduced_form(self):
        value = as_rational("-6/8")
        self.assertEqual((value.numerator, value.denominator), (-3, 4))


class TestBiPoly(unittest.TestCase):

    def test_no_zero_terms(self):
        p = BiPoly.from_terms({(1, 0): 1, (0, 1): 0, (0, 0): 2})
        self.assertEqual(dict(p.terms()), {(1, 0): Fraction(1), (0, 0): Fraction(2)})

    def test_equal_polynomials_have_equal_terms(self):
        x = BiPoly.variable("n")
        y = BiPoly.variable("k")
        a = (x + y) * (x - y)
        b = x * x - y * y
        self.assertEqual(a, b)
        self.assertEqual(a.terms(), b.terms())
        self.assertEqual(hash(a), hash(b))

    def test_shift(self):
        x = BiPoly.variable("n")
        shifted = (x * x).shift("n", 1)
        self.assertEqual(shifted, x * x + x.scale(2) + BiPoly.one())

    def test_degree_and_evaluate(self):
        p = BiPoly.from_terms({(2, 1): 3, (0, 0): -1})
        self.assertEqual(p.degree("n"), 2)
        self.assertEqual(p.degree("k"), 1)
        self.assertEqual(p.evaluate(Fraction(1, 2), 2), Fraction(1, 2))

    def test_to_text(self):
        p = BiPoly.from_terms({(2, 0): 1, (1, 1): -2, (0, 0): 5})
        self.assertEqual(p.to_text(), "n^2 - 2*n*k + 5")


class TestRationalFunction(unittest.TestCase):

    def test_canonical_cancellation(self):
        f = (n * n - k * k) / (n - k)
        self.assertEqual(f, n + k)
        self.assertEqual(f.den.constant_value(), 1)

    def test_monic_denominator(self):
        f = RationalFunction.coerce(1) / (2 * n + 4)
        self.assertEqual(f.den.leading_coefficient(), 1)
        self.assertEqual(f.evaluate(0, 0), Fraction(1, 4))

    def test_arith_ops(self):
        a = 1 / (n + 1)
        b = 1 / (n + 2)
        self.assertEqual(rf_arith(a, b, "-"), 1 / ((n + 1) * (n + 2)))
        self.assertEqual(rf_arith(a, b, "*") / rf_arith(a, b, "/"), b * b)

    def test_division_by_zero(self):
        with self.assertRaises(DivisionByZero):
            rf_arith(n, RationalFunction.zero(), "/")
        with self.assertRaises(ZeroDivisionError):
            n / 0

    def test_eval_exact(self):
        f = (n * n + 1) / (3 * k + 2)
        self.assertEqual(rf_eval(f, Fraction(1, 2), 1), Fraction(1, 4))

    def test_eval_pole(self):
        with self.assertRaises(PoleAtPoint):
            rf_eval(1 / (n - k), 2, 2)

    def test_equal_by_cross_multiplication(self):
        self.assertTrue(rf_equal((2 * n) / (4 * k), n / (2 * k)))
        self.assertFalse(rf_equal(n / k, k / n))

    def test_substitute_affine(self):
        f = n / (n + k)
        g = f.substitute({"n": AffineForm.of("n", 1, 1)})
        self.assertEqual(g, (n + 1) / (n + k + 1))

    def test_negative_power(self):
        self.assertEqual((n + 1) ** -2 * (n + 1) ** 2, RationalFunction.one())

    def test_uses(self):
        self.assertTrue((n / (k + 1)).uses("k"))
        self.assertFalse((n * n).uses("k"))


class TestAffineForm(unittest.TestCase):

    def test_from_rational_function(self):
        form = AffineForm.from_rational_function(Fraction(1, 4) + Fraction(3, 2) * k)
        self.assertEqual(form, AffineForm(Fraction(1, 4), 0, Fraction(3, 2)))

    def test_not_affine(self):
        with self.assertRaises(ValueError):
            AffineForm.from_rational_function(n * n)
        with self.assertRaises(ValueError):
            AffineForm.from_rational_function(1 / n)

    def test_arithmetic(self):
        a = AffineForm.of("n", 2, 1)
        b = AffineForm.of("k", 1)
        self.assertEqual((a - b).coeff("k"), -1)
        self.assertEqual(a.shift("n", 1).const, 3)
        self.assertEqual(a.specialize("n", 2), AffineForm(5))
        self.assertTrue(a.without("n").is_constant)
        self.assertEqual((a + b).evaluate(1, 1), 4)


if __name__ == "__main__":
    unittest.main()
