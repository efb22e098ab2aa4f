#!/usr/bin/env python3
"""
Tests for the term-file language
"""

import unittest
from fractions import Fraction
from pathlib import Path

from wzbarnes import paperlib
from wzbarnes.dsl import format_termfile, parse, parse_file
from wzbarnes.errors import DSLSyntaxError, UndefinedName
from wzbarnes.exact import RationalFunction
from wzbarnes.hyperterm import HyperTerm, wz_verify

TERMS = Path(__file__).parent.parent / "terms"


class TestTermFiles(unittest.TestCase):

    def test_sec2_pair(self):
        pair = parse_file(TERMS / "sec2.wz").get("sec2").value
        self.assertEqual(pair, paperlib.sec2_pair())
        self.assertTrue(wz_verify(pair).wz_holds)

    def test_perturbed_pair(self):
        pair = parse_file(TERMS / "sec2_perturbed.wz").get("sec2.perturbed").value
        self.assertEqual(pair, paperlib.sec2_pair(perturb=True))
        self.assertFalse(wz_verify(pair).wz_holds)

    def test_example1_uses_named_term(self):
        termfile = parse_file(TERMS / "ex1.wz")
        self.assertEqual([d.kind for d in termfile], ["term", "pair", "pair"])
        self.assertEqual(termfile.get("U").value, paperlib.ex1_U())
        self.assertEqual(termfile.get("ex1").value, paperlib.ex1_pair())
        self.assertEqual(termfile.get("ex1.dual").value, paperlib.ex1_dual_pair())

    def test_example2_pair(self):
        self.assertEqual(parse_file(TERMS / "ex2.wz").get("ex2").value, paperlib.ex2_pair())

    def test_integrands(self):
        definition = parse_file(TERMS / "for5s1.it").get("for5s1")
        self.assertEqual(definition.value, paperlib.for5s1())
        self.assertEqual(definition.expected.text(), "sqrt3/pi")
        termfile = parse_file(TERMS / "ej.it")
        for name, built in (("ej1", paperlib.ej1()), ("ej2", paperlib.ej2()), ("ej3", paperlib.ej3())):
            with self.subTest(name=name):
                self.assertEqual(termfile.get(name).value, built)
        self.assertEqual(len(termfile.of_kind("integrand")), 3)

    def test_parametric_integrand(self):
        integrand = parse_file(TERMS / "sec2_family.it").get("sec2.family").value
        self.assertEqual(integrand.t_value, 0)
        self.assertEqual(integrand.at(Fraction(1, 10)).upper(),
                         paperlib.sec2_family().integrand.at(Fraction(1, 10)).upper())

    def test_series(self):
        termfile = parse_file(TERMS / "zhi.series")
        self.assertEqual(termfile.get("zhi").value, paperlib.zhi_series())
        self.assertEqual(termfile.get("zhi").expected.text(), "8*pi^2")
        self.assertEqual(termfile.get("identidad.inner").value, paperlib.identidad_inner())

    def test_series_with_parameter(self):
        from wzbarnes.series import example2_series

        termfile = parse_file(TERMS / "example2.series", x_value=Fraction(3, 4))
        self.assertEqual(termfile.get("example2").value, example2_series(Fraction(3, 4)))

    def test_round_trip(self):
        for name in ("sec2.wz", "ex1.wz", "for5s1.it", "zhi.series"):
            with self.subTest(file=name):
                termfile = parse_file(TERMS / name)
                again = parse(format_termfile(termfile))
                self.assertEqual(again.definitions, termfile.definitions)


class TestParse(unittest.TestCase):

    def test_empty_file(self):
        self.assertEqual(len(parse("")), 0)
        self.assertEqual(len(parse("# only a comment\n")), 0)
        self.assertEqual(format_termfile(parse("")), "")

    def test_syntax_error_location(self):
        source = 'term "a" {\n    T = poch(1/2);\n}\n'
        with self.assertRaises(DSLSyntaxError) as ctx:
            parse(source)
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 17))

    def test_unexpected_end(self):
        with self.assertRaises(DSLSyntaxError):
            parse('term "a" {\n    T = n;\n')

    def test_undefined_name(self):
        with self.assertRaises(UndefinedName) as ctx:
            parse('term "a" {\n    T = q * n;\n}\n')
        self.assertEqual(ctx.exception.line, 2)

    def test_x_needs_a_value(self):
        with self.assertRaises(UndefinedName):
            parse_file(TERMS / "example2.series")

    def test_duplicate_definition(self):
        with self.assertRaises(DSLSyntaxError):
            parse('term "a" { T = n; }\nterm "a" { T = k; }\n')

    def test_cannot_bind_variable(self):
        with self.assertRaises(DSLSyntaxError):
            parse('term "a" { n = 2; }\n')

    def test_sum_of_terms_rejected(self):
        with self.assertRaises(DSLSyntaxError):
            parse('term "a" { T = fact(n) + poch(1/2, n); }\n')

    def test_pair_needs_both_terms(self):
        with self.assertRaises(DSLSyntaxError):
            parse('pair "p" { F = fact(n); }\n')

    def test_division_by_zero(self):
        with self.assertRaises(DSLSyntaxError):
            parse('term "a" { T = n / 0; }\n')

    def test_expected_must_be_closed_form(self):
        with self.assertRaises(DSLSyntaxError):
            parse('series "s" { S = pow(1/2, n); expected = n; }\n')

    def test_plain_rational_term(self):
        term = parse('term "r" { T = rf(n^2 - k^2, n - k); }\n').get("r").value
        n = RationalFunction.variable("n")
        k = RationalFunction.variable("k")
        self.assertEqual(term, HyperTerm.rational(n + k))


if __name__ == "__main__":
    unittest.main()
