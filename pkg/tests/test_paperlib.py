#!/usr/bin/env python3
"""
Tests for the identity registry and reports
"""

import unittest
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from unittest import mock

from wzbarnes import closedform as cf
from wzbarnes import paperlib
from wzbarnes.errors import DomainError, UnknownId
from wzbarnes.mpnum import Precision


class TestRegistry(unittest.TestCase):

    def test_size_and_unique_ids(self):
        items = paperlib.registry()
        ids = [item.id for item in items]
        self.assertGreaterEqual(len(items), 14)
        self.assertEqual(len(ids), len(set(ids)))

    def test_kinds(self):
        for item in paperlib.registry():
            self.assertIn(item.kind, paperlib.KINDS)

    def test_lookup(self):
        item = paperlib.lookup("for5s1")
        self.assertEqual(item.kind, "barnes-integral")
        self.assertEqual(item.expected.text(), "sqrt3/pi")

    def test_unknown_id(self):
        with self.assertRaises(UnknownId):
            paperlib.lookup("sec9.nothing")

    def test_registry_is_a_copy(self):
        items = paperlib.registry()
        items.clear()
        self.assertTrue(paperlib.registry())


class TestReproduce(unittest.TestCase):

    def setUp(self):
        self.prec = Precision(20)

    def test_exact_pair(self):
        report = paperlib.reproduce("sec2.pair", self.prec)
        self.assertEqual(report.status, "pass")
        self.assertEqual(report.abs_diff, "0")
        self.assertEqual(report.expected, "0")

    def test_dual_constant(self):
        report = paperlib.reproduce("sec4.ex1.dual-transform", self.prec)
        self.assertTrue(report.passed)
        self.assertEqual(report.computed_re, "-0.25")

    def test_numeric_item(self):
        report = paperlib.reproduce("for5s1", self.prec)
        self.assertTrue(report.passed, report.message)
        self.assertEqual(report.digits, 20)
        self.assertTrue(report.computed_re.startswith("0.551328895"))
        self.assertTrue(report.expected_value.startswith("0.551328895"))

    def test_precision_monotone(self):
        for item_id in ("zhi", "ej2", "sec2.pair"):
            for digits in (15, 30):
                with self.subTest(item=item_id, digits=digits):
                    self.assertTrue(paperlib.reproduce(item_id, Precision(digits)).passed)

    def test_worker_processes(self):
        ids = ["zhi", "sec2.pair", "sec4.ex1.dual-transform"]
        with mock.patch.object(paperlib, "ProcessPoolExecutor", wraps=ProcessPoolExecutor) as pool:
            parallel = paperlib.reproduce_all(self.prec, workers=2, ids=ids)
        pool.assert_called_once_with(max_workers=2)
        serial = paperlib.reproduce_all(self.prec, ids=ids)
        self.assertEqual([(r.id, r.status, r.computed_re) for r in parallel],
                         [(r.id, r.status, r.computed_re) for r in serial])

    def test_single_item_skips_the_pool(self):
        with mock.patch.object(paperlib, "ProcessPoolExecutor") as pool:
            reports = paperlib.reproduce_all(self.prec, workers=4, ids=["sec2.pair"])
        pool.assert_not_called()
        self.assertTrue(reports[0].passed)

    def test_reproduce_all_subset_in_order(self):
        ids = ["zhi", "sec2.pair"]
        reports = paperlib.reproduce_all(self.prec, ids=ids)
        self.assertEqual([r.id for r in reports], ids)


class TestMakeReport(unittest.TestCase):

    def setUp(self):
        self.prec = Precision(20)

    def test_error_status(self):
        def broken():
            raise DomainError("z = 2 lies on the branch cut [1, oo)")

        report = paperlib.make_report("broken", broken, cf.ONE, self.prec)
        self.assertEqual(report.status, "error")
        self.assertTrue(report.message.startswith("DomainError"))
        self.assertFalse(report.passed)

    def test_no_expected_value(self):
        report = paperlib.make_report("plain", lambda: Fraction(3, 2), None, self.prec)
        self.assertEqual(report.status, "pass")
        self.assertEqual(report.computed_re, "1.5")

    def test_numeric_failure(self):
        report = paperlib.make_report("off", lambda: Fraction(1), cf.PI, self.prec)
        self.assertEqual(report.status, "fail")

    def test_dict_round_trip(self):
        report = paperlib.make_report("plain", lambda: Fraction(1, 4), cf.Num(Fraction(1, 4)), self.prec)
        data = report.to_dict()
        self.assertEqual(data["computed"]["digits"], 20)
        self.assertEqual(paperlib.report_from_dict(data), report)


class TestWholeRegistry(unittest.TestCase):

    def test_every_item_passes_and_agrees_at_higher_precision(self):
        low, high = Precision(30), Precision(50)
        ctx = high.context()
        threshold = ctx.mpf(low.pass_threshold())
        at_low = paperlib.reproduce_all(low, workers=4)
        at_high = paperlib.reproduce_all(high, workers=4)
        self.assertEqual([r.id for r in at_low], [item.id for item in paperlib.registry()])
        for a, b in zip(at_low, at_high):
            with self.subTest(item=a.id):
                self.assertTrue(a.passed, a.message or a.abs_diff)
                self.assertTrue(b.passed, b.message or b.abs_diff)
                va = ctx.mpc(ctx.mpf(a.computed_re), ctx.mpf(a.computed_im))
                vb = ctx.mpc(ctx.mpf(b.computed_re), ctx.mpf(b.computed_im))
                self.assertLess(abs(va - vb), threshold)


if __name__ == "__main__":
    unittest.main()
