#!/usr/bin/env python3
"""
Tests for the stored report table
"""

import shutil
import tempfile
import unittest
from pathlib import Path

from wzbarnes.paperlib import Report
from wzbarnes.report_table import COLUMNS, ReportTable, compare_reports


def make(item_id, status="pass", value="0.5513288954", digits=30, message=""):
    return Report(item_id, status, value, "0.0", digits, "sqrt3/pi", value, "1.0e-31", 12, message)


class TestReportTable(unittest.TestCase):
    """Storage and lookup of reports"""

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp(prefix="wzbarnes_test_"))
        self.table = ReportTable(self.test_dir)

    def tearDown(self):
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def test_header_written(self):
        header = (self.test_dir / "reports.tsv").read_text(encoding="utf-8").splitlines()[0]
        self.assertEqual(header.split("\t"), COLUMNS)

    def test_insert_and_query(self):
        count = self.table.insert_many([make("for5s1"), make("zhi", status="fail")])
        self.assertEqual(count, 2)
        self.assertEqual(self.table.query_one(id="zhi").status, "fail")
        self.assertEqual(len(self.table.query(status="pass")), 1)
        self.assertIsNone(self.table.query_one(id="ej1"))

    def test_reports_survive_reload(self):
        report = make("for5s1")
        self.table.insert_many([report])
        self.assertEqual(list(ReportTable(self.test_dir).all()), [report])

    def test_same_id_replaces(self):
        self.table.insert_many([make("for5s1", value="0.1")])
        self.table.insert_many([make("for5s1", value="0.2")])
        rows = self.table.query(id="for5s1")
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0].computed_re, "0.2")

    def test_tabs_and_newlines_in_messages(self):
        self.table.insert_many([make("ej1", status="error", message="NotConverged:\ttail\nstill large")])
        self.assertEqual(self.table.query_one(id="ej1").message, "NotConverged:    tail still large")

    def test_empty_insert(self):
        self.assertEqual(self.table.insert_many([]), 0)

    def test_truncate_and_stats(self):
        self.table.insert_many([make("a"), make("b", status="error")])
        stats = self.table.stats()
        self.assertEqual(stats["row_count"], 2)
        self.assertEqual(stats["by_status"], {"pass": 1, "error": 1})
        self.table.truncate()
        self.assertEqual(list(self.table.all()), [])

    def test_drop(self):
        self.table.drop()
        self.assertFalse((self.test_dir / "reports.tsv").exists())


class TestCompareReports(unittest.TestCase):

    def test_agreeing_runs(self):
        self.assertEqual(compare_reports([make("a")], [make("a")]), [])

    def test_runtime_is_ignored(self):
        stored = make("a")
        fresh = Report(*[getattr(stored, c) for c in COLUMNS[:-2]], 999, "")
        self.assertEqual(compare_reports([stored], [fresh]), [])

    def test_differences(self):
        problems = compare_reports([make("a"), make("b", digits=20)],
                                   [make("a", value="0.6"), make("b"), make("c")])
        self.assertEqual(len(problems), 3)
        self.assertIn("differs", problems[0])
        self.assertIn("20 digits", problems[1])
        self.assertIn("not in the stored run", problems[2])


if __name__ == "__main__":
    unittest.main()
