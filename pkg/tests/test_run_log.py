#!/usr/bin/env python3
"""
Tests for the JSON-lines run log
"""

import json
import shutil
import tempfile
import unittest
from pathlib import Path

from wzbarnes.paperlib import Report
from wzbarnes.run_log import RunLog, get_run_log


def make(item_id, status="pass", runtime_ms=10):
    return Report(item_id, status, "1.0", "0.0", 30, "1", "1.0", "0.0", runtime_ms)


class TestRunLog(unittest.TestCase):

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp(prefix="wzbarnes_log_"))
        self.log = RunLog(self.test_dir, max_memory_entries=3)

    def tearDown(self):
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def test_record_writes_json_lines(self):
        self.log.record(make("zhi"), command="series")
        lines = self.log.log_file.read_text(encoding="utf-8").splitlines()
        self.assertEqual(len(lines), 1)
        entry = json.loads(lines[0])
        self.assertEqual(entry["id"], "zhi")
        self.assertEqual(entry["command"], "series")
        self.assertEqual(entry["computed"]["digits"], 30)
        self.assertTrue(self.log.log_file.name.startswith("runs_"))

    def test_memory_buffer_is_bounded(self):
        for i in range(5):
            self.log.record(make(f"item{i}"))
        self.assertEqual([e["id"] for e in self.log.tail(10)], ["item2", "item3", "item4"])
        self.assertEqual(len(self.log.log_file.read_text(encoding="utf-8").splitlines()), 5)

    def test_search_reaches_the_file(self):
        for i in range(5):
            self.log.record(make(f"item{i}", status="fail" if i == 0 else "pass"))
        found = self.log.search('"status": "fail"')
        self.assertEqual([e["id"] for e in found], ["item0"])
        self.assertEqual(len(self.log.search("item")), 5)
        self.assertEqual(len(self.log.search("item", limit=2)), 2)

    def test_stats(self):
        self.log.record(make("a", runtime_ms=10))
        self.log.record(make("b", status="error", runtime_ms=30))
        stats = self.log.get_stats()
        self.assertEqual(stats["runs"], 2)
        self.assertEqual(stats["by_status"], {"pass": 1, "error": 1})
        self.assertEqual(stats["failure_rate"], 0.5)
        self.assertEqual(stats["mean_runtime_ms"], 20)

    def test_global_log_follows_directory(self):
        first = get_run_log(self.test_dir)
        self.assertIs(get_run_log(self.test_dir), first)
        other = self.test_dir / "other"
        self.assertEqual(get_run_log(other).log_dir, other)


if __name__ == "__main__":
    unittest.main()
