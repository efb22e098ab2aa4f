#!/usr/bin/env python3
"""
Tests for the wzb command line
"""

import io
import json
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import mock

from wzbarnes import cli
from wzbarnes.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from wzbarnes.errors import DomainError

TERMS = Path(__file__).parent.parent / "terms"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestVerify(unittest.TestCase):

    def test_pair_holds(self):
        code, out, _ = run("verify", str(TERMS / "sec2.wz"))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("wz_holds: true", out)

    def test_perturbed_pair(self):
        code, out, _ = run("verify", str(TERMS / "sec2_perturbed.wz"))
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn("wz_holds: false", out)
        self.assertIn("residual", out)

    def test_json(self):
        code, out, _ = run("verify", "--format", "json", str(TERMS / "ex1.wz"))
        self.assertEqual(code, EXIT_OK)
        results = json.loads(out)
        self.assertEqual([r["name"] for r in results], ["ex1", "ex1.dual"])
        self.assertTrue(all(r["wz_holds"] for r in results))

    def test_missing_file(self):
        code, _, err = run("verify", str(TERMS / "nothing.wz"))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("nothing.wz", err)

    def test_file_without_pairs(self):
        code, _, _ = run("verify", str(TERMS / "for5s1.it"))
        self.assertEqual(code, EXIT_USAGE)


class TestSyntaxErrors(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_parse_error_is_usage_error(self):
        path = Path(self.tmpdir) / "bad.wz"
        path.write_text('pair "p" {\n    F = poch(1/2);\n}\n', encoding="utf-8")
        code, _, err = run("verify", str(path))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("line 2", err)

    def test_bad_rational_argument(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(["barnes", str(TERMS / "for5s1.it"), "--t", "a/b"])
        self.assertEqual(ctx.exception.code, 2)


class TestNumericCommands(unittest.TestCase):

    def test_barnes(self):
        code, out, _ = run("barnes", "--digits", "20", str(TERMS / "for5s1.it"))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("for5s1", out)
        self.assertIn("pass", out)

    def test_barnes_at_t(self):
        code, out, _ = run("barnes", "--digits", "20", "--format", "json", "--t", "1/10",
                           str(TERMS / "sec2_family.it"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)[0]["status"], "pass")

    def test_series(self):
        code, out, _ = run("series", "--digits", "20", "--format", "json", str(TERMS / "zhi.series"))
        self.assertEqual(code, EXIT_OK)
        reports = json.loads(out)
        self.assertEqual({r["id"] for r in reports}, {"zhi", "identidad.inner"})
        self.assertEqual(reports[0]["expected"], "8*pi^2")

    def test_series_needs_x(self):
        code, _, _ = run("series", str(TERMS / "example2.series"))
        self.assertEqual(code, EXIT_USAGE)
        code, _, _ = run("series", "--digits", "20", "--x", "1", str(TERMS / "example2.series"))
        self.assertEqual(code, EXIT_OK)

    def test_diagonal(self):
        code, out, _ = run("diagonal", "--digits", "20", "--j", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("sec4.ex1.dual.diagonal.j2", out)
        self.assertIn("diagonal:", out)

    def test_example2(self):
        code, out, _ = run("example2", "--digits", "20", "--x", "3/4")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("lhs:", out)

    def test_example2_outside_range(self):
        code, out, _ = run("example2", "--digits", "20", "--x", "1/2")
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn("DomainError", out)


class TestReproduce(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_list(self):
        code, out, _ = run("list", "--format", "json")
        self.assertEqual(code, EXIT_OK)
        ids = [item["id"] for item in json.loads(out)]
        self.assertIn("for5s1", ids)

    def test_unknown_item(self):
        code, _, err = run("reproduce", "--item", "sec9.nothing")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("sec9.nothing", err)

    def test_save_compare_and_log(self):
        args = ["reproduce", "--digits", "20", "--item", "sec2.pair", "--item", "zhi"]
        code, _, _ = run(*args, "--save", self.tmpdir, "--log-dir", self.tmpdir)
        self.assertEqual(code, EXIT_OK)
        self.assertTrue((Path(self.tmpdir) / "reports.tsv").exists())
        self.assertEqual(len(list(Path(self.tmpdir).glob("runs_*.jsonl"))), 1)

        code, _, err = run(*args, "--compare", self.tmpdir)
        self.assertEqual(code, EXIT_OK)
        self.assertNotIn("mismatch", err)

        code, _, err = run("reproduce", "--digits", "25", "--item", "zhi", "--compare", self.tmpdir)
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn("mismatch", err)


class TestExitCodes(unittest.TestCase):

    def test_precision_below_floor(self):
        code, _, err = run("list", "--digits", "5")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("digits >= 10", err)

    def test_domain_error_is_a_failure(self):
        def raising(args, settings):
            raise DomainError("z = 0")

        with mock.patch.dict(cli.COMMANDS, {"list": raising}):
            code, _, err = run("list")
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn("DomainError", err)

    def test_plain_value_error_is_usage(self):
        def raising(args, settings):
            raise ValueError("bad value")

        with mock.patch.dict(cli.COMMANDS, {"list": raising}):
            code, _, _ = run("list")
        self.assertEqual(code, EXIT_USAGE)


if __name__ == "__main__":
    unittest.main()
