"""
Reproduction results stored as a TSV table (reports.tsv)
One row per registry item, keyed on the id column
"""

import csv
import fcntl
import logging
import os
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import asdict, fields
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional

from .paperlib import Report

logger = logging.getLogger(__name__)

COLUMNS = [f.name for f in fields(Report)]
TABLE_NAME = "reports"


class ReportTable:
    """
    Reports as tab-separated rows
    - header row with the Report field names
    - whole-file rewrites go through a temp file
    - flock on a sibling .lock file
    - in-memory index on id
    """

    def __init__(self, data_dir: Path, table_name: str = TABLE_NAME):
        self.table_name = table_name
        self.columns = list(COLUMNS)
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)

        self.data_file = self.data_dir / f"{table_name}.tsv"
        self.lock_file = self.data_dir / f"{table_name}.lock"

        self.index = defaultdict(list)
        self.row_count = 0

        if not self.data_file.exists():
            self._write_all([])
        self._rebuild_index()

    @contextmanager
    def _lock(self, exclusive: bool = True):
        lock_fd = os.open(self.lock_file, os.O_CREAT | os.O_RDWR)
        try:
            fcntl.flock(lock_fd, fcntl.LOCK_EX if exclusive else fcntl.LOCK_SH)
            yield
        finally:
            fcntl.flock(lock_fd, fcntl.LOCK_UN)
            os.close(lock_fd)

    def _read_rows(self) -> List[Dict[str, str]]:
        with open(self.data_file, "r", newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f, delimiter="\t"))

    def _rebuild_index(self):
        self.index.clear()
        rows = self._read_rows()
        for row_num, row in enumerate(rows):
            if row.get("id"):
                self.index[row["id"]].append(row_num)
        self.row_count = len(rows)

    def _write_all(self, rows: Iterable[Dict[str, str]]):
        temp_file = self.data_file.with_suffix(".tmp")
        with open(temp_file, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=self.columns, delimiter="\t",
                                    quoting=csv.QUOTE_MINIMAL)
            writer.writeheader()
            writer.writerows(rows)
        temp_file.replace(self.data_file)

    def _normalize(self, report: Report) -> Dict[str, str]:
        row = {}
        for column, value in asdict(report).items():
            value = "" if value is None else str(value)
            row[column] = value.replace("\t", "    ").replace("\n", " ").replace("\r", "")
        return row

    @staticmethod
    def _to_report(row: Dict[str, str]) -> Report:
        return Report(row["id"], row["status"], row["computed_re"], row["computed_im"],
                      int(row["digits"] or 0), row["expected"], row["expected_value"],
                      row["abs_diff"], int(row["runtime_ms"] or 0), row.get("message") or "")

    @staticmethod
    def _matches(row: Dict[str, str], conditions: Dict[str, Any]) -> bool:
        return all(row.get(key) == ("" if value is None else str(value))
                   for key, value in conditions.items())

    def insert_many(self, reports: Iterable[Report]) -> int:
        """Store reports; a report replaces any stored row with the same id"""
        new_rows = [self._normalize(r) for r in reports]
        if not new_rows:
            return 0
        replaced = {row["id"] for row in new_rows}
        with self._lock():
            rows = [row for row in self._read_rows() if row["id"] not in replaced]
            self._write_all(rows + new_rows)
            self._rebuild_index()
        logger.info("stored %d reports in %s", len(new_rows), self.data_file)
        return len(new_rows)

    def query(self, **conditions) -> List[Report]:
        with self._lock(exclusive=False):
            rows = self._read_rows()
            if "id" in conditions:
                candidates = [rows[i] for i in self.index.get(str(conditions["id"]), ())
                              if i < len(rows)]
            else:
                candidates = rows
            return [self._to_report(row) for row in candidates if self._matches(row, conditions)]

    def query_one(self, **conditions) -> Optional[Report]:
        results = self.query(**conditions)
        return results[0] if results else None

    def all(self) -> Iterator[Report]:
        with self._lock(exclusive=False):
            rows = self._read_rows()
        for row in rows:
            yield self._to_report(row)

    def truncate(self):
        """Remove all rows but keep the header"""
        with self._lock():
            self._write_all([])
            self.index.clear()
            self.row_count = 0

    def drop(self):
        with self._lock():
            self.data_file.unlink(missing_ok=True)
        self.lock_file.unlink(missing_ok=True)
        self.index.clear()
        self.row_count = 0

    def stats(self) -> Dict[str, Any]:
        file_size = self.data_file.stat().st_size if self.data_file.exists() else 0
        by_status: Dict[str, int] = {}
        if self.data_file.exists():
            for report in self.all():
                by_status[report.status] = by_status.get(report.status, 0) + 1
        return {
            "table_name": self.table_name,
            "row_count": self.row_count,
            "by_status": by_status,
            "file_size": file_size,
            "data_file": str(self.data_file),
        }


def compare_reports(stored: Iterable[Report], fresh: Iterable[Report]) -> List[str]:
    """
    Differences between a stored run and a fresh one at equal digits.
    Runtime and message are ignored; an empty list means the runs agree.
    """
    stored_by_id = {r.id: r for r in stored}
    problems = []
    for report in fresh:
        old = stored_by_id.get(report.id)
        if old is None:
            problems.append(f"{report.id}: not in the stored run")
        elif old.digits != report.digits:
            problems.append(f"{report.id}: stored at {old.digits} digits, run at {report.digits}")
        elif (old.status, old.computed_re, old.computed_im) != (report.status, report.computed_re, report.computed_im):
            problems.append(f"{report.id}: computed {report.computed_re} differs from stored {old.computed_re}")
    return problems
