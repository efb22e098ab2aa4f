"""
Run log for reproductions
JSON lines, one file per day, with the recent entries kept in memory
"""

import json
import os
import threading
from collections import deque
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from .paperlib import Report


class RunLog:
    """Append-only record of every reproduced item"""

    def __init__(self, log_dir: Path, max_memory_entries: int = 1000):
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.current_date = datetime.now().date()
        self.log_file = self._log_file_for(self.current_date)
        self.memory_buffer = deque(maxlen=max_memory_entries)
        self.lock = threading.Lock()
        self.stats = {"runs": 0, "by_status": {}, "total_runtime_ms": 0, "start_time": datetime.now()}

    def _log_file_for(self, day) -> Path:
        return self.log_dir / f"runs_{day.strftime('%Y%m%d')}.jsonl"

    def _rotate_if_needed(self):
        today = datetime.now().date()
        if today != self.current_date:
            self.current_date = today
            self.log_file = self._log_file_for(today)

    def record(self, report: Report, command: str = "reproduce"):
        with self.lock:
            self._rotate_if_needed()
            entry = {
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "command": command,
                "pid": os.getpid(),
                **report.to_dict(),
            }
            self.memory_buffer.append(entry)
            with open(self.log_file, "a", encoding="utf-8") as f:
                f.write(json.dumps(entry, sort_keys=True) + "\n")

            self.stats["runs"] += 1
            by_status = self.stats["by_status"]
            by_status[report.status] = by_status.get(report.status, 0) + 1
            self.stats["total_runtime_ms"] += report.runtime_ms

    def tail(self, n: int = 10) -> List[Dict[str, Any]]:
        return list(self.memory_buffer)[-n:]

    def search(self, pattern: str, limit: int = 100) -> List[Dict[str, Any]]:
        """Newest first, memory before the current file"""
        pattern = pattern.lower()
        results, seen = [], set()
        for entry in reversed(self.memory_buffer):
            if pattern in json.dumps(entry, sort_keys=True).lower():
                results.append(entry)
                seen.add(json.dumps(entry, sort_keys=True))
                if len(results) >= limit:
                    return results

        if self.log_file.exists():
            with open(self.log_file, "r", encoding="utf-8") as f:
                lines = f.readlines()
            for line in reversed(lines):
                if pattern not in line.lower():
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if json.dumps(entry, sort_keys=True) in seen:
                    continue
                results.append(entry)
                if len(results) >= limit:
                    break
        return results

    def get_stats(self) -> Dict[str, Any]:
        with self.lock:
            runs = self.stats["runs"]
            failures = runs - self.stats["by_status"].get("pass", 0)
            return {
                "runs": runs,
                "by_status": dict(self.stats["by_status"]),
                "failure_rate": failures / max(1, runs),
                "mean_runtime_ms": self.stats["total_runtime_ms"] / max(1, runs),
                "uptime_seconds": (datetime.now() - self.stats["start_time"]).total_seconds(),
                "current_log_file": str(self.log_file),
                "memory_buffer_size": len(self.memory_buffer),
            }


_run_log: Optional[RunLog] = None


def get_run_log(log_dir: Optional[Path] = None) -> RunLog:
    """Process-wide run log; a new log_dir replaces it"""
    global _run_log
    if _run_log is None or (log_dir is not None and Path(log_dir) != _run_log.log_dir):
        _run_log = RunLog(log_dir if log_dir is not None else Path.cwd() / "logs")
    return _run_log
