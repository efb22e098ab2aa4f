"""
Runtime settings
Defaults, overlaid by WZB_* environment variables, overlaid by CLI flags
"""

import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Optional

from .mpnum import Precision

OUTPUT_FORMATS = ("text", "json")


@dataclass(frozen=True)
class Settings:
    """Settings shared by the CLI and the reproduction registry"""

    digits: int = 30
    guard: int = 20
    output_format: str = "text"
    workers: int = 1
    log_dir: Optional[Path] = None
    max_levels: int = 12

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format '{self.output_format}', expected one of {OUTPUT_FORMATS}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        Precision(self.digits, self.guard)

    @classmethod
    def from_env(cls, environ: Mapping[str, str] = None) -> "Settings":
        """Build settings from WZB_DIGITS, WZB_GUARD, WZB_FORMAT, WZB_WORKERS, WZB_LOG_DIR"""
        environ = os.environ if environ is None else environ
        settings = cls()

        if environ.get("WZB_DIGITS"):
            settings = replace(settings, digits=int(environ["WZB_DIGITS"]))
        if environ.get("WZB_GUARD"):
            settings = replace(settings, guard=int(environ["WZB_GUARD"]))
        if environ.get("WZB_FORMAT"):
            settings = replace(settings, output_format=environ["WZB_FORMAT"])
        if environ.get("WZB_WORKERS"):
            settings = replace(settings, workers=int(environ["WZB_WORKERS"]))
        if environ.get("WZB_LOG_DIR"):
            settings = replace(settings, log_dir=Path(environ["WZB_LOG_DIR"]))

        return settings

    def with_overrides(self, **overrides) -> "Settings":
        """Return a copy with every non-None override applied"""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes)

    def precision(self) -> Precision:
        return Precision(self.digits, self.guard)
