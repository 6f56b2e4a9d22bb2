"""Run reports and artifact writers.

JSON output is deterministic: keys sorted, floats via repr, no timestamps,
non-finite values mapped to null.  CSV files carry a header row, comma
separators, '.' decimal points, and line-feed newlines regardless of
platform.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field


def _scrub(value):
    """Make a value JSON-serializable and strictly finite."""
    if isinstance(value, dict):
        return {str(k): _scrub(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_scrub(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if hasattr(value, "tolist"):
        return _scrub(value.tolist())
    value = float(value)
    if value != value or value in (float("inf"), float("-inf")):
        return None
    return value


@dataclass
class Check:
    """One gated measurement; passes iff value <= threshold."""

    name: str
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.threshold)


@dataclass
class RunReport:
    """Everything one command run measured, asserted, and wrote.

    wall_time is console information only; it never enters the serialized
    report, which must be byte-identical across reruns of the same config.
    """

    command: str
    config: dict
    checks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, name: str, value, threshold) -> Check:
        check = Check(name, float(value), float(threshold))
        self.checks.append(check)
        return check

    def skip(self, name: str, reason: str):
        self.skipped.append({"name": name, "reason": reason})

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_names(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": _scrub(self.config),
            "checks": [
                {
                    "name": c.name,
                    "value": _scrub(c.value),
                    "threshold": _scrub(c.threshold),
                    "pass": c.passed,
                }
                for c in self.checks
            ],
            "skipped": _scrub(self.skipped),
            "details": _scrub(self.details),
            "artifacts": list(self.artifacts),
        }


def write_json(path: str, data: dict):
    text = json.dumps(_scrub(data), indent=2, sort_keys=True, allow_nan=False)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text + "\n")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if value != value:
        return ""
    return repr(value)


def write_csv(path: str, header: list, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_cell(v) for v in row])
