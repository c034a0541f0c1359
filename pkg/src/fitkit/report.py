"""Check records and the JSON report format ``fitkit-report/1``.

Integers inside witnesses are written as decimal strings so that consumers
with 64-bit integers never overflow.  Reports are canonical: records are
sorted by (suite, config key, name) and JSON is dumped with sorted keys, so the
same checks always produce the same bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from . import __version__

SCHEMA = "fitkit-report/1"
PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class CheckRecord:
    suite: str
    name: str
    statement: str
    status: str
    config: str = ""
    witness: dict = field(default_factory=dict)
    note: str = ""
    duration: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def sort_key(self) -> tuple:
        return (self.suite, self.config, self.name)

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "name": self.name,
            "statement": self.statement,
            "status": self.status,
            "config": self.config,
            "witness": stringify(self.witness),
            "note": self.note,
        }
        if timings and self.duration is not None:
            out["duration"] = round(self.duration, 6)
        return out


def check(suite: str, name: str, statement: str, ok: bool, config: str = "", witness=None, note: str = "") -> CheckRecord:
    return CheckRecord(suite, name, statement, PASS if ok else FAIL, config, witness or {}, note)


def skipped(suite: str, name: str, statement: str, config: str, reason: str) -> CheckRecord:
    return CheckRecord(suite, name, statement, SKIP, config, {}, reason)


def stringify(obj: Any) -> Any:
    """Recursively turn ints into decimal strings (bools are left alone)."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [stringify(v) for v in obj]
    return obj


def input_digest(payload: Any) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def build_report(
    command: str,
    inputs: Any,
    records: Iterable[CheckRecord],
    seed: int,
    timings: bool = False,
    extra: dict | None = None,
) -> dict:
    recs = sorted(records, key=CheckRecord.sort_key)
    counts = {PASS: 0, FAIL: 0, SKIP: 0}
    for r in recs:
        counts[r.status] += 1
    report = {
        "schema": SCHEMA,
        "tool": {"name": "fitkit", "version": __version__},
        "command": command,
        "input_digest": input_digest(inputs),
        "seed": str(seed),
        "summary": {k: str(v) for k, v in counts.items()},
        "records": [r.to_dict(timings) for r in recs],
    }
    if extra:
        report.update(stringify(extra))
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def exit_status(report: dict) -> int:
    """0 iff no record failed; depends only on the report content."""
    return 0 if int(report["summary"][FAIL]) == 0 else 1
