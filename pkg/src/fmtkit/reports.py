"""JSON reports: versioned, keys sorted, with all timing under ``timestamp``
so that reruns differ only there."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any

SCHEMA = 1

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

STATUS = {EXIT_PASS: "pass", EXIT_VIOLATION: "violation", EXIT_INPUT: "input_error", EXIT_RESOURCE: "resource_error"}


def strip_timing(obj: Any, found: list[float]) -> Any:
    """Remove ``elapsed`` entries (collecting them) so results are reproducible."""
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            if k == "elapsed":
                found.append(v)
            else:
                out[k] = strip_timing(v, found)
        return out
    if isinstance(obj, list):
        return [strip_timing(v, found) for v in obj]
    return obj


def make_report(command: str, config: dict, code: int, result: Any = None, error: dict | None = None,
                started: datetime | None = None, elapsed: float = 0.0) -> dict:
    inner: list[float] = []
    result = strip_timing(result, inner)
    started = started or datetime.now(timezone.utc)
    return {
        "schema": SCHEMA,
        "command": command,
        "config": config,
        "exit_code": code,
        "status": STATUS[code],
        "result": result,
        "error": error,
        "timestamp": {
            "started": started.isoformat(timespec="seconds"),
            "elapsed": round(elapsed, 3),
            "inner_elapsed": [round(x, 3) for x in inner],
        },
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def without_timestamp(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timestamp"}
