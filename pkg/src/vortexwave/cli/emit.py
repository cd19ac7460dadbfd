"""Deterministic CSV / JSON serialisation of run results."""

from __future__ import annotations

import csv
import io
import json
import math

from vortexwave.cli.runner import RunResult

__all__ = ["format_value", "to_csv", "to_json", "write_output"]


def format_value(v) -> str:
    """Cell text: 12 significant digits, empty for missing or non-finite values."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)):
        return str(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            return ""
        return format(v, ".12g")
    return str(v)


def _json_value(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return float(format(v, ".12g")) if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    try:
        return _json_value(float(v))
    except (TypeError, ValueError):
        return str(v)


def to_csv(result: RunResult) -> str:
    if not result.rows:
        raise ValueError("nothing to emit")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result.columns)
    for row in result.rows:
        w.writerow([format_value(row.get(c)) for c in result.columns])
    return buf.getvalue()


def to_json(result: RunResult, config: dict, version: str, labels) -> str:
    if not result.rows:
        raise ValueError("nothing to emit")
    doc = {
        "meta": {"config": config, "version": version, "equation_labels": list(labels)},
        "rows": [{c: _json_value(row.get(c)) for c in result.columns} for row in result.rows],
        "report": _json_value(result.report),
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_output(text: str, path: str | None, stream) -> None:
    if path is None:
        stream.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
