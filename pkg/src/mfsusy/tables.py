"""Tabular output in CSV and JSON.

Floats are written with ``repr``, the shortest string that round-trips to
the same double, so tables can be diffed and re-read without loss.
Non-finite values appear as the literal strings ``nan``, ``inf`` and
``-inf`` in both formats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import __version__
from .errors import DomainError, UsageError

FORMATS = ("csv", "json")


def format_value(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _json_value(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, int):
        return v
    v = float(v)
    return v if math.isfinite(v) else format_value(v)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float):
        return _json_value(obj)
    if hasattr(obj, "item"):
        return _json_safe(obj.item())
    return obj


@dataclass
class OutputTable:
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            self._check(row)

    def _check(self, row):
        if len(row) != len(self.columns):
            raise DomainError(f"row has {len(row)} values, table has {len(self.columns)} columns")

    def append(self, row):
        row = list(row)
        self._check(row)
        self.rows.append(row)

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        lines += [",".join(format_value(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "metadata": _json_safe(self.metadata),
            "columns": list(self.columns),
            "rows": [[_json_value(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise UsageError(f"unknown format {fmt!r}")

    def metadata_json(self) -> str:
        return json.dumps(_json_safe(self.metadata), indent=2) + "\n"


def make_metadata(command, parameters, **extra):
    meta = {"command": command, "parameters": dict(parameters), "version": __version__}
    meta.update(extra)
    return meta


def read_csv(text: str):
    """Parse CSV written by :meth:`OutputTable.to_csv` into (columns, rows of floats)."""
    lines = text.strip("\n").split("\n")
    columns = lines[0].split(",")
    rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
    return columns, rows


def parse_range(text: str):
    """Parse ``min:max:count`` into (min, max, count)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must look like min:max:count, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None
    if not (0 < lo < hi) or n < 2 or not math.isfinite(hi):
        raise UsageError(f"range needs 0 < min < max and count >= 2, got {text!r}")
    return lo, hi, n


def parse_int_range(text: str):
    """Parse an inclusive integer range ``a:b`` (or a single integer)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            a = b = int(parts[0])
        elif len(parts) == 2:
            a, b = int(parts[0]), int(parts[1])
        else:
            raise ValueError("too many fields")
    except ValueError as exc:
        raise UsageError(f"integer range must look like a:b, got {text!r} ({exc})") from None
    if a < 0 or b < a:
        raise UsageError(f"integer range needs 0 <= a <= b, got {text!r}")
    return list(range(a, b + 1))
