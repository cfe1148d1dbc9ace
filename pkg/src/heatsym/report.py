"""Delimited table output.

Tables are a header plus homogeneous rows.  Floats are printed with 17
significant digits so the decimal text parses back to the identical
double; CSV and JSON renderings of the same table therefore agree after
parsing, value for value.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

__all__ = ["FLOAT_FMT", "format_value", "render_csv", "render_json",
           "render_table", "write_table"]

FLOAT_FMT = "%.17g"


def format_value(value) -> str:
    """One cell as text; floats get the round-trip format."""
    if isinstance(value, float):
        return FLOAT_FMT % value
    return str(value)


def _check_table(columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    width = len(columns)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(
                f"row {i} has {len(row)} cells, header has {width}")


def render_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    _check_table(columns, rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def render_json(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    """The same table as a JSON array of flat objects."""
    _check_table(columns, rows)
    payload = [dict(zip(columns, row)) for row in rows]
    return json.dumps(payload, indent=2) + "\n"


def render_table(columns: Sequence[str], rows: Sequence[Sequence],
                 fmt: str) -> str:
    if fmt == "csv":
        return render_csv(columns, rows)
    if fmt == "json":
        return render_json(columns, rows)
    raise ValueError(f"unknown format {fmt!r}; expected csv or json")


def write_table(columns: Sequence[str], rows: Sequence[Sequence],
                fmt: str, out: str | Path | None) -> str:
    """Render and, when a path is given, also write to disk.

    Returns the rendered text either way so the caller can print it.
    """
    text = render_table(columns, rows, fmt)
    if out is not None:
        Path(out).write_text(text)
    return text
