"""CSV and JSON writers with locale-independent, round-trip float formatting."""

from __future__ import annotations

import csv
import io
import json
import sys
from typing import Iterable, Sequence


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _clean(v):
    # numpy scalars -> builtins so json and repr behave identically
    if hasattr(v, "item") and not isinstance(v, (list, dict)):
        return v.item()
    return v


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(_clean(v)) for v in row])
    return buf.getvalue()


def json_text(header: Sequence[str], rows: Iterable[Sequence], meta: dict | None = None) -> str:
    records = [{h: _clean(v) for h, v in zip(header, row)} for row in rows]
    doc = {"rows": records}
    if meta:
        doc = {**{k: _clean(v) for k, v in meta.items()}, **doc}
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
