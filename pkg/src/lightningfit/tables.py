"""Deterministic tabular output for experiment pipelines.

Tables are rectangular, typed, and serialize byte-identically for
identical inputs: floats use shortest round-trip repr (17 significant
digits when needed), JSON keys are sorted, line endings are fixed, and
metadata carries the config echo and code version but no timestamp.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .version import __version__


@dataclass(frozen=True)
class ResultTable:
    columns: tuple
    rows: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        width = len(self.columns)
        clean = []
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise InputError(f"row {i} has {len(row)} cells, expected {width}")
            # numpy scalars repr as np.float64(...) and break json; demote them
            clean.append(tuple(v.item() if isinstance(v, np.generic) else v
                               for v in row))
        object.__setattr__(self, "rows", clean)
        meta = dict(self.meta)
        meta.setdefault("version", __version__)
        object.__setattr__(self, "meta", meta)

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise InputError(f"no column named {name!r}") from None
        return [row[idx] for row in self.rows]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_table(table: ResultTable, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        payload = {
            "metadata": table.meta,
            "columns": list(table.columns),
            "rows": [list(row) for row in table.rows],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    raise InputError(f"unknown format {fmt!r} (expected 'csv' or 'json')")


def write_table(table: ResultTable, fmt: str = "csv", path=None, stream=None) -> str:
    """Serialize and optionally persist a table; returns the serialized text."""
    text = render_table(table, fmt)
    if stream is not None:
        stream.write(text)
    elif path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write table to {path}: {exc}") from exc
    return text


def _parse_cell(text: str):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv_table(text: str) -> ResultTable:
    """Inverse of the CSV rendering, with best-effort typing of cells."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("empty CSV text") from None
    rows = [tuple(_parse_cell(c) for c in row) for row in reader]
    return ResultTable(columns=tuple(header), rows=rows, meta={})
