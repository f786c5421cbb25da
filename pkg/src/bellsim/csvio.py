"""CSV and JSON serialization of outcome lists and reports."""

from __future__ import annotations

import csv
import json
from typing import IO, Iterable

import numpy as np

from .core import DataColumns, InequalityReport, format_real, parse_spin

REPORT_FIELDS = ("form", "lhs", "bound", "margin", "satisfied")


class DataFormatError(ValueError):
    pass


def read_data_columns(src: IO[str]) -> DataColumns:
    """Parse a header row of column names followed by rows of +1/-1 (or 1/-1)."""
    rows = [row for row in csv.reader(src) if any(cell.strip() for cell in row)]
    if not rows:
        raise DataFormatError("input is empty")
    names = tuple(cell.strip() for cell in rows[0])
    if any(not name for name in names):
        raise DataFormatError("header has an empty column name")
    body = rows[1:]
    if not body:
        raise DataFormatError("input has a header but no data rows")
    values = np.empty((len(body), len(names)), dtype=np.int64)
    for i, row in enumerate(body, start=2):
        if len(row) != len(names):
            raise DataFormatError(f"line {i}: expected {len(names)} fields, got {len(row)}")
        try:
            values[i - 2] = [parse_spin(cell) for cell in row]
        except ValueError as exc:
            raise DataFormatError(f"line {i}: {exc}") from None
    return DataColumns(names, tuple(values[:, j] for j in range(len(names))))


def write_data_columns(data: DataColumns, out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(data.names)
    for row in zip(*data.columns):
        writer.writerow("+1" if v > 0 else "-1" for v in row)


def format_bool(flag: bool) -> str:
    return "true" if flag else "false"


def report_row(report: InequalityReport) -> list[str]:
    return [report.form.value, format_real(report.lhs), format_real(report.bound),
            format_real(report.margin), format_bool(report.satisfied)]


def format_optional(x: float | None) -> str:
    return "" if x is None else format_real(x)


def write_rows(out: IO[str], header: Iterable[str], rows: Iterable[Iterable[str]]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def dump_json(payload, out: IO[str]) -> None:
    json.dump(payload, out, indent=2, allow_nan=False)
    out.write("\n")
