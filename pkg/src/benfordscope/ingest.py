"""Loading dated closing-value series from delimited text."""

from __future__ import annotations

import csv
import hashlib
import io
import re
from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

DEFAULT_DATE_COLUMN = "Date"
DEFAULT_VALUE_COLUMN = "Close"

_ISO_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
# Plain decimal text only: no thousands separators, no locale commas.
_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


class IngestError(ValueError):
    """Base class for invalid input series."""


class MissingColumn(IngestError):
    pass


class UnparsableRow(IngestError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class NonPositivePrice(UnparsableRow):
    pass


class DuplicateDate(IngestError):
    pass


class EmptySeries(IngestError):
    pass


@dataclass(frozen=True)
class RejectedRow:
    line: int
    reason: str


@dataclass
class PriceSeries:
    """Strictly positive closing values on strictly increasing dates."""

    dates: tuple[date, ...]
    closes: np.ndarray
    label: str = ""
    value_column: str = DEFAULT_VALUE_COLUMN
    rejected: tuple[RejectedRow, ...] = field(default=(), compare=False)

    def __post_init__(self):
        self.dates = tuple(self.dates)
        self.closes = np.asarray(self.closes, dtype=np.float64)
        if len(self.dates) != len(self.closes):
            raise IngestError("dates and closes differ in length")
        if len(self.closes) < 2:
            raise EmptySeries(f"need at least 2 closing values, got {len(self.closes)}")
        if np.any(~np.isfinite(self.closes)) or np.any(self.closes <= 0):
            raise NonPositivePrice(0, "closing values must be finite and > 0")
        for a, b in zip(self.dates, self.dates[1:]):
            if b == a:
                raise DuplicateDate(f"duplicate date {a.isoformat()}")
            if b < a:
                raise IngestError("dates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.closes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return (
            self.dates == other.dates
            and np.array_equal(self.closes, other.closes)
            and self.label == other.label
        )

    def segment(self, start: int, stop: int, label: str) -> "PriceSeries":
        return PriceSeries(self.dates[start:stop], self.closes[start:stop], label, self.value_column)


def _parse_date(text: str) -> date:
    text = text.strip()
    if not _ISO_DATE.match(text):
        raise ValueError(f"date {text!r} is not ISO-8601 (YYYY-MM-DD)")
    return date.fromisoformat(text)


def _parse_value(text: str) -> float:
    text = text.strip()
    if not _DECIMAL.match(text):
        raise ValueError(f"value {text!r} is not a plain decimal number")
    try:
        return float(Decimal(text))
    except InvalidOperation as exc:  # pragma: no cover - regex already filters
        raise ValueError(f"value {text!r} is not a number") from exc


def read_prices(
    text: str,
    date_column: str = DEFAULT_DATE_COLUMN,
    value_column: str = DEFAULT_VALUE_COLUMN,
    label: str = "",
    strict: bool = True,
) -> PriceSeries:
    """Parse CSV text into a :class:`PriceSeries`.

    With ``strict=False`` malformed or non-positive rows are skipped and listed
    in ``PriceSeries.rejected`` instead of raising.  Duplicate dates always raise.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise EmptySeries("file is empty") from None
    for name in (date_column, value_column):
        if name not in header:
            raise MissingColumn(f"column {name!r} not found in header {header}")
    di, vi = header.index(date_column), header.index(value_column)

    rows: dict[date, float] = {}
    rejected: list[RejectedRow] = []
    for line, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            if len(row) != len(header):
                raise UnparsableRow(line, f"expected {len(header)} fields, got {len(row)}")
            try:
                day = _parse_date(row[di])
                value = _parse_value(row[vi])
            except ValueError as exc:
                raise UnparsableRow(line, str(exc)) from None
            if not value > 0:
                raise NonPositivePrice(line, f"non-positive close {row[vi].strip()!r}")
        except UnparsableRow as exc:
            if strict:
                raise
            rejected.append(RejectedRow(line, exc.reason))
            continue
        if day in rows:
            raise DuplicateDate(f"line {line}: duplicate date {day.isoformat()}")
        rows[day] = value

    dates = sorted(rows)
    return PriceSeries(dates, [rows[d] for d in dates], label, value_column, tuple(rejected))


def parse_csv(
    path: str | Path,
    date_column: str = DEFAULT_DATE_COLUMN,
    value_column: str = DEFAULT_VALUE_COLUMN,
    label: str | None = None,
    strict: bool = True,
) -> PriceSeries:
    path = Path(path)
    text = path.read_text(encoding="utf-8-sig")
    return read_prices(text, date_column, value_column, label if label is not None else path.stem, strict)


def serialize(prices: PriceSeries, date_column: str = DEFAULT_DATE_COLUMN, value_column: str | None = None) -> str:
    """CSV text that :func:`read_prices` maps back to an equal series."""
    value_column = value_column or prices.value_column
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([date_column, value_column])
    for day, close in zip(prices.dates, prices.closes):
        writer.writerow([day.isoformat(), repr(float(close))])
    return out.getvalue()


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
