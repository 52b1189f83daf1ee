"""Log-returns, equal-size partitions, sign filtering and descriptive statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as sps

from .ingest import PriceSeries

SIGNS = ("all", "positive", "negative")
_SIGN_ALIASES = {"all": "all", "pos": "positive", "positive": "positive", "+": "positive",
                 "neg": "negative", "negative": "negative", "-": "negative"}


class IndivisibleLength(ValueError):
    pass


class TooFewValues(ValueError):
    pass


def normalize_sign(sign: str) -> str:
    try:
        return _SIGN_ALIASES[sign.lower()]
    except KeyError:
        raise ValueError(f"unknown sign filter {sign!r}; expected one of {SIGNS}") from None


def roman(k: int) -> str:
    numerals = ((10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"))
    out = []
    for value, letters in numerals:
        while k >= value:
            out.append(letters)
            k -= value
    return "".join(out)


@dataclass
class ReturnSeries:
    """Log-returns with per-element zero flags.

    ``zero_count`` is the number of exact zeros among the returns this series
    was derived from; it stays meaningful after :func:`filter_for_digits` has
    removed them from ``values``.
    """

    values: np.ndarray
    zero_flags: np.ndarray
    parent_label: str = ""
    sign_filter: str = "all"
    label: str = ""
    zero_count: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.zero_flags = np.asarray(self.zero_flags, dtype=bool)
        if not np.array_equal(self.zero_flags, self.values == 0):
            raise ValueError("zero_flags must mark exactly the zero values")
        if self.sign_filter == "positive" and np.any(self.values <= 0):
            raise ValueError("positive-filtered series holds non-positive values")
        if self.sign_filter == "negative" and np.any(self.values >= 0):
            raise ValueError("negative-filtered series holds non-negative values")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n(self) -> int:
        return len(self.values)

    @classmethod
    def from_values(cls, values, parent_label: str = "", label: str = "") -> "ReturnSeries":
        values = np.asarray(values, dtype=np.float64)
        zeros = values == 0
        return cls(values, zeros, parent_label, "all", label, int(zeros.sum()))


@dataclass
class Partition:
    k: int
    subsets: tuple
    boundaries: tuple[int, ...]
    dropped: tuple[int, ...] = ()


@dataclass(frozen=True)
class DescriptiveStats:
    min: float
    max: float
    count: int
    mean: float
    std_dev: float
    skewness: float | None
    excess_kurtosis: float | None
    total: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def log_returns(prices: PriceSeries, label: str | None = None) -> ReturnSeries:
    closes = prices.closes
    values = np.log(closes[1:] / closes[:-1])
    return ReturnSeries.from_values(values, prices.label, label if label is not None else "LR")


def _segment_length(n: int, k: int) -> int:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n % k:
        raise IndivisibleLength(f"{n} prices cannot be split into {k} equal subsets")
    if n // k < 2:
        raise IndivisibleLength(f"{k} subsets of {n} prices would hold fewer than 2 prices each")
    return n // k


def partition_prices(prices: PriceSeries, k: int, prefix: str = "CV") -> Partition:
    size = _segment_length(len(prices), k)
    bounds = tuple(size * (j + 1) for j in range(k))
    subsets = tuple(
        prices.segment(size * j, size * (j + 1), f"{prefix}_{roman(j + 1)}") for j in range(k)
    )
    return Partition(k, subsets, bounds)


def partition_returns(returns: ReturnSeries, k: int, prefix: str = "LR") -> Partition:
    """Split returns along the price partition of the parent series.

    Return ``i`` spans prices ``i`` and ``i + 1``.  Returns straddling two
    price segments (the first return of subsets 2..k) are dropped, so each of
    the ``k`` subsets holds ``N/k - 1`` returns.
    """
    size = _segment_length(len(returns) + 1, k)
    subsets = []
    for j in range(k):
        lo, hi = size * j, size * (j + 1) - 1
        vals = returns.values[lo:hi]
        subsets.append(ReturnSeries.from_values(vals, returns.parent_label, f"{prefix}_{roman(j + 1)}"))
    dropped = tuple(size * j - 1 for j in range(1, k))
    bounds = tuple(size * (j + 1) for j in range(k))
    return Partition(k, tuple(subsets), bounds, dropped)


def aligned_returns(returns: ReturnSeries, k: int) -> ReturnSeries:
    """Whole series with the ``k - 1`` boundary-straddling returns removed."""
    parts = partition_returns(returns, k)
    values = np.concatenate([s.values for s in parts.subsets])
    return ReturnSeries.from_values(values, returns.parent_label, returns.label)


def filter_for_digits(returns: ReturnSeries, sign: str = "all") -> ReturnSeries:
    """Drop exact zeros (keeping their count) and apply a sign filter."""
    sign = normalize_sign(sign)
    vals = returns.values
    zeros = int((vals == 0).sum()) if returns.sign_filter == "all" else returns.zero_count
    if sign == "positive":
        kept = vals[vals > 0]
    elif sign == "negative":
        kept = vals[vals < 0]
    else:
        kept = vals[vals != 0]
    label = returns.label + {"all": "", "positive": "+", "negative": "-"}[sign]
    return ReturnSeries(kept, np.zeros(len(kept), dtype=bool), returns.parent_label, sign, label, zeros)


def _finite_or_none(v) -> float | None:
    v = float(v)
    return v if math.isfinite(v) else None


def describe(values: Sequence[float]) -> DescriptiveStats:
    """Summary statistics with n-1 standard deviation and adjusted (Fisher) moments.

    Skewness and excess kurtosis are ``None`` for a constant sample, or when
    the spread is too small for them to be finite.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size < 2:
        raise TooFewValues(f"need at least 2 values, got {x.size}")
    constant = bool(np.ptp(x) == 0)
    skew = kurt = None
    # Spreads that underflow once centred (subnormal values) give non-finite moments.
    with np.errstate(all="ignore"):
        if not constant and x.size >= 3:
            skew = _finite_or_none(sps.skew(x, bias=False))
        if not constant and x.size >= 4:
            kurt = _finite_or_none(sps.kurtosis(x, fisher=True, bias=False))
    return DescriptiveStats(
        min=float(x.min()),
        max=float(x.max()),
        count=int(x.size),
        # Guard the min <= mean <= max invariant against summation round-off.
        mean=float(np.clip(x.mean(), x.min(), x.max())),
        std_dev=float(x.std(ddof=1)),
        skewness=skew,
        excess_kurtosis=kurt,
        total=float(x.sum()),
    )
