"""Benford digit-law forensics for price and log-return series."""

__version__ = "0.1.0"

from .benford import LAWS, BenfordExpectation, Law, bl1, bl2, bl12, expected_counts
from .conformity import CRITICAL_5PCT, ChiSquareReport, chi_square, criterion_distance
from .digits import DigitCensus, SignificantDigits, census, extract, round_significant
from .gbm import GbmConfig, SweepRecord, criterion_a, criterion_b, simulate_returns, sweep
from .ingest import PriceSeries, parse_csv
from .series import (
    DescriptiveStats,
    Partition,
    ReturnSeries,
    describe,
    filter_for_digits,
    log_returns,
    partition_prices,
    partition_returns,
)

__all__ = [
    "LAWS", "BenfordExpectation", "Law", "bl1", "bl2", "bl12", "expected_counts",
    "CRITICAL_5PCT", "ChiSquareReport", "chi_square", "criterion_distance",
    "DigitCensus", "SignificantDigits", "census", "extract", "round_significant",
    "GbmConfig", "SweepRecord", "criterion_a", "criterion_b", "simulate_returns", "sweep",
    "PriceSeries", "parse_csv",
    "DescriptiveStats", "Partition", "ReturnSeries", "describe", "filter_for_digits",
    "log_returns", "partition_prices", "partition_returns",
]
