"""Pearson chi-square conformity of digit censuses with Benford's laws."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import chi2

from .benford import LAWS, BenfordExpectation, Law, expectation, expected_counts
from .digits import DigitCensus

# Upper 5% points of chi-square at 8, 9 and 89 degrees of freedom, to 3 decimals.
CRITICAL_5PCT = {Law.BL1: 15.507, Law.BL2: 16.919, Law.BL12: 112.022}
CRITICAL_TRIPLE = tuple(CRITICAL_5PCT[law] for law in LAWS)

LOW_EXPECTED = 5.0


class EmptyCensus(ValueError):
    pass


def critical_value(dof: int, alpha: float = 0.05) -> float:
    """Upper ``alpha`` quantile of the chi-square distribution."""
    return float(chi2.isf(alpha, dof))


@dataclass(frozen=True)
class BinDetail:
    bin: int
    observed: int | float
    expected: float
    contribution: float


@dataclass(frozen=True)
class ChiSquareReport:
    law: Law
    statistic: float
    dof: int
    critical_5pct: float
    passed: bool
    n: int | float
    per_bin: tuple[BinDetail, ...]

    @property
    def low_expected_bins(self) -> tuple[int, ...]:
        """Bins whose expected count is below 5 (kept, but worth flagging)."""
        return tuple(b.bin for b in self.per_bin if b.expected < LOW_EXPECTED)

    def as_dict(self) -> dict:
        return {
            "law": self.law.value,
            "statistic": self.statistic,
            "dof": self.dof,
            "critical_5pct": self.critical_5pct,
            "pass": self.passed,
            "n": self.n,
            "low_expected_bins": list(self.low_expected_bins),
            "per_bin": [
                {"bin": b.bin, "observed": b.observed, "expected": b.expected, "contribution": b.contribution}
                for b in self.per_bin
            ],
        }


def pearson(observed, law: "BenfordExpectation | Law | str") -> ChiSquareReport:
    """Pearson statistic sum((O - E)^2 / E) of raw bin counts against ``law``.

    Bins are never merged, even when their expected count is small.
    """
    if not isinstance(law, BenfordExpectation):
        law = expectation(law)
    observed = np.asarray(observed)
    if observed.shape != law.probs.shape:
        raise ValueError(f"{law.law.value} needs {law.probs.size} bins, got {observed.shape}")
    n = observed.sum()
    if not n > 0:
        raise EmptyCensus(f"no non-zero observations for {law.law.value}")
    expected = expected_counts(law, n)
    contrib = (observed - expected) ** 2 / expected
    statistic = float(contrib.sum())
    critical = CRITICAL_5PCT[law.law]
    per_bin = tuple(
        BinDetail(int(b), o.item(), float(e), float(c))
        for b, o, e, c in zip(law.bins, observed, expected, contrib)
    )
    return ChiSquareReport(law.law, statistic, law.dof, critical, statistic < critical, n.item(), per_bin)


def chi_square(census: DigitCensus, law: "BenfordExpectation | Law | str") -> ChiSquareReport:
    """Test a digit census against one law; recorded zeros are not part of ``n``."""
    law_id = law.law if isinstance(law, BenfordExpectation) else Law.parse(law)
    return pearson(census.counts(law_id), law)


def chi_square_all(census: DigitCensus, laws: Sequence = LAWS) -> dict[Law, ChiSquareReport]:
    return {Law.parse(law): chi_square(census, law) for law in laws}


def criterion_distance(observed: Sequence[float], critical: Sequence[float] = CRITICAL_TRIPLE) -> float:
    """Euclidean distance between observed statistics and their critical values."""
    if len(observed) != len(critical):
        raise ValueError("observed and critical must pair up one-to-one")
    return math.sqrt(sum((o - c) ** 2 for o, c in zip(observed, critical)))


def statistics_from_counts(counts: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """Row-wise Pearson statistic for a stack of count vectors (one row per sample)."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum(axis=-1, keepdims=True)
    expected = n * probs
    with np.errstate(divide="ignore", invalid="ignore"):
        stat = ((counts - expected) ** 2 / expected).sum(axis=-1)
    return np.where(n[..., 0] > 0, stat, np.nan)
