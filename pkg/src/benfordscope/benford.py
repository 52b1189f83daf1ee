"""Theoretical Benford distributions for the first, second and first-two digits."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Law(str, Enum):
    BL1 = "BL1"
    BL2 = "BL2"
    BL12 = "BL12"

    @classmethod
    def parse(cls, value: "str | Law") -> "Law":
        """Accept ``Law`` members, their names, or the short CLI forms ``1``, ``2``, ``12``."""
        if isinstance(value, Law):
            return value
        text = str(value).strip().upper()
        if not text.startswith("BL"):
            text = "BL" + text
        return cls(text)


LAWS = (Law.BL1, Law.BL2, Law.BL12)


@dataclass(frozen=True)
class BenfordExpectation:
    law: Law
    bins: np.ndarray
    probs: np.ndarray

    @property
    def dof(self) -> int:
        return len(self.bins) - 1

    def prob(self, bin_label: int) -> float:
        return float(self.probs[int(bin_label) - int(self.bins[0])])


def _pair_probs() -> np.ndarray:
    pairs = np.arange(10, 100, dtype=np.float64)
    return np.log10(1.0 + 1.0 / pairs)


def bl1() -> BenfordExpectation:
    d1 = np.arange(1, 10)
    return BenfordExpectation(Law.BL1, d1, np.log10(1.0 + 1.0 / d1))


def bl2() -> BenfordExpectation:
    d2 = np.arange(0, 10)
    k = np.arange(1, 10)[:, None]
    probs = np.log10(1.0 + 1.0 / (10 * k + d2[None, :])).sum(axis=0)
    return BenfordExpectation(Law.BL2, d2, probs)


def bl12() -> BenfordExpectation:
    return BenfordExpectation(Law.BL12, np.arange(10, 100), _pair_probs())


def expectation(law: "Law | str") -> BenfordExpectation:
    law = Law.parse(law)
    return {Law.BL1: bl1, Law.BL2: bl2, Law.BL12: bl12}[law]()


def expected_counts(law: BenfordExpectation, n: float) -> np.ndarray:
    """Expected bin counts ``n * p`` for a sample of ``n`` non-zero values."""
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    return n * law.probs
