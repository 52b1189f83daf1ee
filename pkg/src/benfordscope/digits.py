"""Significant-digit extraction and digit censuses.

Rounding and extraction work on the decimal text of a value (its shortest
round-tripping ``repr``), never on the binary expansion, so that e.g. ``0.3``
has first two digits ``30`` and not ``29``.  Ties round half away from zero.

Exactly-zero inputs are kept as a distinct "zero" digit (first and second
digit both 0) and counted separately from the non-zero sample size ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

import numpy as np

from .benford import Law

ROUNDING_RULE = "round half away from zero, 5 significant digits, on shortest decimal repr"
ZERO_DIGIT = 0

# Distance from a rounding tie or decade edge inside which the vectorised path
# defers to exact decimal arithmetic.  Float error in the scaled value is ~1e-11.
_TIE_GUARD = 1e-6


def _as_decimal(x) -> Decimal:
    if isinstance(x, Decimal):
        return x
    if isinstance(x, str):
        return Decimal(x.strip())
    x = float(x)
    if not np.isfinite(x):
        raise ValueError(f"cannot take digits of non-finite value {x!r}")
    return Decimal(repr(x))


def round_significant_decimal(x, sig: int = 5) -> Decimal:
    """Round to ``sig`` significant digits and return the exact decimal result."""
    if sig < 1:
        raise ValueError(f"sig must be >= 1, got {sig}")
    d = _as_decimal(x)
    if d == 0:
        return Decimal(0)
    quantum = Decimal(1).scaleb(d.adjusted() - sig + 1)
    out = d.quantize(quantum, rounding=ROUND_HALF_UP)
    if out.adjusted() > d.adjusted():
        # Carry into a new decade (9.99996 -> 10.0000): drop the extra trailing zero.
        out = out.quantize(quantum.scaleb(1))
    return out


def round_significant(x, sig: int = 5) -> float:
    """Round ``x`` to ``sig`` significant digits, ties away from zero.

    >>> round_significant(1992.44, 5)
    1992.4
    >>> round_significant(-0.0999996, 5)
    -0.1
    """
    return float(round_significant_decimal(x, sig))


@dataclass(frozen=True)
class SignificantDigits:
    """First digit, second digit and first-two-digit pair of one value.

    ``d1 == 0`` marks an exactly-zero input; its ``d2`` is 0 and ``d12`` is None.
    """

    d1: int
    d2: int
    d12: int | None

    @property
    def is_zero(self) -> bool:
        return self.d1 == ZERO_DIGIT


def extract(x) -> SignificantDigits:
    """Digits of ``x`` as written; sign, decimal point and leading zeros are ignored.

    ``x`` is expected to be pre-rounded (see :func:`round_significant`).  A value
    with a single significant digit, like ``0.002``, has second digit 0.
    """
    d = _as_decimal(x)
    if d == 0:
        return SignificantDigits(ZERO_DIGIT, 0, None)
    digits = d.as_tuple().digits
    # Decimal keeps no leading zeros, except when built from text such as "007".
    start = next(i for i, v in enumerate(digits) if v != 0)
    d1 = digits[start]
    d2 = digits[start + 1] if start + 1 < len(digits) else 0
    return SignificantDigits(d1, d2, 10 * d1 + d2)


def pair_codes(values, sig: int | None = 5) -> np.ndarray:
    """First-two-digit pair (10..99) of every value, 0 for exact zeros.

    Vectorised equivalent of ``extract(round_significant(v, sig)).d12``.  Values
    whose scaled mantissa sits too close to a rounding tie or a decade boundary
    are resolved with exact decimal arithmetic.  ``sig=None`` skips rounding.
    """
    arr = np.abs(np.asarray(values, dtype=np.float64)).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError("cannot take digits of non-finite values")
    codes = np.zeros(arr.shape, dtype=np.int64)
    if sig is None:
        for i in np.flatnonzero(arr):
            codes[i] = extract(arr[i]).d12
        return codes
    if sig < 1:
        raise ValueError(f"sig must be >= 1, got {sig}")

    nz = np.flatnonzero(arr)
    a = arr[nz]
    shift = (sig - 1) - np.floor(np.log10(a)).astype(np.int64)
    # Powers of ten are exact floats only up to 1e22; beyond that use the slow path.
    exact = np.abs(shift) <= 22
    shift = np.where(exact, shift, 0)
    # Multiply or divide by an exact power of ten so only one rounding occurs.
    up = shift >= 0
    scaled = np.empty_like(a)
    scaled[up] = a[up] * np.power(10.0, shift[up])
    scaled[~up] = a[~up] / np.power(10.0, -shift[~up])

    lo, hi = 10.0 ** (sig - 1), 10.0**sig
    scaled[~exact] = lo
    frac = scaled - np.floor(scaled)
    risky = (scaled < lo + _TIE_GUARD) | (scaled >= hi - _TIE_GUARD) | (np.abs(frac - 0.5) < _TIE_GUARD)

    mant = np.floor(scaled + 0.5).astype(np.int64)
    carry = mant >= int(hi)
    if sig >= 2:
        pairs = np.where(carry, 10, mant // 10 ** (sig - 2))
    else:
        pairs = np.where(carry, 10, mant * 10)
    for j in np.flatnonzero(risky):
        pairs[j] = extract(round_significant_decimal(float(a[j]), sig)).d12
    codes[nz] = pairs
    return codes


@dataclass
class DigitCensus:
    """Observed digit counts of a sample.

    ``first`` holds digits 1..9, ``second`` digits 0..9 and ``first_two``
    pairs 10..99.  Exact zeros are tallied in ``zeros`` only; ``n`` counts the
    non-zero values and is the sample size used for conformity testing.
    """

    first: np.ndarray = field(default_factory=lambda: np.zeros(9, dtype=np.int64))
    second: np.ndarray = field(default_factory=lambda: np.zeros(10, dtype=np.int64))
    first_two: np.ndarray = field(default_factory=lambda: np.zeros(90, dtype=np.int64))
    zeros: int = 0

    @property
    def n(self) -> int:
        return int(self.first.sum())

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "DigitCensus":
        codes = np.asarray(codes, dtype=np.int64)
        first_two = np.bincount(codes[codes > 0] - 10, minlength=90)
        return cls.from_first_two(first_two, int((codes == 0).sum()))

    @classmethod
    def from_first_two(cls, first_two, zeros: int = 0) -> "DigitCensus":
        first_two = np.asarray(first_two, dtype=np.int64)
        grid = first_two.reshape(9, 10)
        return cls(grid.sum(axis=1), grid.sum(axis=0), first_two, int(zeros))

    def counts(self, law: "Law | str") -> np.ndarray:
        law = Law.parse(law)
        return {Law.BL1: self.first, Law.BL2: self.second, Law.BL12: self.first_two}[law]

    def __add__(self, other: "DigitCensus") -> "DigitCensus":
        return DigitCensus(
            self.first + other.first,
            self.second + other.second,
            self.first_two + other.first_two,
            self.zeros + other.zeros,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, DigitCensus):
            return NotImplemented
        return (
            self.zeros == other.zeros
            and np.array_equal(self.first, other.first)
            and np.array_equal(self.second, other.second)
            and np.array_equal(self.first_two, other.first_two)
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "zeros": self.zeros,
            "first": {str(d): int(c) for d, c in zip(range(1, 10), self.first)},
            "second": {str(d): int(c) for d, c in zip(range(0, 10), self.second)},
            "first_two": {str(d): int(c) for d, c in zip(range(10, 100), self.first_two)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DigitCensus":
        first_two = np.array([data["first_two"][str(d)] for d in range(10, 100)], dtype=np.int64)
        return cls.from_first_two(first_two, data["zeros"])


def census(values: Iterable[float], sig: int | None = 5) -> DigitCensus:
    """Digit census of ``values`` after rounding each to ``sig`` significant digits."""
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.float64)
    return DigitCensus.from_codes(pair_codes(arr, sig))
