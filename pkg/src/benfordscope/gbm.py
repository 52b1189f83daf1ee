"""Benford conformity of returns simulated under geometric Brownian motion.

For every volatility ``sigma`` on a grid, ``n_days`` daily log-returns

    r = (mu - sigma**2 / 2) * dt + sigma * sqrt(dt) * z,    z ~ N(0, 1)

are drawn, their absolute values rounded to 5 significant digits, and the
resulting digit census is scored against BL1, BL2 and BL12.  Two selection
rules summarise a sweep: the sigma closest (Euclidean) to the three 5%
critical values, and the set of sigmas for which a law passes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .benford import LAWS, Law, bl1, bl2, bl12
from .conformity import CRITICAL_TRIPLE, statistics_from_counts
from .digits import pair_codes

RNG_DESCRIPTION = "numpy PCG64 seeded by SeedSequence((seed, column)); ziggurat standard normal"


class EmptySweep(ValueError):
    pass


def volatility_grid(start: float = 1e-4, stop: float = 0.5, step: float = 1e-4) -> np.ndarray:
    """Evenly spaced sigma values from ``start`` to ``stop`` inclusive."""
    count = int(round((stop - start) / step)) + 1
    return np.round(start + step * np.arange(count), 12)


@dataclass
class GbmConfig:
    mu: float
    sigma_grid: np.ndarray = field(default_factory=volatility_grid)
    n_days: int = 5000
    dt: float = 1.0
    seed: int = 0
    sig_digits: int = 5

    def __post_init__(self):
        self.sigma_grid = np.asarray(self.sigma_grid, dtype=np.float64).ravel()
        if self.sigma_grid.size == 0:
            raise ValueError("sigma_grid is empty")
        if np.any(self.sigma_grid <= 0) or np.any(np.diff(self.sigma_grid) <= 0):
            raise ValueError("sigma_grid must be positive and strictly increasing")
        if self.n_days < 1:
            raise ValueError("n_days must be >= 1")
        if not self.dt > 0:
            raise ValueError("dt must be > 0")


@dataclass(frozen=True)
class SweepRecord:
    sigma: float
    chi: tuple[float, float, float]
    distance: float
    passes: tuple[bool, bool, bool]
    n: int
    zeros: int = 0


@dataclass(frozen=True)
class PassStats:
    count: int
    mean: float
    std: float
    mean_over_std: float


@dataclass
class CriterionB:
    passing: dict[Law, np.ndarray]
    stats: dict[Law, PassStats | None]


@dataclass
class SweepSummary:
    best_a: SweepRecord
    passing_b: dict[Law, np.ndarray]
    stats_b: dict[Law, PassStats | None]

    @property
    def best_sigma_a(self) -> float:
        return self.best_a.sigma


def column_rng(seed: int, column: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(column))))


def simulate_returns(mu: float, sigma: float, n: int, dt: float = 1.0, rng: np.random.Generator | None = None) -> np.ndarray:
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = rng if rng is not None else np.random.default_rng()
    z = rng.standard_normal(n)
    return (mu - sigma**2 / 2) * dt + sigma * math.sqrt(dt) * z


def _pair_counts(config: GbmConfig, columns: range) -> np.ndarray:
    """Counts of pair codes 0..99 (0 = exact zero) for a block of grid columns."""
    out = np.zeros((len(columns), 100), dtype=np.int64)
    for row, j in enumerate(columns):
        r = simulate_returns(config.mu, float(config.sigma_grid[j]), config.n_days, config.dt, column_rng(config.seed, j))
        out[row] = np.bincount(pair_codes(r, config.sig_digits), minlength=100)
    return out


def sweep_counts(config: GbmConfig, workers: int = 1, chunk: int = 250) -> np.ndarray:
    """First-two-digit counts per grid column, shape ``(len(grid), 100)``.

    Column 0 holds exact zeros; columns 10..99 the pair counts.  Each column
    draws from its own stream, so the result does not depend on ``workers``
    or ``chunk``.
    """
    m = config.sigma_grid.size
    blocks = [range(a, min(a + chunk, m)) for a in range(0, m, chunk)]
    if workers <= 1:
        parts = [_pair_counts(config, b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _pair_counts(config, b), blocks))
    return np.concatenate(parts, axis=0)


def records_from_counts(sigmas: np.ndarray, counts: np.ndarray) -> list[SweepRecord]:
    first_two = counts[:, 10:]
    grid = first_two.reshape(-1, 9, 10)
    stats = np.column_stack([
        statistics_from_counts(grid.sum(axis=2), bl1().probs),
        statistics_from_counts(grid.sum(axis=1), bl2().probs),
        statistics_from_counts(first_two, bl12().probs),
    ])
    crit = np.asarray(CRITICAL_TRIPLE)
    records = []
    for sigma, chi, row in zip(sigmas, stats, counts):
        chi_t = tuple(float(c) for c in chi)
        distance = math.sqrt(sum((c - k) ** 2 for c, k in zip(chi_t, crit)))
        passes = tuple(bool(c < k) for c, k in zip(chi_t, crit))
        records.append(SweepRecord(float(sigma), chi_t, distance, passes, int(row[10:].sum()), int(row[0])))
    return records


def sweep(config: GbmConfig, workers: int = 1, chunk: int = 250) -> list[SweepRecord]:
    """Score every sigma on the grid against BL1, BL2 and BL12."""
    return records_from_counts(config.sigma_grid, sweep_counts(config, workers, chunk))


def criterion_a(records: list[SweepRecord]) -> SweepRecord:
    """Record with the smallest distance to the critical values; ties go to the smaller sigma."""
    if not records:
        raise EmptySweep("no sweep records")
    return min(records, key=lambda r: (r.distance, r.sigma))


def pass_stats(sigmas: np.ndarray) -> PassStats | None:
    if sigmas.size < 2:
        return None
    mean = float(sigmas.mean())
    std = float(sigmas.std(ddof=1))
    return PassStats(int(sigmas.size), mean, std, mean / std if std > 0 else math.inf)


def criterion_b(records: list[SweepRecord]) -> CriterionB:
    """Sigmas passing each law at 5%, with mean, sample std and mean/std of each set."""
    passing = {}
    for i, law in enumerate(LAWS):
        passing[law] = np.array([r.sigma for r in records if r.passes[i]], dtype=np.float64)
    return CriterionB(passing, {law: pass_stats(s) for law, s in passing.items()})


def summarize(records: list[SweepRecord]) -> SweepSummary:
    b = criterion_b(records)
    return SweepSummary(criterion_a(records), b.passing, b.stats)


def box_stats(values) -> dict | None:
    """Quartiles and 1.5 IQR whiskers, ready for a box plot."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    if x.size == 0:
        return None
    q1, med, q3 = np.percentile(x, [25, 50, 75])
    iqr = q3 - q1
    inside = x[(x >= q1 - 1.5 * iqr) & (x <= q3 + 1.5 * iqr)]
    return {
        "count": int(x.size),
        "min": float(x[0]),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "max": float(x[-1]),
        "whisker_low": float(inside[0]),
        "whisker_high": float(inside[-1]),
        "mean": float(x.mean()),
        "outliers": int(x.size - inside.size),
    }
