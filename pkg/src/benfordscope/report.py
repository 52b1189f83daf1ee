"""End-to-end empirical analysis and its serialisation.

The analysis covers the closing values and their log-returns, whole and split
into ``k`` equal subsets, with the returns additionally split by sign.  All
outputs are plain data so a report can be written and read back unchanged.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .benford import LAWS, Law, expectation
from .conformity import CRITICAL_5PCT, EmptyCensus, chi_square
from .digits import ROUNDING_RULE, DigitCensus, census
from .ingest import PriceSeries
from .series import (
    SIGNS,
    aligned_returns,
    describe,
    filter_for_digits,
    log_returns,
    normalize_sign,
    partition_prices,
    partition_returns,
)

SIG_DIGITS = 5
ZERO_HANDLING = "exact-zero returns are tallied separately and excluded from N_k"
_SIGN_SUFFIX = {"all": "", "positive": "+", "negative": "-"}


class IoFailure(OSError):
    pass


@dataclass
class AnalysisReport:
    metadata: dict
    descriptive: list[dict] = field(default_factory=list)
    censuses: dict[str, DigitCensus] = field(default_factory=dict)
    chi_square: list[dict] = field(default_factory=list)
    missing_digits: dict[str, list[int]] = field(default_factory=dict)
    zero_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "descriptive": self.descriptive,
            "zero_counts": self.zero_counts,
            "missing_digits": self.missing_digits,
            "chi_square": self.chi_square,
            "censuses": {k: c.to_dict() for k, c in self.censuses.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        return cls(
            metadata=data["metadata"],
            descriptive=data["descriptive"],
            censuses={k: DigitCensus.from_dict(v) for k, v in data["censuses"].items()},
            chi_square=data["chi_square"],
            missing_digits=data["missing_digits"],
            zero_counts=data["zero_counts"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))

    def row(self, segment: str) -> dict:
        for r in self.chi_square:
            if r["segment"] == segment:
                return r
        raise KeyError(segment)


def _chi_row(segment: str, group: str, c: DigitCensus, laws: Sequence[Law]) -> dict:
    row = {"segment": segment, "group": group, "census": segment, "n": c.n, "zeros": c.zeros}
    for law in laws:
        try:
            rep = chi_square(c, law)
            row[law.value] = rep.statistic
            row[f"pass_{law.value}"] = rep.passed
            row[f"low_expected_{law.value}"] = len(rep.low_expected_bins)
        except EmptyCensus:
            row[law.value] = None
            row[f"pass_{law.value}"] = None
            row[f"low_expected_{law.value}"] = None
    return row


def _describe_row(name: str, values) -> dict:
    if len(values) < 2:
        return {"segment": name, "min": None, "max": None, "count": len(values), "mean": None,
                "std_dev": None, "skewness": None, "excess_kurtosis": None, "total": None}
    return {"segment": name, **describe(values).as_dict()}


def analyze(
    prices: PriceSeries,
    k: int = 5,
    laws: Sequence = LAWS,
    signs: Sequence[str] = SIGNS,
    input_sha256: str | None = None,
) -> AnalysisReport:
    """Digit analysis of closing values and log-returns, whole and in ``k`` subsets.

    The whole log-return series is tested under two conventions: ``LR`` drops
    the ``k - 1`` returns straddling subset boundaries (so it is the union of
    the subsets), ``LR*`` keeps every return.
    """
    laws = [Law.parse(x) for x in laws]
    signs = [normalize_sign(s) for s in signs]
    cv_parts = partition_prices(prices, k)
    returns = log_returns(prices)
    lr_parts = partition_returns(returns, k)

    report = AnalysisReport(metadata={
        "tool": f"benfordscope {__version__}",
        "label": prices.label,
        "value_column": prices.value_column,
        "input_sha256": input_sha256,
        "first_date": prices.dates[0].isoformat(),
        "last_date": prices.dates[-1].isoformat(),
        "n_prices": len(prices),
        "n_returns": len(returns),
        "k": k,
        "subset_upper_limits": list(cv_parts.boundaries),
        "dropped_return_indices": list(lr_parts.dropped),
        "rounding": ROUNDING_RULE,
        "significant_digits": SIG_DIGITS,
        "digit_extraction": "decimal text of the rounded value",
        "zero_handling": ZERO_HANDLING,
        "whole_lr_conventions": {
            "LR": "union of the k subsets (boundary-straddling returns dropped)",
            "LR*": "all returns",
        },
        "laws": [law.value for law in laws],
        "critical_5pct": {law.value: CRITICAL_5PCT[law] for law in laws},
        "signs": signs,
    })

    cv_segments = [("CV", prices.closes)] + [(p.label, p.closes) for p in cv_parts.subsets]
    lr_whole = aligned_returns(returns, k)
    lr_segments = [("LR", returns.values)] + [(p.label, p.values) for p in lr_parts.subsets]

    for name, values in cv_segments + lr_segments:
        report.descriptive.append(_describe_row(name, values))

    for name, values in cv_segments:
        c = census(values, SIG_DIGITS)
        report.censuses[name] = c
        report.chi_square.append(_chi_row(name, "CV", c, laws))
        if name != "CV":
            report.missing_digits[name] = [int(x) for x in c.first]

    report.zero_counts["LR*"] = int(returns.zero_flags.sum())
    report.zero_counts["LR"] = int(lr_whole.zero_flags.sum())
    for part in lr_parts.subsets:
        report.zero_counts[part.label] = int(part.zero_flags.sum())

    lr_series = [("LR", lr_whole), ("LR*", returns)] + [(p.label, p) for p in lr_parts.subsets]
    for sign in signs:
        group = "LR" + _SIGN_SUFFIX[sign]
        for name, series in lr_series:
            filtered = filter_for_digits(series, sign)
            c = census(filtered.values, SIG_DIGITS)
            c.zeros = filtered.zero_count
            label = name + _SIGN_SUFFIX[sign]
            report.censuses[label] = c
            report.chi_square.append(_chi_row(label, group, c, laws))
    return report


# -- rendering ---------------------------------------------------------------

def _fmt(x) -> str:
    return "-" if x is None else f"{x:.2f}"


def render_tables(report: AnalysisReport) -> str:
    """Plain-text chi-square tables, one block per group, plus missing first digits."""
    laws = [Law(x) for x in report.metadata["laws"]]
    out = io.StringIO()
    meta = report.metadata
    out.write(f"# {meta['label']} [{meta['value_column']}] {meta['first_date']}..{meta['last_date']}"
              f" ({meta['n_prices']} prices), sha256={meta['input_sha256']}\n")
    header = f"{'N_k':>7}  {'segment':<10}" + "".join(f"{law.value:>12}" for law in laws)
    crit = f"{'':>7}  {'chi2_c(5%)':<10}" + "".join(f"{CRITICAL_5PCT[law]:>12.3f}" for law in laws)
    dof = f"{'':>7}  {'dof':<10}" + "".join(f"{expectation(law).dof:>12}" for law in laws)
    group = None
    for row in report.chi_square:
        if row["group"] != group:
            group = row["group"]
            out.write(f"\n[{group}]\n{header}\n{dof}\n{crit}\n")
        cells = "".join(f"{_fmt(row[law.value]):>12}" for law in laws)
        out.write(f"{row['n']:>7}  {row['segment']:<10}{cells}\n")
    if report.missing_digits:
        out.write("\n[first-digit counts]\n" + f"{'d1':<10}" + "".join(f"{d:>6}" for d in range(1, 10)) + "\n")
        for name, counts in report.missing_digits.items():
            out.write(f"{name:<10}" + "".join(f"{c:>6}" for c in counts) + "\n")
    return out.getvalue()


# -- export ------------------------------------------------------------------

def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def census_rows(c: DigitCensus, law: Law):
    exp = expectation(law)
    observed = c.counts(law)
    n = c.n
    for b, o, p in zip(exp.bins, observed, exp.probs):
        yield int(b), int(o), float(n * p), (float(o / n) if n else 0.0)


def histogram_table(report: AnalysisReport, law: Law, segments: Sequence[str]) -> str:
    """Bins as rows, segments as columns; suitable for a stacked bar chart."""
    exp = expectation(law)
    rows = []
    for i, b in enumerate(exp.bins):
        rows.append([int(b)] + [int(report.censuses[s].counts(law)[i]) for s in segments])
    return _csv_text(["bin", *segments], rows)


def export_files(report: AnalysisReport, fmt: str = "csv") -> dict[str, str]:
    """File name -> content for ``fmt`` in {"csv", "json"}; deterministic for a given report."""
    if fmt == "json":
        return {"report.json": report.to_json()}
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    laws = [Law(x) for x in report.metadata["laws"]]
    files = {}
    stat_keys = ["min", "max", "count", "mean", "std_dev", "skewness", "excess_kurtosis", "total"]
    files["descriptive.csv"] = _csv_text(
        ["segment", *stat_keys], ([d["segment"]] + [d[k] for k in stat_keys] for d in report.descriptive)
    )
    chi_cols = [f"{p}{law.value}" for law in laws for p in ("", "pass_", "low_expected_")]
    files["chi_square.csv"] = _csv_text(
        ["segment", "group", "n", "zeros", *chi_cols],
        ([r["segment"], r["group"], r["n"], r["zeros"]] + [r[c] for c in chi_cols] for r in report.chi_square),
    )
    files["missing_digits.csv"] = _csv_text(
        ["segment", *map(str, range(1, 10))], ([name, *counts] for name, counts in report.missing_digits.items())
    )
    files["zero_counts.csv"] = _csv_text(["segment", "zeros"], report.zero_counts.items())
    for law in laws:
        files[f"census_{law.value}.csv"] = _csv_text(
            ["segment", "bin", "observed", "expected", "proportion"],
            ([name, *r] for name, c in report.censuses.items() for r in census_rows(c, law)),
        )
        cv_subsets = list(report.missing_digits)
        lr_subsets = [r["segment"] for r in report.chi_square if r["group"] == "LR" and r["segment"] not in ("LR", "LR*")]
        if cv_subsets:
            files[f"histogram_CV_{law.value}.csv"] = histogram_table(report, law, cv_subsets)
        if lr_subsets:
            files[f"histogram_LR_{law.value}.csv"] = histogram_table(report, law, lr_subsets)
        for sign in ("+", "-"):
            signed = [r["segment"] for r in report.chi_square if r["group"] == "LR" + sign
                      and r["segment"] not in ("LR" + sign, "LR*" + sign)]
            if signed:
                tag = "pos" if sign == "+" else "neg"
                files[f"histogram_LR_{tag}_{law.value}.csv"] = histogram_table(report, law, signed)
    return files


def write_files(files: dict[str, str], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, content in files.items():
            path = out / name
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(content)
            written.append(path)
    except OSError as exc:
        raise IoFailure(f"cannot write to {out}: {exc}") from exc
    return written


def report_export(report: AnalysisReport, out_dir: str | Path, fmt: str = "csv") -> list[Path]:
    return write_files(export_files(report, fmt), out_dir)


def load_report(path: str | Path) -> AnalysisReport:
    return AnalysisReport.from_json(Path(path).read_text(encoding="utf-8"))


def census_export(c: DigitCensus, laws: Sequence = LAWS, fmt: str = "csv") -> str:
    """Bin-level census table (bin, observed, expected, proportion) for each law."""
    laws = [Law.parse(x) for x in laws]
    if fmt == "json":
        payload = {
            "n": c.n,
            "zeros": c.zeros,
            "laws": {
                law.value: [dict(zip(("bin", "observed", "expected", "proportion"), r)) for r in census_rows(c, law)]
                for law in laws
            },
        }
        return json.dumps(payload, indent=2) + "\n"
    return _csv_text(["law", "bin", "observed", "expected", "proportion"],
                     ([law.value, *r] for law in laws for r in census_rows(c, law)))
