"""Command line entry point: ``analyze``, ``simulate``, ``digits`` and ``stats``.

Exit status is 0 on success, 2 for invalid input or arguments and 1 for any
other failure.  ``BENFORDSCOPE_OUT_DIR`` sets the default output directory; a
JSON file passed with ``--config`` supplies defaults keyed by flag name.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .benford import LAWS, Law
from .digits import census
from .gbm import RNG_DESCRIPTION, GbmConfig, box_stats, criterion_a, criterion_b, volatility_grid, sweep
from .ingest import DEFAULT_DATE_COLUMN, DEFAULT_VALUE_COLUMN, file_sha256, parse_csv
from .report import (
    IoFailure,
    analyze,
    census_export,
    export_files,
    render_tables,
    write_files,
)
from .series import (
    SIGNS,
    describe,
    filter_for_digits,
    log_returns,
    normalize_sign,
    partition_prices,
    partition_returns,
)

log = logging.getLogger("benfordscope")

OUT_DIR_ENV = "BENFORDSCOPE_OUT_DIR"
EXIT_OK, EXIT_INTERNAL, EXIT_INVALID = 0, 1, 2


class UsageError(ValueError):
    pass


def _add_input(p: argparse.ArgumentParser, required: bool = True) -> None:
    # Checked after parsing so that a config file can supply it.
    p.add_argument("--input", help="CSV with a header row, ISO dates and closing values"
                   + ("" if required else " (only for --mu from:<segment>)"))
    p.set_defaults(input_required=required)
    p.add_argument("--date-col", default=DEFAULT_DATE_COLUMN)
    p.add_argument("--value-col", default=DEFAULT_VALUE_COLUMN)


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out-dir", default=os.environ.get(OUT_DIR_ENV))
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="benfordscope", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of flag defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full digit analysis with chi-square tables")
    _add_input(p)
    p.add_argument("--subsets", type=int, default=5, metavar="K")
    p.add_argument("--sign", action="append", choices=("all", "pos", "neg"),
                   help="log-return sign blocks to test (repeatable; default: all three)")
    p.add_argument("--laws", nargs="+", choices=("1", "2", "12"), default=["1", "2", "12"])
    _add_output(p)

    p = sub.add_parser("simulate", help="GBM sigma sweep scored against the three laws")
    p.add_argument("--mu", required=True,
                   help="daily drift, or from:<segment> (LR, LR_I, ...) to take the mean log-return of --input")
    _add_input(p, required=False)
    p.add_argument("--subsets", type=int, default=5, metavar="K")
    p.add_argument("--grid-min", type=float, default=1e-4)
    p.add_argument("--grid-max", type=float, default=0.5)
    p.add_argument("--grid-step", type=float, default=1e-4)
    p.add_argument("--days", type=int, default=5000)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", default=os.environ.get(OUT_DIR_ENV))

    p = sub.add_parser("digits", help="digit census of one series")
    _add_input(p)
    p.add_argument("--series", choices=("cv", "lr"), default="cv")
    p.add_argument("--sign", choices=("all", "pos", "neg"), default="all")
    p.add_argument("--laws", nargs="+", choices=("1", "2", "12"), default=["1", "2", "12"])
    _add_output(p)

    p = sub.add_parser("stats", help="descriptive statistics of prices and log-returns")
    _add_input(p)
    p.add_argument("--subsets", type=int, default=5, metavar="K")
    _add_output(p)
    return parser


def _load_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config:
        try:
            defaults = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        defaults = {k.replace("-", "_"): v for k, v in defaults.items()}
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    if args.input_required and not args.input:
        raise UsageError(f"{args.command}: --input is required")
    return args


def _emit(files: dict[str, str], out_dir: str | None) -> None:
    if out_dir:
        for path in write_files(files, out_dir):
            log.info("wrote %s", path)
    else:
        for name, content in files.items():
            sys.stdout.write(f"== {name}\n{content}")


def cmd_analyze(args) -> None:
    prices = parse_csv(args.input, args.date_col, args.value_col)
    signs = [normalize_sign(s) for s in args.sign] if args.sign else list(SIGNS)
    report = analyze(prices, args.subsets, [Law.parse(x) for x in args.laws], signs, file_sha256(args.input))
    sys.stdout.write(render_tables(report))
    if args.out_dir:
        _emit(export_files(report, args.format), args.out_dir)


def resolve_mu(spec: str, input_path: str | None, k: int, date_col: str, value_col: str) -> float:
    if not spec.startswith("from:"):
        try:
            return float(spec)
        except ValueError:
            raise UsageError(f"--mu must be a number or from:<segment>, got {spec!r}") from None
    if not input_path:
        raise UsageError("--mu from:<segment> requires --input")
    segment = spec[len("from:"):]
    returns = log_returns(parse_csv(input_path, date_col, value_col))
    if segment == "LR":
        return float(returns.values.mean())
    for part in partition_returns(returns, k).subsets:
        if part.label == segment:
            return float(part.values.mean())
    raise UsageError(f"unknown segment {segment!r}")


def sweep_csv(records) -> str:
    lines = ["sigma,chi1,chi2,chi12,distance,pass1,pass2,pass12"]
    for r in records:
        cells = [repr(r.sigma), *map(repr, r.chi), repr(r.distance), *(str(int(p)) for p in r.passes)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def sweep_summary(config: GbmConfig, records) -> dict:
    best = criterion_a(records)
    b = criterion_b(records)
    summary = {
        "mu": config.mu,
        "dt": config.dt,
        "n_days": config.n_days,
        "seed": config.seed,
        "grid": {"min": float(config.sigma_grid[0]), "max": float(config.sigma_grid[-1]), "count": int(config.sigma_grid.size)},
        "rng": RNG_DESCRIPTION,
        "digits": "absolute returns rounded to 5 significant digits; exact zeros excluded",
        "criterion_a": {"sigma": best.sigma, "distance": best.distance, "chi": dict(zip(("BL1", "BL2", "BL12"), best.chi))},
        "criterion_b": {},
    }
    for i, law in enumerate(LAWS):
        st = b.stats[law]
        passing_chi = [r.chi[i] for r in records if r.passes[i]]
        summary["criterion_b"][law.value] = {
            "pass_count": int(b.passing[law].size),
            "mean": st.mean if st else None,
            "std": st.std if st else None,
            "mean_over_std": st.mean_over_std if st else None,
            "sigma_box": box_stats(b.passing[law]),
            "chi_box": box_stats(passing_chi),
        }
    return summary


def cmd_simulate(args) -> None:
    mu = resolve_mu(args.mu, args.input, args.subsets, args.date_col, args.value_col)
    config = GbmConfig(mu, volatility_grid(args.grid_min, args.grid_max, args.grid_step), args.days, args.dt, args.seed)
    records = sweep(config, workers=args.workers)
    summary = sweep_summary(config, records)
    files = {"sweep.csv": sweep_csv(records), "summary.json": json.dumps(summary, indent=2) + "\n"}
    for law in LAWS:
        passing = [r for r in records if r.passes[LAWS.index(law)]]
        if passing:
            i = LAWS.index(law)
            files[f"passing_{law.value}.csv"] = "sigma,chi\n" + "".join(f"{r.sigma!r},{r.chi[i]!r}\n" for r in passing)
    if args.out_dir:
        _emit(files, args.out_dir)
    else:
        sys.stdout.write(files["summary.json"])


def cmd_digits(args) -> None:
    prices = parse_csv(args.input, args.date_col, args.value_col)
    if args.series == "cv":
        values, zeros = prices.closes, 0
    else:
        filtered = filter_for_digits(log_returns(prices), normalize_sign(args.sign))
        values, zeros = filtered.values, filtered.zero_count
    c = census(values)
    c.zeros = zeros
    text = census_export(c, args.laws, args.format)
    _emit({f"census.{args.format}": text}, args.out_dir)


def cmd_stats(args) -> None:
    prices = parse_csv(args.input, args.date_col, args.value_col)
    returns = log_returns(prices)
    rows = [("CV", prices.closes)] + [(p.label, p.closes) for p in partition_prices(prices, args.subsets).subsets]
    rows += [("LR", returns.values)] + [(p.label, p.values) for p in partition_returns(returns, args.subsets).subsets]
    table = [{"segment": name, **describe(v).as_dict()} for name, v in rows]
    if args.format == "json":
        text = json.dumps(table, indent=2) + "\n"
    else:
        keys = list(table[0])
        text = ",".join(keys) + "\n" + "".join(
            ",".join("" if r[k] is None else repr(r[k]) if isinstance(r[k], float) else str(r[k]) for k in keys) + "\n"
            for r in table
        )
    _emit({f"stats.{args.format}": text}, args.out_dir)


COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate, "digits": cmd_digits, "stats": cmd_stats}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _load_config(parser, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
