"""Command-line front end.

    popforecast forecast --input C01.csv --il 1 --nl 62 --nc 6 --alpha-c 0.5 --confidence 0.9
    popforecast backtest --input data/ --targets 11..63 --format structured
    popforecast synth --output data/ --centers 16 --periods 63 --seed 7

Exit status: 0 success, 1 input or domain error, 2 window does not fit the data.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from popforecast.backtest import BacktestProtocol, aggregate_reports, run_backtest
from popforecast.errors import ForecastError, ParseError
from popforecast.forecast import ForecastParams, forecast_next
from popforecast.report import FORMATS, render_backtest, render_forecast, render_synth
from popforecast.series import read_series, write_series
from popforecast.synth import SynthConfig, generate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RANGE = 2

# Long-window length of the first default backtest target.
DEFAULT_FIRST_NL = 10


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for range errors here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_targets(text: str) -> tuple[int, int]:
    first, sep, last = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return int(first), int(last)
    except ValueError:
        raise ParseError(f"--targets expects A..B, got {text!r}") from None


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--il", type=int, default=1, help="first period of the long window (I_L)")
    p.add_argument("--nc", type=int, default=6, help="short window length (N_C)")
    p.add_argument("--alpha-c", type=float, default=0.5, help="weight of the short-window estimate")
    p.add_argument("--confidence", type=float, default=0.9, help="interval coverage level")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="human")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="popforecast", description="Dual-window regression population forecasts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("forecast", help="forecast the period after the long window")
    p.add_argument("-i", "--input", required=True, help="series CSV (t,period,population)")
    _add_model_flags(p)
    p.add_argument("--nl", type=int, help="long window length (N_L); default: through the last observation")
    _add_output_flags(p)

    p = sub.add_parser("backtest", help="rolling-origin coverage check")
    p.add_argument("-i", "--input", required=True, nargs="+", help="series CSV files or directories of them")
    _add_model_flags(p)
    p.add_argument(
        "--targets",
        type=str,
        help=f"target periods A..B; default: il+{DEFAULT_FIRST_NL} through each series' last period",
    )
    _add_output_flags(p)

    p = sub.add_parser("synth", help="write seeded synthetic series")
    p.add_argument("-o", "--output", required=True, help="directory for the generated CSV files")
    defaults = SynthConfig()
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--centers", type=int, default=defaults.centers)
    p.add_argument("--periods", type=int, default=defaults.periods)
    p.add_argument("--level", type=float, default=defaults.level, help="population at t=0")
    p.add_argument("--trend", type=float, default=defaults.trend, help="change per period")
    p.add_argument("--noise", type=float, default=defaults.noise, help="Gaussian noise standard deviation")
    p.add_argument("--shocks", type=int, default=defaults.shocks, help="one-month shocks per center")
    p.add_argument("--shock-size", type=float, default=defaults.shock_size)
    p.add_argument("--start-year", type=int, default=defaults.start_year, help="year of t=1 in period labels")
    p.add_argument("--format", choices=FORMATS, default="human", help="format of the summary on stdout")
    return parser


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _input_files(paths: list[str]) -> list[Path]:
    files = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found = sorted(path.glob("*.csv"))
            if not found:
                raise ParseError(f"no .csv files in directory {raw}")
            files += found
        else:
            files.append(path)
    return files


def cmd_forecast(args) -> int:
    series = read_series(args.input)
    n_l = args.nl if args.nl is not None else series.last_t - args.il + 1
    params = ForecastParams(args.il, n_l, args.nc, args.alpha_c, args.confidence)
    fc = forecast_next(series, params)
    if fc.lower < 0:
        print(f"warning: lower bound {fc.lower:.2f} is negative; populations cannot be negative", file=sys.stderr)
    _emit(render_forecast(series, params, fc, args.format), args.output)
    return EXIT_OK


def cmd_backtest(args) -> int:
    all_series = [read_series(f) for f in _input_files(args.input)]
    fixed = parse_targets(args.targets) if args.targets else None
    protocols, reports = [], []
    for series in all_series:
        first, last = fixed or (args.il + DEFAULT_FIRST_NL, series.last_t)
        protocol = BacktestProtocol(args.il, args.nc, args.alpha_c, args.confidence, first, last)
        protocols.append(protocol)
        reports.append(run_backtest(series, protocol))
    aggregate = aggregate_reports(reports)
    _emit(render_backtest(reports, aggregate, protocols, args.format), args.output)
    return EXIT_OK


def cmd_synth(args) -> int:
    config = SynthConfig(
        seed=args.seed,
        centers=args.centers,
        periods=args.periods,
        level=args.level,
        trend=args.trend,
        noise=args.noise,
        shocks=args.shocks,
        shock_size=args.shock_size,
        start_year=args.start_year,
    )
    generated = generate(config)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    for series, _ in generated:
        with (out_dir / f"{series.center_id}.csv").open("w", newline="", encoding="utf-8") as fh:
            write_series(series, fh)
    sys.stdout.write(render_synth(config, generated, args.format))
    return EXIT_OK


COMMANDS = {"forecast": cmd_forecast, "backtest": cmd_backtest, "synth": cmd_synth}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return COMMANDS[args.command](args)
    except ForecastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
