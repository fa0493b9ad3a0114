"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines.
"""

import contextlib
import math
import time

import numpy as np
import pytest

from conftest import GOLDEN_DIR
from oracles import ols_exact, t_quantile_by_integration
from popforecast.backtest import BacktestProtocol, run_backtest
from popforecast.cli import main
from popforecast.forecast import ForecastParams, forecast_next
from popforecast.report import parse_structured
from popforecast.series import PopulationSeries
from popforecast.statkern import fit_ols, t_quantile
from test_cli import BACKTEST_ARGS, DATA, FORECAST_ARGS, FORMATS, SYNTH_ARGS

NUMERIC_FIELDS = ("point", "rho_l", "rho_c", "radius", "lower", "upper")


@contextlib.contextmanager
def criterion(capsys, number, title):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"\n[FAIL] criterion {number}: {title}")
        raise
    with capsys.disabled():
        print(f"\n[PASS] criterion {number}: {title}")


def rel_close(a, b, rel):
    return math.isclose(a, b, rel_tol=rel, abs_tol=0.0) or a == b


def random_params(rng, length, first_t=1):
    i_l = first_t + int(rng.integers(0, min(3, length - 2)))
    n_l = int(rng.integers(3, length - (i_l - first_t) + 1))
    n_c = int(rng.integers(3, n_l + 1))
    return ForecastParams(i_l, n_l, n_c, float(rng.uniform(0, 1)), float(rng.choice([0.5, 0.8, 0.9, 0.95, 0.99])))


def noisy_series(rng, length, start_t=1):
    t = np.arange(1, length + 1)
    values = rng.uniform(50, 500) + rng.uniform(-2, 2) * t + rng.normal(0, rng.uniform(1, 10), length)
    return PopulationSeries.from_values(np.maximum(values, 0.0), start_t=start_t)


def test_criterion_1_ols_matches_exact_normal_equations(capsys):
    with criterion(capsys, 1, "fit_ols == exact normal equations to 1e-10 rel on 200 windows, < 1 s"):
        rng = np.random.default_rng(20101125)
        windows = []
        for _ in range(200):
            n = int(rng.integers(3, 101))
            windows.append(PopulationSeries.from_values(rng.uniform(0, 1000, n)).observations)
        start = time.perf_counter()
        fits = [fit_ols(w) for w in windows]
        elapsed = time.perf_counter() - start
        for w, (line, diag) in zip(windows, fits):
            a, b, sce = ols_exact([o.t for o in w], [o.population for o in w])
            assert rel_close(line.intercept, a, 1e-10)
            assert rel_close(line.slope, b, 1e-10)
            assert rel_close(diag.sce, sce, 1e-10)
        assert elapsed < 1.0, elapsed


def test_criterion_2_t_quantile_accuracy(capsys):
    with criterion(capsys, 2, "t_quantile vs integrated-CDF bisection to 1e-6 on the df x confidence grid, < 5 s"):
        grid_df = list(range(1, 31)) + [60, 120]
        grid_c = [0.5, 0.8, 0.9, 0.95, 0.99]
        t_quantile.cache_clear()
        start = time.perf_counter()
        ours = {(df, c): t_quantile(df, c) for df in grid_df for c in grid_c}
        elapsed = time.perf_counter() - start
        worst = max(abs(q - t_quantile_by_integration(df, c)) for (df, c), q in ours.items())
        assert worst <= 1e-6, worst
        assert abs(ours[1, 0.9] - 6.313752) <= 1e-6
        assert abs(ours[4, 0.9] - 2.131847) <= 1e-6
        assert elapsed < 5.0, elapsed


def test_criterion_3_exact_line(capsys):
    with criterion(capsys, 3, "noiseless linear series -> true next value with rho_L = rho_C = 0"):
        rng = np.random.default_rng(3)
        for _ in range(300):
            length = int(rng.integers(3, 80))
            a, b = rng.uniform(0, 500), rng.uniform(-2, 5)
            start_t = int(rng.integers(1, 50))
            values = [a + b * t for t in range(start_t, start_t + length)]
            if min(values) < 0:
                continue
            s = PopulationSeries.from_values(values, start_t=start_t)
            params = random_params(rng, length, start_t)
            fc = forecast_next(s, params)
            assert fc.point == pytest.approx(a + b * fc.target_t, rel=1e-9, abs=1e-9)
            assert fc.rho_l == 0.0 and fc.rho_c == 0.0 and fc.radius == 0.0
            assert fc.lower == fc.point == fc.upper


def test_criterion_4_blend_identities(capsys):
    with criterion(capsys, 4, "alpha_C in {0,1} reproduce single-window forecasts; coincident windows ignore alpha_C"):
        rng = np.random.default_rng(4)
        for _ in range(100):
            length = int(rng.integers(6, 70))
            s = noisy_series(rng, length)
            p = random_params(rng, length)
            only_long = forecast_next(s, ForecastParams(p.i_l, p.n_l, p.n_l, 0.5, p.confidence))
            only_short = forecast_next(s, ForecastParams(p.i_c, p.n_c, p.n_c, 0.5, p.confidence))
            at0 = forecast_next(s, ForecastParams(p.i_l, p.n_l, p.n_c, 0.0, p.confidence))
            at1 = forecast_next(s, ForecastParams(p.i_l, p.n_l, p.n_c, 1.0, p.confidence))
            for key in NUMERIC_FIELDS:
                if key not in ("rho_l", "rho_c"):
                    assert getattr(at0, key) == getattr(only_long, key), key
                    assert getattr(at1, key) == getattr(only_short, key), key
            assert at0.long_line == only_long.long_line
            assert at1.short_line == only_short.short_line

            coincident = [forecast_next(s, ForecastParams(p.i_l, p.n_l, p.n_l, w, p.confidence))
                          for w in (0.0, 0.25, 0.5, 1.0)]
            assert all(fc == coincident[0] for fc in coincident)


def test_criterion_5_invariance_suite(capsys):
    with criterion(capsys, 5, "shift, scale and time-translation invariance to 1e-9 rel over 100 trials each"):
        rng = np.random.default_rng(5)
        for _ in range(100):
            length = int(rng.integers(5, 70))
            s = noisy_series(rng, length)
            p = random_params(rng, length)
            base = forecast_next(s, p)
            pops = [o.population for o in s]

            c = float(rng.uniform(0, 5000))
            shifted = forecast_next(PopulationSeries.from_values([x + c for x in pops]), p)
            for key in ("point", "lower", "upper"):
                assert rel_close(getattr(shifted, key), getattr(base, key) + c, 1e-9), key
            for key in ("radius", "rho_l", "rho_c"):
                assert rel_close(getattr(shifted, key), getattr(base, key), 1e-9), key

            k = float(rng.uniform(0.01, 100))
            scaled = forecast_next(PopulationSeries.from_values([x * k for x in pops]), p)
            for key in NUMERIC_FIELDS:
                assert rel_close(getattr(scaled, key), k * getattr(base, key), 1e-9), key

            d = int(rng.integers(1, 2000))
            moved = forecast_next(
                PopulationSeries.from_values(pops, start_t=1 + d),
                ForecastParams(p.i_l + d, p.n_l, p.n_c, p.alpha_c, p.confidence),
            )
            assert moved.target_t == base.target_t + d
            for key in NUMERIC_FIELDS:
                assert rel_close(getattr(moved, key), getattr(base, key), 1e-9), key
            assert rel_close(moved.long_line.slope, base.long_line.slope, 1e-9)
            assert rel_close(moved.short_line.slope, base.short_line.slope, 1e-9)


def test_criterion_6_monte_carlo_calibration(capsys):
    with criterion(capsys, 6, "alpha_C=0, confidence 0.9: coverage over 10,000 forecasts in [0.87, 0.93], < 30 s"):
        rng = np.random.default_rng(6)
        trials, hits = 10_000, 0
        start = time.perf_counter()
        for _ in range(trials):
            n_l = int(rng.integers(3, 61))
            t = np.arange(1, n_l + 2)
            values = 300.0 + rng.uniform(-3, 3) * t + rng.normal(0, rng.uniform(1, 20), n_l + 1)
            s = PopulationSeries.from_values(values)
            fc = forecast_next(s.through(n_l), ForecastParams(1, n_l, min(6, n_l), 0.0, 0.9))
            hits += fc.lower <= values[-1] <= fc.upper
        elapsed = time.perf_counter() - start
        coverage = hits / trials
        with capsys.disabled():
            print(f"\n    empirical coverage {coverage:.4f} in {elapsed:.1f} s")
        assert 0.87 <= coverage <= 0.93
        assert elapsed < 30.0, elapsed


def test_criterion_7_protocol_reproduction(capsys, tmp_path):
    with criterion(capsys, 7, "synth 16x63 + backtest targets 11..63 -> 848 runs, deterministic, failure rate < 20%, < 10 s"):
        outputs = []
        start = time.perf_counter()
        for sub in ("first", "second"):
            out_dir = tmp_path / sub
            assert main(["synth", "-o", str(out_dir), "--centers", "16", "--periods", "63", "--seed", "7"]) == 0
            capsys.readouterr()
            assert main(["backtest", "-i", str(out_dir), "--il", "1", "--nc", "6", "--alpha-c", "0.5",
                         "--confidence", "0.9", "--targets", "11..63", "--format", "structured"]) == 0
            outputs.append(capsys.readouterr().out)
        elapsed = time.perf_counter() - start
        assert outputs[0] == outputs[1]
        doc = parse_structured(outputs[0])
        total = doc["reports"][-1]
        assert total["center"] == "ALL"
        assert total["runs"] == 848 == 53 * 16
        assert all(r["runs"] == 53 for r in doc["reports"][:-1])
        assert total["failure_rate"] < 0.2
        with capsys.disabled():
            print(f"\n    failures {total['failures']}/848 = {total['failure_rate']:.3f}, {elapsed:.1f} s for two runs")
        assert elapsed / 2 < 10.0


def test_criterion_8_cli_contract(capsys, tmp_path):
    with criterion(capsys, 8, "CLI goldens (3 commands x 3 formats), exit codes, structured round trip"):
        for fmt in FORMATS:
            for name, argv in (("forecast", FORECAST_ARGS), ("backtest", BACKTEST_ARGS),
                               ("synth", SYNTH_ARGS + ["-o", str(tmp_path / fmt)])):
                assert main(argv + ["--format", fmt]) == 0
                out = capsys.readouterr().out
                assert out == (GOLDEN_DIR / f"{name}.{fmt}.txt").read_text(encoding="utf-8"), (name, fmt)

        table = [
            (FORECAST_ARGS, 0),
            (["forecast", "-i", str(DATA / "gap.csv")], 1),
            (FORECAST_ARGS + ["--alpha-c", "1.5"], 1),
            (["forecast", "-i", str(DATA / "demo.csv"), "--nl", "40"], 2),
            (["backtest", "-i", str(DATA / "north.csv"), "--targets", "11..99"], 2),
            (["forecast", "-i", str(DATA / "nope.csv")], 1),
        ]
        for argv, code in table:
            assert main(argv) == code, argv
            capsys.readouterr()

        assert main(FORECAST_ARGS + ["--format", "structured"]) == 0
        doc = parse_structured(capsys.readouterr().out)
        assert main(FORECAST_ARGS + ["--format", "human"]) == 0
        human = capsys.readouterr().out
        for key in ("point", "lower", "upper", "radius", "rho_l", "rho_c"):
            assert repr(doc[key]) in human
        fc = forecast_next(PopulationSeries.from_values([100, 102, 101, 105, 104, 107, 110, 108, 112, 115]),
                           ForecastParams(1, 10, 6, 0.5, 0.9))
        assert all(doc[k] == getattr(fc, k) for k in NUMERIC_FIELDS)
