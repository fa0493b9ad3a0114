"""Next-period population forecasts from blended long- and short-window regressions."""

from popforecast.backtest import (
    BacktestProtocol,
    BacktestRecord,
    BacktestReport,
    aggregate_reports,
    run_backtest,
)
from popforecast.errors import (
    DomainError,
    ForecastError,
    InsufficientDataError,
    ParseError,
    RangeError,
    StructuralError,
)
from popforecast.forecast import (
    Forecast,
    ForecastParams,
    forecast_next,
    interval_radius,
    point_estimate,
    resolve_windows,
)
from popforecast.series import Observation, PopulationSeries, parse_series, read_series, slice_window
from popforecast.statkern import FitDiagnostics, RegressionLine, fit_ols, t_quantile

__version__ = "0.1.0"
