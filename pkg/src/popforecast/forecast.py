"""Dual-window regression forecaster.

A long window ``[I_L, I_L+N_L-1]`` captures the overall trend; a short window of
the last ``N_C`` periods captures recent shifts. Both end at the same period, so
the short window starts at ``I_C = I_L + N_L - N_C``. The next period
``I_L + N_L`` is forecast by blending the two extrapolations with weight
``alpha_c`` on the short one, and the interval radius blends the two
prediction-interval radii with the same weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from popforecast.errors import DomainError, RangeError
from popforecast.series import PopulationSeries, slice_window
from popforecast.statkern import MIN_WINDOW, FitDiagnostics, RegressionLine, fit_ols, t_quantile


@dataclass(frozen=True)
class ForecastParams:
    """Operator inputs.

    i_l: first period of the long window.
    n_l: long window length.
    n_c: short window length.
    alpha_c: weight of the short-window estimate, in [0, 1].
    confidence: central coverage of the interval, e.g. 0.9.
    """

    i_l: int
    n_l: int
    n_c: int
    alpha_c: float
    confidence: float

    def __post_init__(self):
        for name in ("i_l", "n_l", "n_c"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.i_l < 1:
            raise DomainError(f"i_l must be >= 1, got {self.i_l}")
        if not MIN_WINDOW <= self.n_c <= self.n_l:
            raise DomainError(f"need {MIN_WINDOW} <= n_c <= n_l, got n_c={self.n_c}, n_l={self.n_l}")
        if not 0.0 <= self.alpha_c <= 1.0:
            raise DomainError(f"alpha_c must lie in [0, 1], got {self.alpha_c!r}")
        if not 0.0 < self.confidence < 1.0:
            raise DomainError(f"confidence must lie in (0, 1), got {self.confidence!r}")

    @property
    def i_c(self) -> int:
        return self.i_l + self.n_l - self.n_c

    @property
    def target_t(self) -> int:
        return self.i_l + self.n_l


@dataclass(frozen=True)
class Forecast:
    target_t: int
    point: float
    rho_l: float
    rho_c: float
    radius: float
    lower: float
    upper: float
    long_line: RegressionLine
    short_line: RegressionLine
    long_fit: FitDiagnostics
    short_fit: FitDiagnostics


class Window(NamedTuple):
    start_t: int
    count: int

    @property
    def end_t(self) -> int:
        return self.start_t + self.count - 1


def resolve_windows(params: ForecastParams, series: PopulationSeries) -> tuple[Window, Window, int]:
    """Long window, short window and target period for ``params`` on ``series``."""
    long_w = Window(params.i_l, params.n_l)
    short_w = Window(params.i_c, params.n_c)
    if long_w.start_t < series.first_t:
        raise RangeError(f"long window starts at t={long_w.start_t} before first observation t={series.first_t}")
    if long_w.end_t > series.last_t:
        raise RangeError(
            f"series too short: long window needs t={long_w.start_t}..{long_w.end_t}, "
            f"data ends at t={series.last_t}"
        )
    return long_w, short_w, params.target_t


def _blend(long_value: float, short_value: float, alpha_c: float) -> float:
    if long_value == short_value:
        return long_value
    return long_value * (1.0 - alpha_c) + short_value * alpha_c


def point_estimate(long_line: RegressionLine, short_line: RegressionLine, target_t: int, alpha_c: float) -> float:
    if not 0.0 <= alpha_c <= 1.0:
        raise DomainError(f"alpha_c must lie in [0, 1], got {alpha_c!r}")
    return _blend(long_line.at(target_t), short_line.at(target_t), alpha_c)


def interval_radius(line: RegressionLine, diag: FitDiagnostics, target_t: int, confidence: float) -> float:
    """Half-width of the t-based prediction interval of one line at ``target_t``."""
    n = line.window_len
    if line.window_start_t < target_t < line.window_end_t:
        raise DomainError(f"target t={target_t} lies inside the fitted window; radius is for extrapolation")
    # t_quantile validates df >= 1 and confidence
    q = t_quantile(n - 2, confidence)
    if diag.s_e2 == 0.0:
        return 0.0
    leverage = 1.0 + 1.0 / n + (target_t - diag.mean_t) ** 2 / diag.sxx
    return q * math.sqrt(leverage * diag.s_e2)


def forecast_next(series: PopulationSeries, params: ForecastParams) -> Forecast:
    long_w, short_w, target = resolve_windows(params, series)
    long_line, long_fit = fit_ols(slice_window(series, *long_w))
    short_line, short_fit = fit_ols(slice_window(series, *short_w))

    point = point_estimate(long_line, short_line, target, params.alpha_c)
    rho_l = interval_radius(long_line, long_fit, target, params.confidence)
    rho_c = interval_radius(short_line, short_fit, target, params.confidence)
    radius = _blend(rho_l, rho_c, params.alpha_c)
    return Forecast(
        target_t=target,
        point=point,
        rho_l=rho_l,
        rho_c=rho_c,
        radius=radius,
        lower=point - radius,
        upper=point + radius,
        long_line=long_line,
        short_line=short_line,
        long_fit=long_fit,
        short_fit=short_fit,
    )
