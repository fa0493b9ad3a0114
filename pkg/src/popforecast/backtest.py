"""Rolling-origin backtest: forecast each historical period from its past.

For every target period the long window is anchored at ``i_l`` and grows to
end just before the target (``N_L = target_t - i_l``); the short window is the
last ``n_c`` periods of it. A run fails when the observed value falls outside
the closed forecast interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from popforecast.errors import DomainError, ForecastError, RangeError
from popforecast.forecast import Forecast, ForecastParams, forecast_next
from popforecast.series import PopulationSeries
from popforecast.statkern import MIN_WINDOW

AGGREGATE_ID = "ALL"


@dataclass(frozen=True)
class BacktestProtocol:
    i_l: int
    n_c: int
    alpha_c: float
    confidence: float
    first_target_t: int
    last_target_t: int

    def __post_init__(self):
        if self.i_l < 1:
            raise DomainError(f"i_l must be >= 1, got {self.i_l}")
        if self.first_target_t < self.i_l + MIN_WINDOW:
            raise DomainError(
                f"first target t={self.first_target_t} leaves fewer than {MIN_WINDOW} periods "
                f"after i_l={self.i_l}"
            )
        if self.last_target_t < self.first_target_t:
            raise DomainError(f"empty target range {self.first_target_t}..{self.last_target_t}")
        # remaining fields are checked by ForecastParams on the first target
        self.params_for(self.first_target_t)

    @property
    def targets(self) -> range:
        return range(self.first_target_t, self.last_target_t + 1)

    def params_for(self, target_t: int) -> ForecastParams:
        n_l = target_t - self.i_l
        return ForecastParams(self.i_l, n_l, min(self.n_c, n_l), self.alpha_c, self.confidence)


@dataclass(frozen=True)
class BacktestRecord:
    target_t: int
    actual: float
    forecast: Forecast
    hit: bool
    n_c_effective: int
    clamped: bool
    center_id: str = ""


@dataclass(frozen=True)
class BacktestReport:
    center_id: str
    records: tuple[BacktestRecord, ...]

    @property
    def runs(self) -> int:
        return len(self.records)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.records if not r.hit)

    @property
    def failure_rate(self) -> float:
        return self.failures / self.runs if self.runs else 0.0

    @property
    def coverage(self) -> float:
        return 1.0 - self.failure_rate if self.runs else 0.0


def run_backtest(series: PopulationSeries, protocol: BacktestProtocol) -> BacktestReport:
    if series.first_t > protocol.i_l or series.last_t < protocol.last_target_t:
        raise RangeError(
            f"center {series.center_id}: series covers t={series.first_t}..{series.last_t}, "
            f"protocol needs t={protocol.i_l}..{protocol.last_target_t}"
        )
    records = []
    for target in protocol.targets:
        params = protocol.params_for(target)
        try:
            fc = forecast_next(series.through(target - 1), params)
        except ForecastError as exc:
            raise type(exc)(f"center {series.center_id}, target_t={target}: {exc}") from exc
        actual = series.at(target).population
        records.append(
            BacktestRecord(
                target_t=target,
                actual=actual,
                forecast=fc,
                hit=fc.lower <= actual <= fc.upper,
                n_c_effective=params.n_c,
                clamped=params.n_c < protocol.n_c,
                center_id=series.center_id,
            )
        )
    return BacktestReport(series.center_id, tuple(records))


def aggregate_reports(reports: Sequence[BacktestReport]) -> BacktestReport:
    if not reports:
        raise DomainError("cannot aggregate an empty list of reports")
    records = tuple(r for rep in reports for r in rep.records)
    return BacktestReport(AGGREGATE_ID, records)
