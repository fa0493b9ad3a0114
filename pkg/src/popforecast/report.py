"""Rendering of forecasts, backtests and synthesis runs.

Three output formats:

human
    Readable summary; numbers shown rounded to 2 decimals next to full precision.
structured
    Line-oriented ``key: value`` document with ``[report ID]`` sections and
    ``record: k=v ...`` lines. Floats are printed with ``repr`` so they parse
    back bit-for-bit; :func:`parse_structured` reads it back.
plot-table
    Tab-separated table with a header row. Cells that do not apply are the
    token ``NA`` so plotting tools leave a gap instead of drawing a zero.
"""

from __future__ import annotations

import re
from typing import Sequence

from popforecast.backtest import BacktestProtocol, BacktestReport
from popforecast.forecast import Forecast, ForecastParams
from popforecast.series import PopulationSeries

FORMATS = ("human", "structured", "plot-table")
STRUCTURED_TAG = "popforecast-structured/1"
NA = "NA"


def num(x: float) -> str:
    return repr(float(x))


def _cell(x) -> str:
    if x is None:
        return NA
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return num(x)
    return str(x)


def _r2(x: float) -> str:
    return f"{x:.2f}"


def _pct(rate: float) -> str:
    return f"{100.0 * rate:.1f}%"


def _table(header: Sequence[str], rows) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(_cell(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def _fit_items(prefix: str, fc_line, fit) -> list[tuple[str, object]]:
    return [
        (f"{prefix}.intercept", fc_line.intercept),
        (f"{prefix}.slope", fc_line.slope),
        (f"{prefix}.window_start_t", fc_line.window_start_t),
        (f"{prefix}.window_len", fc_line.window_len),
        (f"{prefix}.sce", fit.sce),
        (f"{prefix}.s_e2", fit.s_e2),
    ]


def _kv(items) -> list[str]:
    return [f"{k}: {_cell(v)}" for k, v in items]


# -- forecast ------------------------------------------------------------------


def render_forecast(series: PopulationSeries, params: ForecastParams, fc: Forecast, fmt: str) -> str:
    if fmt == "human":
        ll, sl = fc.long_line, fc.short_line
        lines = [
            f"center: {series.center_id}",
            f"parameters: il={params.i_l} nl={params.n_l} nc={params.n_c} "
            f"alpha_c={num(params.alpha_c)} confidence={num(params.confidence)}",
            f"target period: t={fc.target_t}",
            f"point estimate: {_r2(fc.point)}  ({num(fc.point)})",
            f"interval: [{_r2(fc.lower)}, {_r2(fc.upper)}]  ([{num(fc.lower)}, {num(fc.upper)}])",
            f"blended radius: {_r2(fc.radius)}  ({num(fc.radius)})",
            f"long-window radius rho_L: {_r2(fc.rho_l)}  ({num(fc.rho_l)})",
            f"short-window radius rho_C: {_r2(fc.rho_c)}  ({num(fc.rho_c)})",
            f"long line  t={ll.window_start_t}..{ll.window_end_t}: "
            f"P = {num(ll.intercept)} + {num(ll.slope)} * t",
            f"short line t={sl.window_start_t}..{sl.window_end_t}: "
            f"P = {num(sl.intercept)} + {num(sl.slope)} * t",
        ]
        if fc.lower < 0:
            lines.append("warning: lower bound is negative; populations cannot be negative")
        return "\n".join(lines) + "\n"

    if fmt == "structured":
        items = [
            ("format", STRUCTURED_TAG),
            ("kind", "forecast"),
            ("center", series.center_id),
            ("params.il", params.i_l),
            ("params.nl", params.n_l),
            ("params.nc", params.n_c),
            ("params.alpha_c", params.alpha_c),
            ("params.confidence", params.confidence),
            ("target_t", fc.target_t),
            ("point", fc.point),
            ("rho_l", fc.rho_l),
            ("rho_c", fc.rho_c),
            ("radius", fc.radius),
            ("lower", fc.lower),
            ("upper", fc.upper),
            ("negative_lower", fc.lower < 0),
        ]
        items += _fit_items("long", fc.long_line, fc.long_fit)
        items += _fit_items("short", fc.short_line, fc.short_fit)
        return "\n".join(_kv(items)) + "\n"

    if fmt == "plot-table":
        rows = [(o.t, o.label, o.population, None, None, None) for o in series]
        rows.append((fc.target_t, None, None, fc.point, fc.lower, fc.upper))
        return _table(("t", "period", "actual", "point", "lower", "upper"), rows)

    raise ValueError(f"unknown format {fmt!r}")


# -- backtest ------------------------------------------------------------------


def _protocol_items(protocol: BacktestProtocol) -> list[tuple[str, object]]:
    return [
        ("params.il", protocol.i_l),
        ("params.nc", protocol.n_c),
        ("params.alpha_c", protocol.alpha_c),
        ("params.confidence", protocol.confidence),
    ]


def _record_line(rec) -> str:
    fc = rec.forecast
    fields = [
        ("target_t", rec.target_t),
        ("actual", rec.actual),
        ("point", fc.point),
        ("lower", fc.lower),
        ("upper", fc.upper),
        ("rho_l", fc.rho_l),
        ("rho_c", fc.rho_c),
        ("radius", fc.radius),
        ("hit", rec.hit),
        ("nc_eff", rec.n_c_effective),
        ("clamped", rec.clamped),
    ]
    return "record: " + " ".join(f"{k}={_cell(v)}" for k, v in fields)


def _summary_items(rep: BacktestReport) -> list[tuple[str, object]]:
    return [("runs", rep.runs), ("failures", rep.failures), ("failure_rate", rep.failure_rate)]


def render_backtest(
    reports: Sequence[BacktestReport],
    aggregate: BacktestReport,
    protocols: Sequence[BacktestProtocol],
    fmt: str,
) -> str:
    """Per-center reports followed by the aggregate.

    ``protocols`` pairs with ``reports``; they differ only in target range when
    targets default to each series' full extent.
    """
    if fmt == "human":
        p0 = protocols[0]
        lines = [
            f"backtest: il={p0.i_l} nc={p0.n_c} alpha_c={num(p0.alpha_c)} confidence={num(p0.confidence)}",
        ]
        for rep, proto in zip(reports, protocols):
            missed = [str(r.target_t) for r in rep.records if not r.hit]
            clamped = sum(1 for r in rep.records if r.clamped)
            lines += [
                "",
                f"center: {rep.center_id}",
                f"targets: {proto.first_target_t}..{proto.last_target_t}",
                f"runs: {rep.runs}",
                f"failures: {rep.failures} ({_pct(rep.failure_rate)})",
                f"failed targets: {', '.join(missed) if missed else 'none'}",
            ]
            if clamped:
                lines.append(f"clamped short windows: {clamped}")
        lines += [
            "",
            f"center: {aggregate.center_id}",
            f"runs: {aggregate.runs}",
            f"failures: {aggregate.failures} ({_pct(aggregate.failure_rate)})",
            f"coverage: {_pct(aggregate.coverage)}",
        ]
        return "\n".join(lines) + "\n"

    if fmt == "structured":
        lines = _kv([("format", STRUCTURED_TAG), ("kind", "backtest")] + _protocol_items(protocols[0]))
        for rep, proto in zip(reports, protocols):
            lines.append(f"[report {rep.center_id}]")
            lines += _kv([("targets", f"{proto.first_target_t}..{proto.last_target_t}")])
            lines += _kv(_summary_items(rep))
            lines += [_record_line(r) for r in rep.records]
        lines.append(f"[report {aggregate.center_id}]")
        lines += _kv(_summary_items(aggregate))
        return "\n".join(lines) + "\n"

    if fmt == "plot-table":
        rows = [
            (r.center_id, r.target_t, r.actual, r.forecast.point, r.forecast.lower, r.forecast.upper, r.hit)
            for rep in reports
            for r in rep.records
        ]
        return _table(("center", "target_t", "actual", "point", "lower", "upper", "hit"), rows)

    raise ValueError(f"unknown format {fmt!r}")


# -- synth ---------------------------------------------------------------------


def render_synth(config, generated, fmt: str) -> str:
    if fmt == "human":
        lines = [f"wrote {len(generated)} series of {config.periods} periods (seed {config.seed})"]
        for series, shocks in generated:
            shock_txt = ", ".join(map(str, shocks)) if shocks else "none"
            lines.append(f"{series.center_id}.csv  shocks at: {shock_txt}")
        return "\n".join(lines) + "\n"

    if fmt == "structured":
        items = [
            ("format", STRUCTURED_TAG),
            ("kind", "synth"),
            ("seed", config.seed),
            ("centers", config.centers),
            ("periods", config.periods),
            ("level", config.level),
            ("trend", config.trend),
            ("noise", config.noise),
            ("shocks", config.shocks),
            ("shock_size", config.shock_size),
        ]
        lines = _kv(items)
        for series, shocks in generated:
            shock_txt = ",".join(map(str, shocks)) if shocks else NA
            lines.append(
                f"record: center={series.center_id} file={series.center_id}.csv "
                f"rows={len(series)} shocks={shock_txt}"
            )
        return "\n".join(lines) + "\n"

    if fmt == "plot-table":
        header = ["t", "period"] + [s.center_id for s, _ in generated]
        first = generated[0][0]
        rows = [
            [o.t, o.label] + [s.observations[i].population for s, _ in generated]
            for i, o in enumerate(first.observations)
        ]
        return _table(header, rows)

    raise ValueError(f"unknown format {fmt!r}")


# -- parsing structured output ---------------------------------------------------

_INT_RE = re.compile(r"[+-]?\d+\Z")


def parse_value(text: str):
    """Inverse of the structured cell printer: int, float, None (``NA``) or str."""
    if text == NA:
        return None
    if _INT_RE.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def parse_structured(text: str) -> dict:
    """Read a structured document into nested dicts.

    Top-level keys land in the returned dict; ``[report ID]`` sections go to
    ``doc["reports"]`` (in order) and ``record:`` lines to the ``records`` list
    of the current section (or of the document when outside any section).
    """
    doc: dict = {"reports": [], "records": []}
    current = doc
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("[report ") and line.endswith("]"):
            current = {"center": line[len("[report ") : -1], "records": []}
            doc["reports"].append(current)
            continue
        key, sep, value = line.partition(": ")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key: value', got {line!r}")
        if key == "record":
            rec = {}
            for pair in value.split(" "):
                k, _, v = pair.partition("=")
                rec[k] = parse_value(v)
            current["records"].append(rec)
        else:
            current[key] = parse_value(value)
    return doc
