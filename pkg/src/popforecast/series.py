"""Population time series: data model, CSV ingestion and window slicing.

A series file holds one center, with a mandatory header ``t,period,population``::

    t,period,population
    1,2005-01,100
    2,2005-02,103

``t`` is a 1-based consecutive integer index, ``period`` an opaque label and
``population`` a non-negative real headcount.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

from popforecast.errors import DomainError, ParseError, RangeError, StructuralError

HEADER = ("t", "period", "population")


@dataclass(frozen=True)
class Observation:
    t: int
    label: str
    population: float

    def __post_init__(self):
        if isinstance(self.t, bool) or not isinstance(self.t, int):
            raise DomainError(f"period index must be an integer, got {self.t!r}")
        if self.t < 1:
            raise DomainError(f"period index must be >= 1, got t={self.t}")
        if not math.isfinite(self.population):
            raise DomainError(f"population at t={self.t} is not finite")
        if self.population < 0:
            raise DomainError(f"population at t={self.t} is negative ({self.population!r})")


@dataclass(frozen=True)
class PopulationSeries:
    """Consecutive observations for one center."""

    center_id: str
    observations: tuple[Observation, ...]

    def __post_init__(self):
        obs = tuple(self.observations)
        object.__setattr__(self, "observations", obs)
        if not obs:
            raise StructuralError(f"series {self.center_id!r} has no observations")
        expected = obs[0].t
        for o in obs:
            if o.t > expected:
                raise StructuralError(f"gap at t={expected}")
            if o.t < expected:
                raise StructuralError(f"duplicate or out-of-order t={o.t}")
            expected += 1

    def __len__(self):
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    @property
    def first_t(self) -> int:
        return self.observations[0].t

    @property
    def last_t(self) -> int:
        return self.observations[-1].t

    def at(self, t: int) -> Observation:
        if not self.first_t <= t <= self.last_t:
            raise RangeError(f"t={t} outside series range {self.first_t}..{self.last_t}")
        return self.observations[t - self.first_t]

    def through(self, last_t: int) -> PopulationSeries:
        """Prefix of the series ending at ``last_t`` (inclusive)."""
        if not self.first_t <= last_t <= self.last_t:
            raise RangeError(f"t={last_t} outside series range {self.first_t}..{self.last_t}")
        return PopulationSeries(self.center_id, self.observations[: last_t - self.first_t + 1])

    @classmethod
    def from_values(cls, populations: Iterable[float], center_id: str = "series", start_t: int = 1):
        """Build a series with generated labels, mostly for tests and synthesis."""
        obs = tuple(
            Observation(start_t + i, f"p{start_t + i}", float(p)) for i, p in enumerate(populations)
        )
        return cls(center_id, obs)


def slice_window(series: PopulationSeries, start_t: int, count: int) -> tuple[Observation, ...]:
    """Return the ``count`` observations starting at period ``start_t``."""
    if count < 1:
        raise DomainError(f"window length must be >= 1, got {count}")
    end_t = start_t + count - 1
    if start_t < series.first_t:
        raise RangeError(f"window start t={start_t} precedes first observation t={series.first_t}")
    if end_t > series.last_t:
        raise RangeError(f"window end t={end_t} exceeds last observation t={series.last_t}")
    offset = start_t - series.first_t
    return series.observations[offset : offset + count]


def parse_series(source: TextIO | str, center_id: str = "series") -> PopulationSeries:
    """Read a series from a CSV stream (or a string holding CSV text)."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None:
        raise StructuralError("empty input: missing header row")
    names = tuple(h.strip().lstrip("﻿").lower() for h in header)
    if names != HEADER:
        raise ParseError(f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}", 1)

    obs = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line)
        t_text, label, pop_text = row
        try:
            t = int(t_text.strip())
        except ValueError:
            raise ParseError(f"period index {t_text!r} is not an integer", line) from None
        try:
            population = float(pop_text.strip())
        except ValueError:
            raise ParseError(f"population {pop_text!r} is not numeric", line) from None
        try:
            obs.append(Observation(t, label, population))
        except DomainError as exc:
            raise DomainError(f"line {line}: {exc}") from None

    if not obs:
        raise StructuralError("no data rows after header")
    return PopulationSeries(center_id, tuple(obs))


def read_series(path: str | Path) -> PopulationSeries:
    """Parse a CSV file; the center id is the file name without extension."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        return parse_series(fh, center_id=path.stem)


def write_series(series: PopulationSeries, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for o in series:
        writer.writerow((o.t, o.label, repr(o.population)))


def series_to_csv(series: PopulationSeries) -> str:
    buf = io.StringIO()
    write_series(series, buf)
    return buf.getvalue()
