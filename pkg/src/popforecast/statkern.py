"""Least-squares line fitting and two-tailed Student-t quantiles.

Both are written out by hand rather than delegated to a statistics library,
so that every number the forecaster produces can be traced to the slope and
intercept sums and to a quantile whose accuracy is known.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from popforecast.errors import DomainError, InsufficientDataError
from popforecast.series import Observation

MIN_WINDOW = 3

# Residuals this close to rounding noise are treated as an exact fit.
_EXACT_FIT_ULPS = 64


@dataclass(frozen=True)
class RegressionLine:
    intercept: float
    slope: float
    window_start_t: int
    window_len: int

    def __post_init__(self):
        if self.window_len < MIN_WINDOW:
            raise InsufficientDataError(f"a fitted line needs >= {MIN_WINDOW} points, got {self.window_len}")
        if not (math.isfinite(self.intercept) and math.isfinite(self.slope)):
            raise DomainError("regression coefficients must be finite")

    @property
    def window_end_t(self) -> int:
        return self.window_start_t + self.window_len - 1

    def at(self, t: float) -> float:
        return self.intercept + self.slope * t


@dataclass(frozen=True)
class FitDiagnostics:
    """Residual and design summaries of one fit.

    ``sxx`` is the centred sum of squares of the period index,
    ``sum_t_sq - n * mean_t**2``, evaluated in exact integer arithmetic.
    """

    sce: float
    s_e2: float
    mean_t: float
    sum_t_sq: float
    sxx: float


def fit_ols(window: Sequence[Observation]) -> tuple[RegressionLine, FitDiagnostics]:
    """Fit ``population = A + B * t`` over a window of observations.

    The slope is ``(n*sum(tP) - sum(t)*sum(P)) / (n*sum(t^2) - sum(t)^2)`` and
    the intercept ``mean(P) - B*mean(t)``. Period sums are exact integers; the
    numerator is accumulated as ``sum((n*t_i - sum(t)) * P_i)`` with ``math.fsum``
    so the cancellation between the two large products never happens in floats.
    """
    n = len(window)
    if n < MIN_WINDOW:
        raise InsufficientDataError(f"least-squares fit needs >= {MIN_WINDOW} observations, got {n}")
    ts = [o.t for o in window]
    ps = [o.population for o in window]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise DomainError("window period indices must be strictly increasing")
    if not all(math.isfinite(p) for p in ps):
        raise DomainError("window contains a non-finite population")

    sum_t = sum(ts)
    sum_t2 = sum(t * t for t in ts)
    denom = n * sum_t2 - sum_t * sum_t
    numer = math.fsum((n * t - sum_t) * p for t, p in zip(ts, ps))
    slope = numer / denom
    mean_t = sum_t / n
    intercept = math.fsum(ps) / n - slope * mean_t

    residuals = [p - (intercept + slope * t) for t, p in zip(ts, ps)]
    scale = max(abs(p) + abs(intercept) + abs(slope * t) for t, p in zip(ts, ps))
    if max(abs(r) for r in residuals) <= _EXACT_FIT_ULPS * sys.float_info.epsilon * scale:
        sce = 0.0
    else:
        sce = math.fsum(r * r for r in residuals)

    line = RegressionLine(intercept, slope, ts[0], n)
    diag = FitDiagnostics(
        sce=sce,
        s_e2=sce / (n - 2),
        mean_t=mean_t,
        sum_t_sq=float(sum_t2),
        sxx=float(Fraction(denom, n)),
    )
    return line, diag


# -- Student t ---------------------------------------------------------------

_CF_MAX_ITER = 500
_CF_EPS = 1e-16
_TINY = 1e-300


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float, y: float | None = None) -> float:
    """Regularized incomplete beta ``I_x(a, b)``.

    ``y`` may carry ``1 - x`` computed without cancellation by the caller.
    """
    if y is None:
        y = 1.0 - x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log(y)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, y) / b


def t_central_mass(q: float, df: int) -> float:
    """Probability that a t variate with ``df`` degrees of freedom lies in [-q, q]."""
    if q <= 0.0:
        return 0.0
    q2 = q * q
    return betainc(0.5, 0.5 * df, q2 / (q2 + df), df / (q2 + df))


@lru_cache(maxsize=4096)
def t_quantile(df: int, confidence: float) -> float:
    """Two-tailed Student-t critical value.

    Returns ``q`` with ``P(-q <= T <= q) = confidence`` for ``T ~ t(df)``, i.e.
    the one-tailed quantile at ``(1 + confidence) / 2``. This is what a
    spreadsheet's two-tailed inverse t function returns for the error
    probability ``1 - confidence``.
    """
    if isinstance(df, bool) or not isinstance(df, int) or df < 1:
        raise DomainError(f"degrees of freedom must be a positive integer, got {df!r}")
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence!r}")

    lo, hi = 0.0, 1.0
    while t_central_mass(hi, df) < confidence:
        lo, hi = hi, 2.0 * hi
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if t_central_mass(mid, df) < confidence:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
