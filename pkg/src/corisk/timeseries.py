"""Daily negativity series, calendar smoothing and lead-lag cross-correlation.

Lag convention: at lag ``k`` the pairs are ``(a[t], b[t + k])``, so a positive
lag means the second series lags (follows) the first.
"""
from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .exceptions import UndefinedCorrelationError

LAG_CONVENTION = "pairs (a[t], b[t+lag]); positive lag = second series lags the first"
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class Series:
    points: tuple
    name: str = ""

    def __post_init__(self):
        pts = tuple(sorted((d, float(v)) for d, v in self.points))
        for (d0, _), (d1, _) in zip(pts, pts[1:]):
            if d0 == d1:
                raise ValueError(f"series {self.name!r}: duplicate date {d0}")
        for d, v in pts:
            if not math.isfinite(v):
                raise ValueError(f"series {self.name!r}: non-finite value at {d}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_mapping(cls, values: dict, name: str = "") -> "Series":
        return cls(tuple(values.items()), name)

    def as_dict(self) -> dict:
        return dict(self.points)

    @property
    def dates(self) -> list:
        return [d for d, _ in self.points]

    @property
    def values(self) -> list:
        return [v for _, v in self.points]

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class DatedScore:
    """A filing's negativity with the counts needed for token weighting."""

    date: dt.date
    score: Optional[float]
    negative_token_count: int = 0
    total_token_count: int = 0


def daily_series(scores: Iterable[DatedScore], weighting: str = "report_mean", name: str = "negativity") -> Series:
    """One point per date with at least one defined score.

    ``report_mean`` averages the per-filing scores; ``token_weighted`` pools
    negative and total token counts over the day's filings.
    """
    if weighting not in ("report_mean", "token_weighted"):
        raise ValueError(f"unknown weighting {weighting!r}")
    by_day: dict[dt.date, list] = {}
    for s in scores:
        if s.score is not None:
            by_day.setdefault(s.date, []).append(s)
    if not by_day:
        raise ValueError("no defined scores")
    out = {}
    for day, items in by_day.items():
        if weighting == "report_mean":
            out[day] = math.fsum(sorted(i.score for i in items)) / len(items)
        else:
            out[day] = sum(i.negative_token_count for i in items) / sum(i.total_token_count for i in items)
    return Series.from_mapping(out, name)


def rolling_mean(s: Series, window_days: int) -> Series:
    """Centered calendar-window mean over the points present; output dates equal input dates.

    For even windows the extra day falls on the past side.
    """
    if window_days < 1:
        raise ValueError("window_days must be >= 1")
    back, ahead = window_days // 2, (window_days - 1) // 2
    values = s.as_dict()
    out = []
    for d in s.dates:
        window = [values[d + dt.timedelta(days=k)] for k in range(-back, ahead + 1)
                  if d + dt.timedelta(days=k) in values]
        out.append((d, math.fsum(window) / len(window)))
    return Series(tuple(out), s.name)


def align(a: Series, b: Series, lag_days: int) -> list[tuple[float, float]]:
    bvals = b.as_dict()
    shift = dt.timedelta(days=lag_days)
    return [(va, bvals[d + shift]) for d, va in a.points if d + shift in bvals]


def pearson(pairs: Sequence[tuple[float, float]]) -> Optional[float]:
    """Sample Pearson correlation; None with fewer than 3 pairs or a constant coordinate."""
    if len(pairs) < 3:
        return None
    x = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    # relative threshold: float noise in a constant series must not count as variance
    scale_x = max(1.0, float(np.abs(x).max())) ** 2 * len(x)
    scale_y = max(1.0, float(np.abs(y).max())) ** 2 * len(y)
    if sxx <= 1e-24 * scale_x or syy <= 1e-24 * scale_y:
        return None
    rho = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


@dataclass(frozen=True)
class CrossCorrResult:
    lags: tuple
    correlations: dict  # lag -> rho, or None when undefined
    best_lag: int
    best_rho: float
    pairs_per_lag: dict = field(default_factory=dict)
    convention: str = LAG_CONVENTION


def cross_correlation(a: Series, b: Series, max_lag: int) -> CrossCorrResult:
    """Pearson correlation at every lag in ``[-max_lag, max_lag]``.

    The best lag maximizes ``|rho|``; ties go to the smaller ``|lag|`` and then
    to the negative lag.
    """
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")
    lags = tuple(range(-max_lag, max_lag + 1))
    corr, npairs = {}, {}
    for lag in lags:
        pairs = align(a, b, lag)
        npairs[lag] = len(pairs)
        corr[lag] = pearson(pairs)
    defined = [lag for lag in lags if corr[lag] is not None]
    if not defined:
        raise UndefinedCorrelationError(
            f"no lag in [-{max_lag}, {max_lag}] gives a defined correlation "
            "(need >= 3 overlapping dates and non-constant series)")
    top = max(abs(corr[lag]) for lag in defined)
    tied = [lag for lag in defined if abs(corr[lag]) >= top - _TIE_TOL]
    best = min(tied, key=lambda lag: (abs(lag), lag))
    return CrossCorrResult(lags, corr, best, corr[best], npairs)
