"""Daily log returns and n-day annualized realized volatility.

The volatility of a window of n consecutive daily log returns r_i is

    RV = 100 * sqrt(252 * mean(r_i^2))

i.e. the square root of the annualized average realized variance, in
percent units, with 252 trading days per year (fixed, not configurable).
Windows roll with stride 1 by default so every trading day ending a full
window gets a value; non-overlapping windows (stride n) are available as
an option.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PriceSeries",
    "ReturnSeries",
    "RVSeries",
    "log_returns",
    "realized_volatility",
    "threshold_filter",
]

TRADING_DAYS_PER_YEAR = 252


def _as_dates(dates) -> np.ndarray:
    return np.asarray(dates, dtype="datetime64[D]")


@dataclass(frozen=True)
class PriceSeries:
    """Dated closing prices. Dates strictly increasing, closes positive."""

    dates: np.ndarray
    closes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "closes", np.asarray(self.closes, dtype=float))
        if self.dates.shape != self.closes.shape or self.dates.ndim != 1:
            raise ValueError("dates and closes must be 1-d arrays of equal length")
        if len(self.closes) < 2:
            raise ValueError("a price series needs at least 2 observations")
        if not np.all(np.diff(self.dates).astype(int) > 0):
            raise ValueError("dates must be strictly increasing")
        if not np.all(self.closes > 0.0):
            raise ValueError("all closing prices must be positive")

    def __len__(self) -> int:
        return len(self.closes)


@dataclass(frozen=True)
class ReturnSeries:
    """Daily log returns, each dated by the later of its two days."""

    dates: np.ndarray
    returns: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "returns", np.asarray(self.returns, dtype=float))
        if self.dates.shape != self.returns.shape or self.dates.ndim != 1:
            raise ValueError("dates and returns must be 1-d arrays of equal length")

    def __len__(self) -> int:
        return len(self.returns)


@dataclass(frozen=True)
class RVSeries:
    """Annualized realized volatility (percent) per window end date."""

    window_n: int
    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.window_n < 1:
            raise ValueError("window_n must be >= 1")
        if self.dates.shape != self.values.shape or self.dates.ndim != 1:
            raise ValueError("dates and values must be 1-d arrays of equal length")
        if np.any(self.values < 0.0):
            raise ValueError("realized volatility cannot be negative")

    def __len__(self) -> int:
        return len(self.values)


def log_returns(prices: PriceSeries) -> ReturnSeries:
    """r_i = ln(S_i / S_{i-1}) between consecutive available closes.

    Missing trading days are not imputed; a gap simply yields the return
    across the gap, dated by the later day.
    """
    r = np.diff(np.log(prices.closes))
    return ReturnSeries(dates=prices.dates[1:], returns=r)


def realized_volatility(
    returns: ReturnSeries, n: int, overlapping: bool = True
) -> RVSeries:
    """n-day annualized realized volatility, 100*sqrt(252*mean(r^2)).

    With ``overlapping`` (the default) windows roll with stride 1 and the
    result has len(returns) - n + 1 values; otherwise windows are disjoint
    with stride n. Each value is dated by the last day of its window.
    """
    if n < 1:
        raise ValueError("window length n must be >= 1")
    m = len(returns)
    if m < n:
        raise ValueError(f"need at least n={n} returns, got {m}")
    r2 = returns.returns**2
    csum = np.concatenate(([0.0], np.cumsum(r2)))
    window_sums = csum[n:] - csum[:-n]
    # cancellation guard: rounding in the cumulative sums can leave a
    # tiny negative where the window is all zeros
    window_sums = np.maximum(window_sums, 0.0)
    values = 100.0 * np.sqrt(TRADING_DAYS_PER_YEAR * window_sums / n)
    dates = returns.dates[n - 1 :]
    if not overlapping:
        values = values[::n]
        dates = dates[::n]
    return RVSeries(window_n=n, dates=dates, values=values)


def threshold_filter(
    rv: RVSeries, lo: float, marker: float
) -> tuple[RVSeries, np.ndarray]:
    """Keep points with value > lo; flag those with value > marker.

    Returns the filtered series plus a boolean marker array aligned to it.
    """
    if lo < 0.0:
        raise ValueError("lo must be >= 0")
    if marker < lo:
        raise ValueError("marker must be >= lo")
    keep = rv.values > lo
    filtered = RVSeries(
        window_n=rv.window_n, dates=rv.dates[keep], values=rv.values[keep]
    )
    flags = filtered.values > marker
    return filtered, flags
