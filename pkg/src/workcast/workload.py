"""Reconstruction of the historical workload as calendar-regular time
series: order-count demand, activity-hour supply, and the smoothing
transforms applied before forecasting.

All series are gap-free: missing calendar bins are explicit zeros, so a
series is fully described by its start date, step and value vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import IO, Iterable, Mapping

import numpy as np

from .errors import DegenerateWindowError, EmptySeriesError, InvalidSpanError
from .eventlog import EventLog

#: decay factor of the centered exponential kernel (weight 0.5^|offset|).
EXP_SMOOTH_ALPHA = 0.5


def week_monday(day: date) -> date:
    """Monday of the ISO week containing ``day``."""
    return day - timedelta(days=day.weekday())


@dataclass(frozen=True)
class TimeSeries:
    start_date: date
    step: str  # "day" or "week"
    values: tuple[float, ...]
    metadata: Mapping[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        if self.step not in ("day", "week"):
            raise ValueError(f"unknown step {self.step!r}")
        if len(self.values) < 1:
            raise ValueError("a series needs at least one value")

    @property
    def step_days(self) -> int:
        return 1 if self.step == "day" else 7

    def dates(self) -> list[date]:
        return [
            self.start_date + timedelta(days=i * self.step_days)
            for i in range(len(self.values))
        ]

    @property
    def end_date(self) -> date:
        return self.start_date + timedelta(days=(len(self.values) - 1) * self.step_days)

    def with_values(self, values: Iterable[float]) -> "TimeSeries":
        return TimeSeries(self.start_date, self.step, tuple(values), self.metadata)


@dataclass(frozen=True)
class WorkloadSeries:
    """A demand (order positions) or supply (hours) series for one article
    type, optionally restricted to a business unit."""

    article_type: str
    kind: str  # "demand" or "supply"
    series: TimeSeries
    unit: str  # "positions" or "hours"
    business_unit: str | None = None

    def __post_init__(self):
        expected = {"demand": "positions", "supply": "hours"}.get(self.kind)
        if expected is None:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.unit != expected:
            raise ValueError(f"{self.kind} series must be in {expected}, got {self.unit!r}")


def _day_bins(log: EventLog) -> list[date]:
    assert log.period is not None
    first = log.period[0].date()
    last = log.period[1].date()
    return [first + timedelta(days=i) for i in range((last - first).days + 1)]


def _to_series(day_values: dict[date, float], log: EventLog, step: str) -> TimeSeries:
    days = _day_bins(log)
    daily = TimeSeries(
        start_date=days[0],
        step="day",
        values=tuple(day_values.get(d, 0.0) for d in days),
    )
    if step == "day":
        return daily
    return resample_weekly(daily)


def demand_series(log: EventLog, article_type: str, step: str = "day") -> WorkloadSeries:
    """Number of ordered positions per calendar bin for one article type.

    Each case contributes its total quantity at the bin of its first
    event; bins without orders are explicit zeros over the whole log
    period.
    """
    traces = log.traces_of_type(article_type)
    if not traces:
        raise EmptySeriesError(f"no traces with article type {article_type!r}")
    by_day: dict[date, float] = {}
    for trace in traces:
        day = trace.start.date()
        by_day[day] = by_day.get(day, 0.0) + float(trace.quantity)
    return WorkloadSeries(
        article_type=article_type,
        kind="demand",
        series=_to_series(by_day, log, step),
        unit="positions",
    )


def _spanned_days(event_start, event_end) -> list[date]:
    """Calendar days an activity touches. An end at exactly midnight does
    not open a new day."""
    first = event_start.date()
    last = event_end.date()
    if last > first and event_end.time() == event_end.min.time():
        last -= timedelta(days=1)
    return [first + timedelta(days=i) for i in range((last - first).days + 1)]


def supply_series(
    log: EventLog,
    article_type: str,
    business_unit: str | None = None,
    step: str = "day",
) -> WorkloadSeries:
    """Activity duration hours per calendar bin for one article type.

    Multi-day activities spread their duration uniformly over the days
    they span.
    """
    traces = log.traces_of_type(article_type)
    if not traces:
        raise EmptySeriesError(f"no traces with article type {article_type!r}")
    by_day: dict[date, float] = {}
    for trace in traces:
        for event in trace.events:
            if business_unit is not None and event.business_unit != business_unit:
                continue
            days = _spanned_days(event.start, event.end)
            share = event.duration_hours / len(days)
            for day in days:
                by_day[day] = by_day.get(day, 0.0) + share
    return WorkloadSeries(
        article_type=article_type,
        kind="supply",
        series=_to_series(by_day, log, step),
        unit="hours",
        business_unit=business_unit,
    )


def triangular_weights(window: int) -> np.ndarray:
    """Symmetric triangular kernel for a window of ``window`` bins.

    Offsets run over [-window//2, +window//2] with weight
    ceil(window/2) - |offset| (zero-weight rims for even windows are
    harmless).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    half = window // 2
    peak = math.ceil(window / 2)
    return np.array([float(peak - abs(j)) for j in range(-half, half + 1)])


def exponential_weights(span: int, alpha: float = EXP_SMOOTH_ALPHA) -> np.ndarray:
    """Centered exponential kernel: weight alpha^|offset|, |offset| <= (span-1)/2."""
    if span < 1 or span % 2 == 0:
        raise InvalidSpanError(f"span must be a positive odd integer, got {span}")
    half = (span - 1) // 2
    return np.array([alpha ** abs(j) for j in range(-half, half + 1)])


def position_kernel(weights: np.ndarray, index: int, length: int) -> np.ndarray:
    """Normalized kernel effectively applied at ``index`` of a series of
    ``length``: truncated at the boundaries and renormalized to sum 1."""
    half = len(weights) // 2
    lo = max(0, index - half)
    hi = min(length, index + half + 1)
    window = weights[lo - index + half : hi - index + half]
    return window / window.sum()


def _kernel_smooth(series: TimeSeries, weights: np.ndarray) -> TimeSeries:
    # Anchored form: out[i] = x[i] + sum(w * (x[j] - x[i])) / W. Identical to
    # the normalized kernel average but keeps constant stretches bit-exact.
    values = np.asarray(series.values, dtype=float)
    n = len(values)
    half = len(weights) // 2
    out = np.empty(n)
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        window = weights[lo - i + half : hi - i + half]
        out[i] = values[i] + np.dot(window, values[lo:hi] - values[i]) / window.sum()
    return series.with_values(out)


def triangular_smooth(series: TimeSeries, window: int) -> TimeSeries:
    """Centered weighted moving average with triangular weights and
    truncate-and-renormalize boundary handling. Length is preserved."""
    if window < 1:
        raise ValueError("window must be >= 1")
    if window > 2 * len(series.values) + 1:
        raise DegenerateWindowError(
            f"window {window} exceeds 2*length+1 = {2 * len(series.values) + 1}"
        )
    return _kernel_smooth(series, triangular_weights(window))


def centered_exp_smooth(series: TimeSeries, span: int) -> TimeSeries:
    """Centered exponential moving average over ``span`` bins (odd)."""
    if span % 2 == 0:
        raise InvalidSpanError(f"span must be odd, got {span}")
    if span < 1:
        raise InvalidSpanError(f"span must be >= 1, got {span}")
    return _kernel_smooth(series, exponential_weights(span))


def first_difference(series: TimeSeries) -> TimeSeries:
    """Optional stationarity transform: x[t] - x[t-1], one bin shorter."""
    if len(series.values) < 2:
        raise ValueError("need at least two observations to difference")
    values = np.diff(np.asarray(series.values, dtype=float))
    return TimeSeries(
        start_date=series.start_date + timedelta(days=series.step_days),
        step=series.step,
        values=tuple(values),
        metadata=series.metadata,
    )


def resample_weekly(series: TimeSeries) -> TimeSeries:
    """Sum a daily series into ISO weeks (Monday-anchored bins).

    Partial first/last weeks are kept; the metadata flags
    ``partial_start`` / ``partial_end`` mark them.
    """
    if series.step != "day":
        raise ValueError("resample_weekly expects a daily series")
    start_monday = week_monday(series.start_date)
    sums: dict[date, list[float]] = {}
    for day, value in zip(series.dates(), series.values):
        sums.setdefault(week_monday(day), []).append(value)
    mondays = sorted(sums)
    n_weeks = (mondays[-1] - mondays[0]).days // 7 + 1
    values = []
    for i in range(n_weeks):
        monday = start_monday + timedelta(days=7 * i)
        values.append(math.fsum(sums.get(monday, ())))
    last_day = series.end_date
    return TimeSeries(
        start_date=start_monday,
        step="week",
        values=tuple(values),
        metadata={
            "partial_start": series.start_date.weekday() != 0,
            "partial_end": last_day.weekday() != 6,
        },
    )


def series_to_csv(series: TimeSeries, stream: IO[str]) -> None:
    """Write a series as ``date,value`` rows (stable float formatting)."""
    stream.write("date,value\n")
    for day, value in zip(series.dates(), series.values):
        stream.write(f"{day.isoformat()},{value!r}\n")
