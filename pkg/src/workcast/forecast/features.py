"""Feature rows fed to the forecaster: the weekly observation plus
exogenous signals (month-of-year one-hot, unique customers, unique
countries per week)."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from typing import Sequence

import numpy as np

from ..errors import AlignmentError
from ..eventlog import EventLog
from ..workload import WorkloadSeries, week_monday

#: value + 12 month indicators + unique customers + unique countries
FEATURE_DIM = 15


def month_onehot_for(day: date) -> tuple[int, ...]:
    return tuple(1 if m == day.month else 0 for m in range(1, 13))


@dataclass(frozen=True)
class FeatureRow:
    """Model input for one week. ``value`` is the raw series observation;
    normalization happens inside the model."""

    week_start: date
    value: float
    month_onehot: tuple[int, ...]
    unique_customers: float
    unique_countries: float

    def __post_init__(self):
        if len(self.month_onehot) != 12 or sum(self.month_onehot) != 1:
            raise ValueError("exactly one month indicator must be set")

    def to_vector(self) -> np.ndarray:
        return np.array(
            [self.value, *self.month_onehot, self.unique_customers, self.unique_countries],
            dtype=float,
        )

    def replace_value(self, value: float) -> "FeatureRow":
        return FeatureRow(
            week_start=self.week_start,
            value=value,
            month_onehot=self.month_onehot,
            unique_customers=self.unique_customers,
            unique_countries=self.unique_countries,
        )


def rows_to_matrix(rows: Sequence[FeatureRow]) -> np.ndarray:
    return np.stack([row.to_vector() for row in rows])


def build_features(demand: WorkloadSeries, log: EventLog) -> list[FeatureRow]:
    """One feature row per week of a weekly demand series.

    Customers and countries are counted over the article type's orders
    starting in that week; the month indicator comes from the week's
    Monday. Raises :class:`AlignmentError` when the log does not cover
    the series period.
    """
    if demand.series.step != "week":
        raise AlignmentError("build_features expects a weekly demand series")
    if log.period is None:
        raise AlignmentError("log is empty")
    log_first = week_monday(log.period[0].date())
    log_last = week_monday(log.period[1].date())
    if demand.series.start_date < log_first or demand.series.end_date > log_last:
        raise AlignmentError(
            f"series weeks {demand.series.start_date}..{demand.series.end_date} "
            f"are not covered by log weeks {log_first}..{log_last}"
        )

    customers: dict[date, set[str]] = {}
    countries: dict[date, set[str]] = {}
    for trace in log.traces_of_type(demand.article_type):
        week = week_monday(trace.start.date())
        for event in trace.events:
            if event.customer_id:
                customers.setdefault(week, set()).add(event.customer_id)
            if event.country:
                countries.setdefault(week, set()).add(event.country)

    rows = []
    for week, value in zip(demand.series.dates(), demand.series.values):
        rows.append(
            FeatureRow(
                week_start=week,
                value=float(value),
                month_onehot=month_onehot_for(week),
                unique_customers=float(len(customers.get(week, ()))),
                unique_countries=float(len(countries.get(week, ()))),
            )
        )
    return rows


def carry_forward_row(last: FeatureRow, value: float) -> FeatureRow:
    """Next-week row for re-injection: the predicted value becomes the
    observation, exogenous counts are carried forward, and the month
    indicator advances with the calendar."""
    week = last.week_start + timedelta(days=7)
    return FeatureRow(
        week_start=week,
        value=value,
        month_onehot=month_onehot_for(week),
        unique_customers=last.unique_customers,
        unique_countries=last.unique_countries,
    )
