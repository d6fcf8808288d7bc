"""End-to-end orchestration: forecast order quantities per article type,
expand them into planned activities, complete running orders, and
aggregate everything into per-business-unit weekly workload, plus the
chronological evaluation harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    MissingModelError,
    SeriesTooShortError,
    UndefinedMetricError,
)
from .eventlog import EventLog, Trace
from .forecast import FeatureRow, ForecastModel, TrainConfig, build_features, predict_horizon
from .replay import (
    PlannedActivity,
    RunningOrder,
    VariantCatalog,
    build_variant_catalog,
    complete_running_order,
    sample_new_order_activities,
)
from .workload import (
    TimeSeries,
    WorkloadSeries,
    centered_exp_smooth,
    demand_series,
    resample_weekly,
    triangular_smooth,
    week_monday,
)


@dataclass(frozen=True)
class ForecastRequest:
    as_of: date
    horizon_weeks: int
    article_types: tuple[str, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.horizon_weeks < 1:
            raise ValueError("horizon_weeks must be >= 1")


@dataclass(frozen=True)
class WorkloadForecast:
    as_of: date
    horizon_weeks: int
    seed: int
    first_week: date
    order_quantities: Mapping[str, tuple[float, ...]]
    new_order_activities: tuple[PlannedActivity, ...]
    running_completions: tuple[PlannedActivity, ...]
    aggregate: Mapping[str, TimeSeries]


def weekly_demand(
    log: EventLog,
    article_type: str,
    triangular_window_days: int | None = None,
    exp_smooth_span: int | None = None,
) -> WorkloadSeries:
    """Weekly order positions for one article type, optionally smoothed:
    the triangular window applies to the daily series before resampling,
    the exponential span to the weekly series afterwards."""
    daily = demand_series(log, article_type, step="day")
    series = daily.series
    if triangular_window_days is not None:
        series = triangular_smooth(series, triangular_window_days)
    series = resample_weekly(series)
    if exp_smooth_span is not None:
        series = centered_exp_smooth(series, exp_smooth_span)
    return WorkloadSeries(
        article_type=article_type, kind="demand", series=series, unit="positions"
    )


def running_orders(
    log: EventLog, as_of: date, article_types: Sequence[str] | None = None
) -> list[RunningOrder]:
    """Cases open at ``as_of``: at least one event has started before it
    and at least one has not."""
    cutoff = datetime.combine(as_of, datetime.min.time())
    orders = []
    for trace in log.traces:
        if article_types is not None and trace.article_type not in article_types:
            continue
        executed = [e for e in trace.events if e.start < cutoff]
        pending = [e for e in trace.events if e.start >= cutoff]
        if executed and pending:
            orders.append(
                RunningOrder(
                    case_id=trace.case_id,
                    article_type=trace.article_type,
                    executed=Trace.from_events(executed),
                    as_of=as_of,
                )
            )
    return orders


def aggregate_activities(
    activities: Sequence[PlannedActivity],
) -> dict[str, TimeSeries]:
    """Bin planned activities into weekly hours per business unit.

    All units share one Monday-anchored weekly axis spanning the whole
    plan; bins are exact (order-independent) float sums.
    """
    if not activities:
        return {}
    bins: dict[str, dict[date, list[float]]] = {}
    for activity in activities:
        week = week_monday(activity.planned_date.date())
        bins.setdefault(activity.business_unit, {}).setdefault(week, []).append(
            activity.duration_hours
        )
    first = min(week for unit in bins.values() for week in unit)
    last = max(week for unit in bins.values() for week in unit)
    n_weeks = (last - first).days // 7 + 1
    return {
        unit: TimeSeries(
            start_date=first,
            step="week",
            values=tuple(
                math.fsum(unit_bins.get(first + timedelta(days=7 * i), ()))
                for i in range(n_weeks)
            ),
        )
        for unit, unit_bins in sorted(bins.items())
    }


def _sample_seed(base_seed: int, type_index: int, week_index: int) -> int:
    return int(
        np.random.SeedSequence((base_seed, type_index, week_index)).generate_state(1)[0]
    )


def first_forecast_week(as_of: date) -> date:
    """Monday of the first full week starting at or after ``as_of``."""
    monday = week_monday(as_of)
    return monday if as_of == monday else monday + timedelta(days=7)


def run_pipeline(
    log: EventLog,
    request: ForecastRequest,
    models: Mapping[str, ForecastModel],
    catalog: VariantCatalog | None = None,
) -> WorkloadForecast:
    """Produce the full workload forecast: predicted order quantities per
    week, sampled new-order activities, running-order completions, and
    their weekly aggregate. Deterministic given (log, request, models)."""
    types = list(request.article_types) or log.article_types()
    for article_type in types:
        if article_type not in models:
            raise MissingModelError(article_type)
    if catalog is None:
        catalog = build_variant_catalog(log)

    start_week = first_forecast_week(request.as_of)
    quantities: dict[str, tuple[float, ...]] = {}
    new_order_activities: list[PlannedActivity] = []
    for type_index, article_type in enumerate(sorted(types)):
        model = models[article_type]
        demand = weekly_demand(log, article_type)
        features = build_features(demand, log)
        window_rows = [r for r in features if r.week_start < start_week]
        K = model.config.window
        if len(window_rows) < K:
            raise SeriesTooShortError(
                f"only {len(window_rows)} observed weeks before {start_week} "
                f"for {article_type!r}, need {K}"
            )
        predictions = predict_horizon(model, window_rows[-K:], request.horizon_weeks)
        quantities[article_type] = tuple(predictions)
        for week_index, predicted in enumerate(predictions):
            quantity = int(round(predicted))  # banker's rounding per round()
            week = start_week + timedelta(days=7 * week_index)
            new_order_activities.extend(
                sample_new_order_activities(
                    catalog,
                    article_type,
                    quantity,
                    week,
                    rng_seed=_sample_seed(request.seed, type_index, week_index),
                )
            )

    completions: list[PlannedActivity] = []
    for order in running_orders(log, request.as_of, article_types=types):
        completions.extend(complete_running_order(order, catalog))

    aggregate = aggregate_activities([*new_order_activities, *completions])
    return WorkloadForecast(
        as_of=request.as_of,
        horizon_weeks=request.horizon_weeks,
        seed=request.seed,
        first_week=start_week,
        order_quantities=quantities,
        new_order_activities=tuple(new_order_activities),
        running_completions=tuple(completions),
        aggregate=aggregate,
    )


def rmse(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """Root mean squared error."""
    if len(actual) != len(predicted) or len(actual) == 0:
        raise ValueError(
            f"series lengths differ or are empty: {len(actual)} vs {len(predicted)}"
        )
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    return float(np.sqrt(np.mean((a - p) ** 2)))


def mape_detail(actual: Sequence[float], predicted: Sequence[float]) -> tuple[float, int]:
    """Mean absolute percentage error over points with nonzero actuals,
    plus the number of zero-actual points skipped."""
    if len(actual) != len(predicted) or len(actual) == 0:
        raise ValueError(
            f"series lengths differ or are empty: {len(actual)} vs {len(predicted)}"
        )
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    nonzero = a != 0
    skipped = int(np.sum(~nonzero))
    if not np.any(nonzero):
        raise UndefinedMetricError("MAPE is undefined when every actual is zero")
    value = float(np.mean(np.abs(a[nonzero] - p[nonzero]) / np.abs(a[nonzero])) * 100.0)
    return value, skipped


def mape(actual: Sequence[float], predicted: Sequence[float]) -> float:
    return mape_detail(actual, predicted)[0]


@dataclass(frozen=True)
class EvalConfig:
    train: TrainConfig = field(default_factory=TrainConfig)
    horizon_weeks: int = 41
    article_types: tuple[str, ...] = ()
    triangular_window_days: int | None = None
    exp_smooth_span: int | None = None


@dataclass(frozen=True)
class TypeEval:
    article_type: str
    one_step_rmse: float
    one_step_mape: float | None
    one_step_mape_skipped: int
    horizon_weeks: int
    horizon_mape: float | None
    horizon_mape_skipped: int


@dataclass(frozen=True)
class EvalReport:
    per_type: tuple[TypeEval, ...]
    skipped_types: tuple[tuple[str, str], ...]
    macro_rmse: float | None
    macro_mape: float | None


def evaluate(log: EventLog, config: EvalConfig) -> EvalReport:
    """Train one model per article type on the chronological split and
    report one-step test metrics plus the re-injected horizon MAPE.

    Types whose series are too short are recorded as skipped, never
    fatal. Macro averages are unweighted over the evaluated types.
    """
    from .forecast import train  # local import to keep module load light

    types = list(config.article_types) or log.article_types()
    per_type: list[TypeEval] = []
    skipped: list[tuple[str, str]] = []
    for article_type in sorted(types):
        demand = weekly_demand(
            log,
            article_type,
            triangular_window_days=config.triangular_window_days,
            exp_smooth_span=config.exp_smooth_span,
        )
        features = build_features(demand, log)
        try:
            model = train(demand, features, config.train)
        except SeriesTooShortError as exc:
            skipped.append((article_type, str(exc)))
            continue

        report = model.train_report
        K = config.train.window
        n_train = report.n_train_windows
        values = demand.series.values
        horizon = min(config.horizon_weeks, report.n_test_windows)
        window = features[n_train : n_train + K]
        predictions = predict_horizon(model, window, horizon)
        actuals = values[K + n_train : K + n_train + horizon]
        try:
            horizon_mape, horizon_skipped = mape_detail(actuals, predictions)
        except UndefinedMetricError:
            horizon_mape, horizon_skipped = None, len(actuals)
        per_type.append(
            TypeEval(
                article_type=article_type,
                one_step_rmse=report.test_rmse,
                one_step_mape=report.test_mape,
                one_step_mape_skipped=report.test_mape_skipped,
                horizon_weeks=horizon,
                horizon_mape=horizon_mape,
                horizon_mape_skipped=horizon_skipped,
            )
        )

    rmses = [t.one_step_rmse for t in per_type if t.one_step_rmse is not None]
    mapes = [t.one_step_mape for t in per_type if t.one_step_mape is not None]
    return EvalReport(
        per_type=tuple(per_type),
        skipped_types=tuple(skipped),
        macro_rmse=float(np.mean(rmses)) if rmses else None,
        macro_mape=float(np.mean(mapes)) if mapes else None,
    )


def planned_activity_to_dict(activity: PlannedActivity) -> dict:
    return {
        "activity": activity.activity,
        "business_unit": activity.business_unit,
        "planned_date": activity.planned_date.isoformat(),
        "duration_hours": activity.duration_hours,
        "offset_days": activity.offset_days,
        "provenance": {
            "kind": activity.provenance.kind,
            "source": activity.provenance.source,
        },
    }


def series_to_dict(series: TimeSeries) -> dict:
    return {
        "start_date": series.start_date.isoformat(),
        "step": series.step,
        "values": list(series.values),
        "metadata": dict(series.metadata),
    }


def forecast_to_dict(forecast: WorkloadForecast) -> dict:
    """JSON-ready view of a forecast with stable field names."""
    return {
        "as_of": forecast.as_of.isoformat(),
        "horizon_weeks": forecast.horizon_weeks,
        "seed": forecast.seed,
        "first_week": forecast.first_week.isoformat(),
        "order_quantities": {
            article_type: list(values)
            for article_type, values in sorted(forecast.order_quantities.items())
        },
        "new_order_activities": [
            planned_activity_to_dict(a) for a in forecast.new_order_activities
        ],
        "running_completions": [
            planned_activity_to_dict(a) for a in forecast.running_completions
        ],
        "aggregate": {
            unit: series_to_dict(series)
            for unit, series in sorted(forecast.aggregate.items())
        },
    }


def eval_report_to_dict(report: EvalReport) -> dict:
    return {
        "per_type": [
            {
                "article_type": t.article_type,
                "one_step_rmse": t.one_step_rmse,
                "one_step_mape": t.one_step_mape,
                "one_step_mape_skipped": t.one_step_mape_skipped,
                "horizon_weeks": t.horizon_weeks,
                "horizon_mape": t.horizon_mape,
                "horizon_mape_skipped": t.horizon_mape_skipped,
            }
            for t in report.per_type
        ],
        "skipped_types": [list(pair) for pair in report.skipped_types],
        "macro_rmse": report.macro_rmse,
        "macro_mape": report.macro_mape,
    }
