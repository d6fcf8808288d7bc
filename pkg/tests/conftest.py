"""Shared fixtures: hand-built micro logs for oracle tests and a small
synthetic log plus trained models for integration tests."""

from __future__ import annotations

from datetime import datetime, timedelta
from pathlib import Path

import pytest

from workcast import bundled_spec, generate_synthetic_log, parse_log
from workcast.eventlog import EventLog, EventRecord, Trace
from workcast.forecast import TrainConfig, build_features, train
from workcast.pipeline import weekly_demand

REPO_ROOT = Path(__file__).resolve().parent.parent
BUNDLED_LOG = REPO_ROOT / "data" / "synthetic_log.csv"


def make_event(
    case_id: str,
    activity: str,
    start: str,
    duration_hours: float = 1.0,
    article_type: str = "AT-X",
    business_unit: str = "unit-1",
    quantity: int = 0,
    **kwargs,
) -> EventRecord:
    return EventRecord.create(
        case_id=case_id,
        activity=activity,
        start=datetime.fromisoformat(start),
        duration_hours=duration_hours,
        article_type=article_type,
        business_unit=business_unit,
        quantity=quantity,
        **kwargs,
    )


def make_log(*traces: Trace) -> EventLog:
    return EventLog.from_traces(traces)


def trace_from(case_id: str, start_day: str, signature: list[str], article_type="AT-X",
               gap_days: float = 1.0, duration_hours: float = 2.0, quantity: int = 1,
               business_unit: str = "unit-1", **kwargs) -> Trace:
    """A trace with one activity per ``gap_days`` starting at ``start_day``."""
    base = datetime.fromisoformat(start_day)
    events = []
    for i, activity in enumerate(signature):
        events.append(
            EventRecord.create(
                case_id=case_id,
                activity=activity,
                start=base + timedelta(days=gap_days * i),
                duration_hours=duration_hours,
                article_type=article_type,
                business_unit=business_unit,
                quantity=quantity if i == 0 else 0,
                **kwargs,
            )
        )
    return Trace.from_events(events)


@pytest.fixture(scope="session")
def bundled_log() -> EventLog:
    with open(BUNDLED_LOG, newline="", encoding="utf-8") as handle:
        return parse_log(handle)


@pytest.fixture(scope="session")
def small_log() -> EventLog:
    return generate_synthetic_log(bundled_spec(seed=5, weeks=60))


@pytest.fixture(scope="session")
def small_models(small_log):
    config = TrainConfig(window=6, epochs=8, hidden_dim=8, seed=3)
    models = {}
    for article_type in small_log.article_types():
        demand = weekly_demand(small_log, article_type)
        features = build_features(demand, small_log)
        models[article_type] = train(demand, features, config)
    return models
