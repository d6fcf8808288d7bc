"""Seeded synthetic event-log generation: weekly order counts from a
sinusoid-plus-noise generator, traces instantiated from variant templates
with jittered offsets. Stands in for confidential ERP extracts in tests,
demos and the bundled fixture."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import date, datetime, time, timedelta
from typing import Sequence

import numpy as np

from .eventlog import EventLog, EventRecord, Trace
from .workload import week_monday


@dataclass(frozen=True)
class TemplateActivity:
    activity: str
    offset_days: float
    duration_hours: float
    business_unit: str
    resource: str


@dataclass(frozen=True)
class VariantTemplate:
    probability: float
    activities: tuple[TemplateActivity, ...]

    def __post_init__(self):
        if not self.activities:
            raise ValueError("a template needs at least one activity")
        offsets = [a.offset_days for a in self.activities]
        if any(b < a for a, b in zip(offsets, offsets[1:])):
            raise ValueError("template offsets must be non-decreasing")


@dataclass(frozen=True)
class DemandGenerator:
    """Weekly order counts: round(mean + amplitude*sin(2*pi*w/period + phase)
    + gaussian noise), clipped at zero."""

    mean: float
    amplitude: float = 0.0
    period_weeks: float = 52.0
    phase: float = 0.0
    noise_sigma: float = 0.0

    def draw(self, week_index: int, rng: np.random.Generator) -> int:
        value = self.mean + self.amplitude * math.sin(
            2.0 * math.pi * week_index / self.period_weeks + self.phase
        )
        if self.noise_sigma > 0:
            value += rng.normal(0.0, self.noise_sigma)
        return max(0, round(value))


@dataclass(frozen=True)
class ArticleTypeSpec:
    article_type: str
    demand: DemandGenerator
    templates: tuple[VariantTemplate, ...]
    n_customers: int = 8
    n_countries: int = 3

    def __post_init__(self):
        total = math.fsum(t.probability for t in self.templates)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(
                f"template probabilities for {self.article_type!r} sum to {total}, not 1"
            )


@dataclass(frozen=True)
class SyntheticLogSpec:
    article_types: tuple[ArticleTypeSpec, ...]
    start: date
    weeks: int
    seed: int
    offset_jitter_days: float = 0.4
    duration_jitter: float = 0.15


def _count_rng(spec: SyntheticLogSpec, type_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((spec.seed, type_index, 0)))
    )


def _order_rng(spec: SyntheticLogSpec, type_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((spec.seed, type_index, 1)))
    )


def realized_demand(spec: SyntheticLogSpec) -> dict[str, list[int]]:
    """The weekly order counts the generator will emit, per article type
    (the count stream is independent of the per-order stream)."""
    counts: dict[str, list[int]] = {}
    for type_index, ats in enumerate(spec.article_types):
        rng = _count_rng(spec, type_index)
        counts[ats.article_type] = [
            ats.demand.draw(w, rng) for w in range(spec.weeks)
        ]
    return counts


def generate_synthetic_log(spec: SyntheticLogSpec) -> EventLog:
    """Instantiate the spec into a full event log, deterministic given the
    seed. Each order is one trace: the first template activity carries the
    order position (quantity 1) and subsequent activities follow template
    offsets with jitter, order preserved."""
    start_monday = week_monday(spec.start)
    counts = realized_demand(spec)
    traces: list[Trace] = []
    for type_index, ats in enumerate(spec.article_types):
        rng = _order_rng(spec, type_index)
        probabilities = np.array([t.probability for t in ats.templates])
        for w, count in enumerate(counts[ats.article_type]):
            week_start = start_monday + timedelta(days=7 * w)
            for k in range(count):
                template = ats.templates[rng.choice(len(ats.templates), p=probabilities)]
                case_id = f"{ats.article_type}-{w:04d}-{k:03d}"
                customer = f"CUST-{rng.integers(ats.n_customers):03d}"
                country = f"CTRY-{rng.integers(ats.n_countries):02d}"
                order_start = datetime.combine(
                    week_start + timedelta(days=int(rng.integers(0, 5))), time(8, 0)
                )
                events = []
                previous_offset = 0.0
                for i, act in enumerate(template.activities):
                    if i == 0:
                        offset = 0.0
                    else:
                        jitter = rng.uniform(
                            -spec.offset_jitter_days, spec.offset_jitter_days
                        )
                        # keep at least an hour between starts so the
                        # template's activity order survives sorting
                        offset = max(previous_offset + 1.0 / 24.0, act.offset_days + jitter)
                    previous_offset = offset
                    duration = act.duration_hours * (
                        1.0 + rng.uniform(-spec.duration_jitter, spec.duration_jitter)
                    )
                    duration = max(0.25, duration)
                    events.append(
                        EventRecord.create(
                            case_id=case_id,
                            activity=act.activity,
                            start=order_start + timedelta(days=offset),
                            duration_hours=duration,
                            resource=act.resource,
                            business_unit=act.business_unit,
                            article_type=ats.article_type,
                            quantity=1 if i == 0 else 0,
                            customer_id=customer,
                            country=country,
                        )
                    )
                traces.append(Trace.from_events(events))
    return EventLog.from_traces(traces)


def _order_templates(extra: Sequence[TemplateActivity] = ()) -> tuple[TemplateActivity, ...]:
    base = (
        TemplateActivity("order entry", 0.0, 1.0, "customer_service", "clerk"),
        TemplateActivity("order confirmation", 1.0, 0.5, "customer_service", "clerk"),
        TemplateActivity("production planning", 3.0, 2.0, "planning", "planner"),
        TemplateActivity("picking", 7.0, 1.5, "logistics", "operator"),
        TemplateActivity("shipping", 9.0, 2.0, "shipment", "operator"),
        TemplateActivity("invoicing", 11.0, 0.5, "accounting", "clerk"),
    )
    return tuple(sorted([*base, *extra], key=lambda a: a.offset_days))


def bundled_spec(seed: int = 20220314, weeks: int = 126, start: date = date(2021, 1, 4)) -> SyntheticLogSpec:
    """The spec behind the fixture log shipped with the repo: three
    article types with distinct demand shapes and variant mixes."""
    standard = VariantTemplate(0.6, _order_templates())
    inspected = VariantTemplate(
        0.3,
        _order_templates(
            (TemplateActivity("quality inspection", 8.0, 2.5, "inspection", "inspector"),)
        ),
    )
    express = VariantTemplate(
        0.1,
        (
            TemplateActivity("order entry", 0.0, 1.0, "customer_service", "clerk"),
            TemplateActivity("picking", 1.0, 1.5, "logistics", "operator"),
            TemplateActivity("shipping", 2.0, 2.0, "shipment", "operator"),
            TemplateActivity("invoicing", 4.0, 0.5, "accounting", "clerk"),
        ),
    )
    simple = VariantTemplate(
        0.7,
        (
            TemplateActivity("order entry", 0.0, 1.0, "customer_service", "clerk"),
            TemplateActivity("production planning", 2.0, 3.0, "planning", "planner"),
            TemplateActivity("shipping", 6.0, 2.0, "shipment", "operator"),
            TemplateActivity("invoicing", 8.0, 0.5, "accounting", "clerk"),
        ),
    )
    purchased = VariantTemplate(
        0.3,
        (
            TemplateActivity("order entry", 0.0, 1.0, "customer_service", "clerk"),
            TemplateActivity("material purchase", 1.0, 2.0, "purchasing", "buyer"),
            TemplateActivity("production planning", 4.0, 3.0, "planning", "planner"),
            TemplateActivity("shipping", 9.0, 2.0, "shipment", "operator"),
            TemplateActivity("invoicing", 11.0, 0.5, "accounting", "clerk"),
        ),
    )
    return SyntheticLogSpec(
        article_types=(
            ArticleTypeSpec(
                article_type="AT-ALPHA",
                demand=DemandGenerator(mean=6.0, amplitude=2.5, period_weeks=52.0, noise_sigma=1.0),
                templates=(standard, inspected, express),
                n_customers=9,
                n_countries=4,
            ),
            ArticleTypeSpec(
                article_type="AT-BRAVO",
                demand=DemandGenerator(
                    mean=4.0, amplitude=1.5, period_weeks=26.0, phase=1.3, noise_sigma=0.8
                ),
                templates=(simple, purchased),
                n_customers=5,
                n_countries=2,
            ),
            ArticleTypeSpec(
                article_type="AT-CHARLIE",
                demand=DemandGenerator(mean=3.0, amplitude=0.0, noise_sigma=0.6),
                templates=(
                    replace(standard, probability=0.8),
                    replace(express, probability=0.2),
                ),
                n_customers=3,
                n_countries=2,
            ),
        ),
        start=start,
        weeks=weeks,
        seed=seed,
    )
