"""Turning predicted order quantities into concrete activity plans.

New orders replay frequent historical trace variants of the same article
type, sampled by frequency after trimming rare shapes; running orders are
completed by aligning their executed prefix against historical variants
with the Levenshtein distance and replaying the best match's remainder.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from typing import IO, Mapping, Sequence

import numpy as np

from .errors import NoHistoryError, UnknownArticleTypeError
from .eventlog import EventLog, Trace


@dataclass(frozen=True)
class ActivityProfile:
    """Averaged schedule of one activity position within a variant."""

    activity: str
    offset_days: float
    duration_hours: float
    business_unit: str
    resource: str


@dataclass(frozen=True)
class TraceVariant:
    """A distinct trace shape: signature, observed frequency, and the
    averaged per-activity offsets/durations of its exemplars."""

    article_type: str
    signature: tuple[str, ...]
    frequency: int
    exemplars: tuple[str, ...]
    offset_profile: tuple[ActivityProfile, ...]

    def __post_init__(self):
        if self.frequency != len(self.exemplars):
            raise ValueError("frequency must equal the number of exemplars")
        if len(self.offset_profile) != len(self.signature):
            raise ValueError("offset profile length must match the signature")
        offsets = [p.offset_days for p in self.offset_profile]
        if any(b < a for a, b in zip(offsets, offsets[1:])):
            raise ValueError("offsets must be non-decreasing")

    @property
    def variant_id(self) -> str:
        digest = hashlib.sha1(
            (self.article_type + "\x1f" + "\x1f".join(self.signature)).encode("utf-8")
        ).hexdigest()
        return digest[:10]


@dataclass(frozen=True)
class VariantCatalog:
    """Variants per article type, most frequent first (ties by signature)."""

    by_type: Mapping[str, tuple[TraceVariant, ...]]

    def variants(self, article_type: str) -> tuple[TraceVariant, ...]:
        if article_type not in self.by_type:
            raise UnknownArticleTypeError(
                f"article type {article_type!r} has no variants"
            )
        return self.by_type[article_type]

    def article_types(self) -> list[str]:
        return sorted(self.by_type)


@dataclass(frozen=True)
class RunningOrder:
    """A case with executed activities but no completion at ``as_of``."""

    case_id: str
    article_type: str
    executed: Trace
    as_of: date

    def __post_init__(self):
        if not self.executed.events:
            raise ValueError("a running order needs at least one executed event")


@dataclass(frozen=True)
class Provenance:
    kind: str    # "new_order" or "running_completion"
    source: str  # sampled variant id, or the completed case id


@dataclass(frozen=True)
class PlannedActivity:
    activity: str
    business_unit: str
    planned_date: datetime
    duration_hours: float
    offset_days: float
    provenance: Provenance

    def __post_init__(self):
        if self.duration_hours <= 0:
            raise ValueError("planned activities must carry a positive duration")


def _mode(values: Sequence[str]) -> str:
    counts = Counter(values)
    return min(counts, key=lambda v: (-counts[v], v))


def build_variant_catalog(log: EventLog) -> VariantCatalog:
    """Group traces by (article type, signature) and average each
    position's day offset and duration across exemplars."""
    groups: dict[tuple[str, tuple[str, ...]], list[Trace]] = {}
    for trace in log.traces:
        groups.setdefault((trace.article_type, trace.signature), []).append(trace)

    by_type: dict[str, list[TraceVariant]] = {}
    for (article_type, signature), traces in groups.items():
        traces = sorted(traces, key=lambda t: t.case_id)
        profile = []
        n = len(traces)
        for i, activity in enumerate(signature):
            offsets = [
                (t.events[i].start - t.start).total_seconds() / 86400.0 for t in traces
            ]
            durations = [t.events[i].duration_hours for t in traces]
            profile.append(
                ActivityProfile(
                    activity=activity,
                    offset_days=math.fsum(offsets) / n,
                    duration_hours=math.fsum(durations) / n,
                    business_unit=_mode([t.events[i].business_unit for t in traces]),
                    resource=_mode([t.events[i].resource for t in traces]),
                )
            )
        by_type.setdefault(article_type, []).append(
            TraceVariant(
                article_type=article_type,
                signature=signature,
                frequency=n,
                exemplars=tuple(t.case_id for t in traces),
                offset_profile=tuple(profile),
            )
        )
    return VariantCatalog(
        by_type={
            article_type: tuple(
                sorted(variants, key=lambda v: (-v.frequency, v.signature))
            )
            for article_type, variants in by_type.items()
        }
    )


def frequency_filter(
    variants: Sequence[TraceVariant], mass: float = 0.8
) -> list[TraceVariant]:
    """Minimal most-frequent-first prefix covering at least ``mass`` of
    the total frequency; trims rare shapes so outliers are not replayed."""
    if not 0.0 < mass <= 1.0:
        raise ValueError(f"mass must be in (0, 1], got {mass}")
    if not variants:
        return []
    ranked = sorted(variants, key=lambda v: (-v.frequency, v.signature))
    total = sum(v.frequency for v in ranked)
    retained: list[TraceVariant] = []
    cumulative = 0
    for variant in ranked:
        retained.append(variant)
        cumulative += variant.frequency
        if cumulative / total >= mass:
            break
    return retained


def _emit(
    variant: TraceVariant,
    start: datetime,
    first_index: int,
    anchor_offset: float,
    provenance: Provenance,
) -> list[PlannedActivity]:
    activities = []
    for profile in variant.offset_profile[first_index:]:
        offset = profile.offset_days - anchor_offset
        planned = start + timedelta(days=offset)
        assert planned >= start
        activities.append(
            PlannedActivity(
                activity=profile.activity,
                business_unit=profile.business_unit,
                planned_date=planned,
                duration_hours=profile.duration_hours,
                offset_days=offset,
                provenance=provenance,
            )
        )
    return activities


def sample_new_order_activities(
    catalog: VariantCatalog,
    article_type: str,
    predicted_quantity: int,
    week_start: date,
    rng_seed: int,
    mass: float = 0.8,
) -> list[PlannedActivity]:
    """Instantiate ``predicted_quantity`` orders by drawing variants with
    probability proportional to frequency (over the mass-filtered set)
    and emitting each drawn variant's activities at ``week_start`` plus
    its historical offsets, unscaled."""
    if predicted_quantity < 0:
        raise ValueError("predicted_quantity must be >= 0")
    retained = frequency_filter(catalog.variants(article_type), mass)
    if predicted_quantity == 0:
        return []
    total = sum(v.frequency for v in retained)
    probabilities = np.array([v.frequency / total for v in retained])
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    draws = rng.choice(len(retained), size=predicted_quantity, p=probabilities)
    start = datetime.combine(week_start, datetime.min.time())
    activities: list[PlannedActivity] = []
    for index in draws:
        variant = retained[index]
        activities.extend(
            _emit(
                variant,
                start,
                first_index=0,
                anchor_offset=0.0,
                provenance=Provenance(kind="new_order", source=variant.variant_id),
            )
        )
    return activities


def levenshtein(s: Sequence[str], t: Sequence[str]) -> int:
    """Minimum number of insertions, deletions and substitutions turning
    one label sequence into the other (unit costs)."""
    m, n = len(s), len(t)
    if m == 0 or n == 0:
        return max(m, n)
    previous = list(range(n + 1))
    for i in range(1, m + 1):
        current = [i] + [0] * n
        si = s[i - 1]
        for j in range(1, n + 1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (si != t[j - 1]),
            )
        previous = current
    return previous[n]


def complete_running_order(
    order: RunningOrder, catalog: VariantCatalog
) -> list[PlannedActivity]:
    """Align the executed prefix with the most similar historical variant
    and replay that variant's remainder from ``as_of``.

    Candidates are all variants of the article type (the catalog must be
    built from the full history, not a frequency-filtered subset). For
    each variant the executed signature is compared against every prefix
    at least as long as it; the (variant, prefix) pair with the smallest
    distance wins, ties broken by higher frequency, shorter remainder,
    then signature. Remaining activities keep their historical gaps
    relative to the last matched activity.
    """
    try:
        variants = catalog.variants(order.article_type)
    except UnknownArticleTypeError as exc:
        raise NoHistoryError(
            f"no historical traces for article type {order.article_type!r}"
        ) from exc
    executed = order.executed.signature

    best_key = None
    best: tuple[TraceVariant, int] | None = None
    for variant in variants:
        signature = variant.signature
        if len(signature) >= len(executed):
            prefix_lengths = range(len(executed), len(signature) + 1)
        else:
            prefix_lengths = [len(signature)]
        for p in prefix_lengths:
            distance = levenshtein(executed, signature[:p])
            key = (distance, -variant.frequency, len(signature) - p, signature)
            if best_key is None or key < best_key:
                best_key = key
                best = (variant, p)

    assert best is not None
    variant, p = best
    if p == len(variant.signature):
        return []
    anchor = variant.offset_profile[p - 1].offset_days
    start = datetime.combine(order.as_of, datetime.min.time())
    return _emit(
        variant,
        start,
        first_index=p,
        anchor_offset=anchor,
        provenance=Provenance(kind="running_completion", source=order.case_id),
    )


def planned_activities_to_csv(activities: Sequence[PlannedActivity], stream: IO[str]) -> None:
    """Write a plan as CSV (date, activity, business_unit, duration_hours,
    provenance) in the given order."""
    stream.write("date,activity,business_unit,duration_hours,provenance\n")
    for a in activities:
        stream.write(
            f"{a.planned_date.isoformat()},{a.activity},{a.business_unit},"
            f"{a.duration_hours!r},{a.provenance.kind}:{a.provenance.source}\n"
        )
