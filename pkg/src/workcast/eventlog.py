"""Event-log ingestion: parsing denormalized CSV activity logs into
case-grouped traces, log sanity checks, and frequency-filtered
directly-follows graphs.

The expected source format is a UTF-8, comma-delimited file with a header
row and the columns (case_id, activity, start, end, duration_hours,
resource, business_unit, article_type, quantity, customer_id, country).
Timestamps are ISO-8601 dates or date-times; an empty string means an
absent optional value. Rows that cannot be interpreted are collected into
a violation report instead of aborting the parse: real ERP extracts are
dirty and a single bad row must not lose the rest of the file.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from typing import IO, Iterable, Mapping

from .errors import EmptyLogError, SchemaError

CANONICAL_COLUMNS = (
    "case_id",
    "activity",
    "start",
    "end",
    "duration_hours",
    "resource",
    "business_unit",
    "article_type",
    "quantity",
    "customer_id",
    "country",
)

#: columns that must be present in the header (end/duration are special-cased:
#: at least one of the two must exist).
MANDATORY_COLUMNS = (
    "case_id",
    "activity",
    "start",
    "resource",
    "business_unit",
    "article_type",
    "quantity",
)


def _parse_timestamp(text: str) -> datetime:
    """Accept ISO-8601 dates ('2021-03-01') and date-times ('2021-03-01T08:30')."""
    value = text.strip()
    if len(value) == 10:
        return datetime.combine(date.fromisoformat(value), datetime.min.time())
    return datetime.fromisoformat(value)


@dataclass(frozen=True)
class EventRecord:
    """One logged activity.

    Exactly one of ``end`` / ``duration_hours`` must be supplied at
    construction; the other is derived (duration = end - start in hours,
    or end = start + duration). Both are always populated afterwards.
    """

    case_id: str
    activity: str
    start: datetime
    end: datetime
    duration_hours: float
    resource: str = ""
    business_unit: str = ""
    article_type: str = ""
    quantity: int = 0
    customer_id: str | None = None
    country: str | None = None

    def __post_init__(self):
        if not self.case_id:
            raise ValueError("case_id is empty")
        if not self.activity:
            raise ValueError("activity is empty")
        if self.end < self.start:
            raise ValueError(f"end {self.end} precedes start {self.start}")
        if self.duration_hours < 0:
            raise ValueError("duration is negative")
        if self.quantity < 0:
            raise ValueError("quantity is negative")

    @classmethod
    def create(
        cls,
        case_id: str,
        activity: str,
        start: datetime,
        end: datetime | None = None,
        duration_hours: float | None = None,
        **attrs,
    ) -> "EventRecord":
        """Build a record deriving whichever of end/duration is missing."""
        if end is None and duration_hours is None:
            raise ValueError("neither end nor duration given")
        if end is not None:
            duration_hours = (end - start).total_seconds() / 3600.0
        else:
            end = start + timedelta(hours=float(duration_hours))
        return cls(
            case_id=case_id,
            activity=activity,
            start=start,
            end=end,
            duration_hours=float(duration_hours),
            **attrs,
        )


@dataclass(frozen=True)
class Trace:
    """The ordered sequence of activities belonging to one case.

    Events are sorted by start timestamp; same-timestamp ties are broken
    lexicographically by activity label so that signatures do not depend
    on source row order.
    """

    case_id: str
    article_type: str
    events: tuple[EventRecord, ...]
    signature: tuple[str, ...]

    @classmethod
    def from_events(cls, events: Iterable[EventRecord]) -> "Trace":
        ordered = tuple(sorted(events, key=lambda e: (e.start, e.activity)))
        if not ordered:
            raise ValueError("a trace needs at least one event")
        return cls(
            case_id=ordered[0].case_id,
            article_type=ordered[0].article_type,
            events=ordered,
            signature=tuple(e.activity for e in ordered),
        )

    @property
    def start(self) -> datetime:
        return self.events[0].start

    @property
    def end(self) -> datetime:
        return max(e.end for e in self.events)

    @property
    def quantity(self) -> int:
        """Order positions carried by this case (sum of event quantities)."""
        return sum(e.quantity for e in self.events)


@dataclass(frozen=True)
class RowViolation:
    """A source row that was rejected during parsing."""

    line: int
    reason: str
    row: Mapping[str, str]


@dataclass(frozen=True)
class EventLog:
    traces: tuple[Trace, ...]
    period: tuple[datetime, datetime] | None
    validation_report: tuple[RowViolation, ...] = ()

    def __post_init__(self):
        seen = set()
        for trace in self.traces:
            if trace.case_id in seen:
                raise ValueError(f"duplicate case_id {trace.case_id!r}")
            seen.add(trace.case_id)

    @classmethod
    def from_traces(
        cls,
        traces: Iterable[Trace],
        violations: Iterable[RowViolation] = (),
    ) -> "EventLog":
        traces = tuple(sorted(traces, key=lambda t: (t.start, t.case_id)))
        period = None
        if traces:
            period = (
                min(t.start for t in traces),
                max(t.end for t in traces),
            )
        return cls(traces=traces, period=period, validation_report=tuple(violations))

    def article_types(self) -> list[str]:
        return sorted({t.article_type for t in self.traces})

    def traces_of_type(self, article_type: str) -> list[Trace]:
        return [t for t in self.traces if t.article_type == article_type]

    def events(self) -> Iterable[EventRecord]:
        for trace in self.traces:
            yield from trace.events


def parse_log(
    source: str | IO[str],
    schema: Mapping[str, str] | None = None,
) -> EventLog:
    """Parse a delimited activity log into an :class:`EventLog`.

    ``schema`` maps canonical field names to the source's column names;
    by default the canonical names themselves are expected. Rows that
    cannot be interpreted (bad timestamps, end before start, neither end
    nor duration, ...) are recorded in ``validation_report`` and skipped.

    Raises :class:`SchemaError` if a mandatory column is missing and
    :class:`EmptyLogError` if no event survives parsing.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    mapping = dict(schema) if schema else {c: c for c in CANONICAL_COLUMNS}

    reader = csv.DictReader(source)
    header = reader.fieldnames or []
    for column in MANDATORY_COLUMNS:
        if mapping.get(column, column) not in header:
            raise SchemaError(column)
    has_end = mapping.get("end", "end") in header
    has_duration = mapping.get("duration_hours", "duration_hours") in header
    if not has_end and not has_duration:
        raise SchemaError("end")

    def cell(row: Mapping[str, str], column: str) -> str:
        name = mapping.get(column, column)
        value = row.get(name)
        return value.strip() if value else ""

    events: dict[str, list[EventRecord]] = {}
    violations: list[RowViolation] = []
    n_rows = 0
    for line, row in enumerate(reader, start=2):
        n_rows += 1
        try:
            start = _parse_timestamp(cell(row, "start"))
            end_text = cell(row, "end")
            duration_text = cell(row, "duration_hours")
            end = _parse_timestamp(end_text) if end_text else None
            duration = float(duration_text) if duration_text else None
            quantity_text = cell(row, "quantity")
            record = EventRecord.create(
                case_id=cell(row, "case_id"),
                activity=cell(row, "activity"),
                start=start,
                end=end,
                duration_hours=duration,
                resource=cell(row, "resource"),
                business_unit=cell(row, "business_unit"),
                article_type=cell(row, "article_type"),
                quantity=int(quantity_text) if quantity_text else 0,
                customer_id=cell(row, "customer_id") or None,
                country=cell(row, "country") or None,
            )
        except (ValueError, TypeError) as exc:
            violations.append(RowViolation(line=line, reason=str(exc), row=dict(row)))
            continue
        events.setdefault(record.case_id, []).append(record)

    if n_rows == 0:
        raise EmptyLogError("source contains a header but no data rows")
    if not events:
        raise EmptyLogError(
            f"no parsable rows (all {len(violations)} data rows were rejected)"
        )
    traces = [Trace.from_events(batch) for batch in events.values()]
    return EventLog.from_traces(traces, violations)


def log_to_rows(log: EventLog) -> list[dict[str, str]]:
    """Serialize a log back to canonical CSV rows (one per retained event).

    Durations are written out verbatim and the end column is left empty, so
    a parse/serialize round trip reproduces the same records.
    """
    rows = []
    for trace in log.traces:
        for e in trace.events:
            rows.append(
                {
                    "case_id": e.case_id,
                    "activity": e.activity,
                    "start": e.start.isoformat(),
                    "end": "",
                    "duration_hours": repr(e.duration_hours),
                    "resource": e.resource,
                    "business_unit": e.business_unit,
                    "article_type": e.article_type,
                    "quantity": str(e.quantity),
                    "customer_id": e.customer_id or "",
                    "country": e.country or "",
                }
            )
    return rows


def write_log_csv(log: EventLog, stream: IO[str]) -> None:
    writer = csv.DictWriter(stream, fieldnames=list(CANONICAL_COLUMNS), lineterminator="\n")
    writer.writeheader()
    writer.writerows(log_to_rows(log))


@dataclass(frozen=True)
class LogIssue:
    """One finding of :func:`validate_log` (report-only, never fatal)."""

    kind: str
    subject: str
    message: str


def validate_log(log: EventLog, min_traces_per_type: int = 5) -> list[LogIssue]:
    """Sanity-check a log against the assumptions the forecasting
    pipeline relies on.

    Flags: a covered period shorter than a year, activities whose events
    carry no duration, single-event traces, and article types with fewer
    than ``min_traces_per_type`` traces.
    """
    issues: list[LogIssue] = []
    if log.period is not None:
        days = (log.period[1] - log.period[0]).days
        if days < 365:
            issues.append(
                LogIssue(
                    kind="period_too_short",
                    subject=f"{days}d",
                    message=f"log covers {days} days; at least one year is needed "
                    "for meaningful forecasts",
                )
            )

    missing: dict[str, int] = {}
    for event in log.events():
        if event.duration_hours == 0.0:
            missing[event.activity] = missing.get(event.activity, 0) + 1
    for activity in sorted(missing):
        issues.append(
            LogIssue(
                kind="missing_duration",
                subject=activity,
                message=f"activity {activity!r}: {missing[activity]} event(s) "
                "without a duration (zero workload contribution)",
            )
        )

    for trace in log.traces:
        if len(trace.events) == 1:
            issues.append(
                LogIssue(
                    kind="singleton_trace",
                    subject=trace.case_id,
                    message=f"case {trace.case_id!r} has a single event",
                )
            )

    counts: dict[str, int] = {}
    for trace in log.traces:
        counts[trace.article_type] = counts.get(trace.article_type, 0) + 1
    for article_type in sorted(counts):
        if counts[article_type] < min_traces_per_type:
            issues.append(
                LogIssue(
                    kind="sparse_article_type",
                    subject=article_type,
                    message=f"article type {article_type!r} has only "
                    f"{counts[article_type]} trace(s) "
                    f"(minimum {min_traces_per_type})",
                )
            )
    return issues


@dataclass(frozen=True)
class ProcessGraph:
    """Directly-follows graph with absolute node/edge frequencies."""

    nodes: Mapping[str, int]
    edges: Mapping[tuple[str, str], int]
    filter_threshold: float

    def __post_init__(self):
        for (src, dst), count in self.edges.items():
            if src not in self.nodes or dst not in self.nodes:
                raise ValueError(f"edge ({src!r}, {dst!r}) references unknown node")
            if count <= 0:
                raise ValueError("edge frequencies must be positive")


def build_process_graph(log: EventLog, threshold: float) -> ProcessGraph:
    """Count directly-follows transitions and keep the most frequent edges.

    Edges are ranked by frequency (descending, ties by label pair) and the
    minimal prefix whose cumulative share of all transitions reaches
    ``threshold`` is retained. Nodes left without any retained incident
    edge are dropped, except at threshold 0 where the unfiltered node set
    is returned with no edges.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be within [0, 1], got {threshold}")

    node_counts: dict[str, int] = {}
    edge_counts: dict[tuple[str, str], int] = {}
    for trace in log.traces:
        for activity in trace.signature:
            node_counts[activity] = node_counts.get(activity, 0) + 1
        for pair in zip(trace.signature, trace.signature[1:]):
            edge_counts[pair] = edge_counts.get(pair, 0) + 1

    if threshold == 0.0 or not edge_counts:
        edges: dict[tuple[str, str], int] = {}
        nodes = dict(node_counts) if threshold == 0.0 else {}
        return ProcessGraph(nodes=nodes, edges=edges, filter_threshold=threshold)

    total = sum(edge_counts.values())
    ranked = sorted(edge_counts.items(), key=lambda item: (-item[1], item[0]))
    retained: dict[tuple[str, str], int] = {}
    cumulative = 0
    for pair, count in ranked:
        retained[pair] = count
        cumulative += count
        if cumulative / total >= threshold:
            break
    nodes = {
        label: node_counts[label]
        for label in sorted({lbl for pair in retained for lbl in pair})
    }
    return ProcessGraph(nodes=nodes, edges=retained, filter_threshold=threshold)


def _dot_quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph(graph: ProcessGraph) -> str:
    """Render a process graph as DOT text with stable ordering."""
    lines = ["digraph process {", "  rankdir=LR;"]
    for label in sorted(graph.nodes):
        lines.append(
            f"  {_dot_quote(label)} "
            f"[label={_dot_quote(f'{label} ({graph.nodes[label]})')}];"
        )
    for src, dst in sorted(graph.edges):
        count = graph.edges[(src, dst)]
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)} [label=\"{count}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
