import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from workcast.errors import EmptyLogError, SchemaError
from workcast.eventlog import (
    build_process_graph,
    export_graph,
    log_to_rows,
    parse_log,
    validate_log,
    write_log_csv,
)

from conftest import make_log, trace_from

HEADER = (
    "case_id,activity,start,end,duration_hours,resource,business_unit,"
    "article_type,quantity,customer_id,country"
)


def csv_text(*rows: str) -> str:
    return "\n".join([HEADER, *rows]) + "\n"


class TestParseLog:
    def test_groups_rows_by_case(self):
        log = parse_log(
            csv_text(
                "C1,a,2021-01-01,,1.0,r,u,AT,1,,",
                "C1,b,2021-01-02,,1.0,r,u,AT,0,,",
                "C1,c,2021-01-03,,1.0,r,u,AT,0,,",
            )
        )
        assert len(log.traces) == 1
        assert len(log.traces[0].events) == 3
        assert log.traces[0].signature == ("a", "b", "c")

    def test_empty_source_is_an_error(self):
        with pytest.raises(EmptyLogError):
            parse_log(csv_text())

    def test_end_before_start_rejected_into_report(self):
        log = parse_log(
            csv_text(
                "C1,a,2021-01-05,2021-01-04,,r,u,AT,1,,",
                "C1,b,2021-01-02,,1.0,r,u,AT,0,,",
                "C2,a,2021-01-02,,1.0,r,u,AT,1,,",
            )
        )
        assert len(log.validation_report) == 1
        assert "precedes" in log.validation_report[0].reason
        assert sum(len(t.events) for t in log.traces) == 2

    def test_missing_mandatory_column_names_it(self):
        with pytest.raises(SchemaError) as excinfo:
            parse_log("case_id,start\nC1,2021-01-01\n")
        assert excinfo.value.column == "activity"

    def test_missing_both_end_and_duration_columns(self):
        header = HEADER.replace("start,end,duration_hours", "start")
        with pytest.raises(SchemaError):
            parse_log(header + "\nC1,a,2021-01-01,r,u,AT,1,,\n")

    def test_neither_end_nor_duration_in_row_rejected(self):
        log = parse_log(
            csv_text(
                "C1,a,2021-01-01,,,r,u,AT,1,,",
                "C2,a,2021-01-01,,2.0,r,u,AT,1,,",
            )
        )
        assert len(log.validation_report) == 1
        assert len(log.traces) == 1

    def test_schema_mapping_renames_columns(self):
        source = (
            "Case,Task,Begin,Hours,Who,Unit,Type,Qty\n"
            "C1,a,2021-01-01,2.0,r,u,AT,1\n"
        )
        schema = {
            "case_id": "Case",
            "activity": "Task",
            "start": "Begin",
            "duration_hours": "Hours",
            "resource": "Who",
            "business_unit": "Unit",
            "article_type": "Type",
            "quantity": "Qty",
        }
        log = parse_log(source, schema=schema)
        assert log.traces[0].events[0].duration_hours == 2.0

    def test_duration_recomputed_when_both_present(self):
        log = parse_log(csv_text("C1,a,2021-01-01T08:00,2021-01-01T12:00,99,r,u,AT,1,,"))
        assert log.traces[0].events[0].duration_hours == 4.0

    def test_same_timestamp_ties_sorted_by_activity(self):
        log = parse_log(
            csv_text(
                "C1,delta,2021-01-01,,1.0,r,u,AT,0,,",
                "C1,alpha,2021-01-01,,1.0,r,u,AT,1,,",
            )
        )
        assert log.traces[0].signature == ("alpha", "delta")


class TestRoundTrip:
    def test_serialize_parse_conserves_events(self, small_log):
        buffer = io.StringIO()
        write_log_csv(small_log, buffer)
        reparsed = parse_log(io.StringIO(buffer.getvalue()))
        assert not reparsed.validation_report
        assert sum(len(t.events) for t in reparsed.traces) == sum(
            len(t.events) for t in small_log.traces
        )
        assert log_to_rows(reparsed) == log_to_rows(small_log)

    @given(
        st.lists(
            st.permutations(
                [
                    "C1,b,2021-01-02,,1.0,r,u,AT,0,,",
                    "C1,a,2021-01-01,,1.0,r,u,AT,1,,",
                    "C1,c,2021-01-04,,1.0,r,u,AT,0,,",
                    "C2,a,2021-01-03,,1.0,r,u,AT,1,,",
                ]
            ),
            min_size=1,
            max_size=1,
        )
    )
    @settings(max_examples=24, deadline=None)
    def test_signatures_invariant_under_row_order(self, rows):
        log = parse_log(csv_text(*rows[0]))
        by_case = {t.case_id: t.signature for t in log.traces}
        assert by_case == {"C1": ("a", "b", "c"), "C2": ("a",)}


class TestValidateLog:
    def test_clean_two_year_log(self):
        traces = [
            trace_from(f"C{i}", f"202{1 + i % 2}-01-0{1 + i % 3}", ["a", "b"])
            for i in range(10)
        ]
        assert validate_log(make_log(*traces)) == []

    def test_short_period_flagged(self):
        traces = [trace_from(f"C{i}", "2021-01-01", ["a", "b"]) for i in range(5)]
        issues = validate_log(make_log(*traces))
        assert any(i.kind == "period_too_short" for i in issues)

    def test_singleton_trace_flagged_with_case_id(self):
        traces = [trace_from(f"C{i}", "2021-01-01", ["a", "b"]) for i in range(5)]
        traces.append(trace_from("LONER", "2022-06-01", ["a"]))
        issues = validate_log(make_log(*traces), min_traces_per_type=1)
        singleton = [i for i in issues if i.kind == "singleton_trace"]
        assert [i.subject for i in singleton] == ["LONER"]

    def test_sparse_article_type_flagged(self):
        traces = [trace_from(f"C{i}", "2021-01-01", ["a", "b"]) for i in range(5)]
        traces.append(trace_from("R1", "2022-06-01", ["a", "b"], article_type="AT-RARE"))
        issues = validate_log(make_log(*traces), min_traces_per_type=3)
        assert any(
            i.kind == "sparse_article_type" and "AT-RARE" in i.subject for i in issues
        )

    def test_zero_duration_activities_flagged(self):
        traces = [
            trace_from(f"C{i}", "2021-01-01", ["a", "b"], duration_hours=2.0)
            for i in range(5)
        ]
        traces.append(
            trace_from("Z1", "2022-06-01", ["ghost", "b"], duration_hours=0.0)
        )
        issues = validate_log(make_log(*traces), min_traces_per_type=1)
        assert any(i.kind == "missing_duration" and i.subject == "ghost" for i in issues)


class TestProcessGraph:
    def test_single_trace_full_retention(self):
        log = make_log(trace_from("C1", "2021-01-01", ["A", "B", "C"]))
        graph = build_process_graph(log, 1.0)
        assert graph.edges == {("A", "B"): 1, ("B", "C"): 1}
        assert graph.nodes == {"A": 1, "B": 1, "C": 1}

    def test_threshold_zero_keeps_nodes_only(self):
        log = make_log(trace_from("C1", "2021-01-01", ["A", "B", "C"]))
        graph = build_process_graph(log, 0.0)
        assert graph.edges == {}
        assert set(graph.nodes) == {"A", "B", "C"}

    def test_cumulative_mass_cutoff(self):
        traces = [
            trace_from(f"C{i}", "2021-01-01", ["A", "B"]) for i in range(9)
        ] + [trace_from("C9", "2021-01-01", ["A", "C"])]
        graph = build_process_graph(make_log(*traces), 0.9)
        assert ("A", "B") in graph.edges
        assert ("A", "C") not in graph.edges
        assert set(graph.nodes) == {"A", "B"}

    def test_full_threshold_retains_every_transition(self, small_log):
        graph = build_process_graph(small_log, 1.0)
        total_pairs = sum(len(t.signature) - 1 for t in small_log.traces)
        assert sum(graph.edges.values()) == total_pairs


class TestExportGraph:
    def test_empty_graph_is_valid_dot(self):
        log = make_log(trace_from("C1", "2021-01-01", ["A"]))
        dot = export_graph(build_process_graph(log, 1.0))
        assert dot.startswith("digraph process {")
        assert dot.rstrip().endswith("}")

    def test_edge_statement_present(self):
        log = make_log(trace_from("C1", "2021-01-01", ["A", "B"]))
        dot = export_graph(build_process_graph(log, 1.0))
        assert dot.count("->") == 1
        assert '"A" -> "B" [label="1"];' in dot

    def test_deterministic_output(self, small_log):
        graph = build_process_graph(small_log, 0.8)
        assert export_graph(graph) == export_graph(graph)
