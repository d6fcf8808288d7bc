import math
from datetime import date, datetime, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from workcast.errors import NoHistoryError, UnknownArticleTypeError
from workcast.replay import (
    RunningOrder,
    build_variant_catalog,
    complete_running_order,
    frequency_filter,
    levenshtein,
    sample_new_order_activities,
)

from conftest import make_log, trace_from


def lev_recursive(s, t, m=None, n=None):
    """Naive oracle: top-down evaluation of the distance recurrence
    (delete / insert / substitute, unit costs; base case max(m, n))."""
    if m is None:
        m, n = len(s), len(t)
    if min(m, n) == 0:
        return max(m, n)
    return min(
        lev_recursive(s, t, m - 1, n) + 1,
        lev_recursive(s, t, m, n - 1) + 1,
        lev_recursive(s, t, m - 1, n - 1) + (1 if s[m - 1] != t[n - 1] else 0),
    )


labels = st.sampled_from(["a", "b", "c", "d"])
sequences = st.lists(labels, max_size=8).map(tuple)


class TestLevenshtein:
    def test_identity(self):
        assert levenshtein(("a", "b", "c"), ("a", "b", "c")) == 0

    def test_empty_side_is_length_of_other(self):
        assert levenshtein(("x", "y", "z"), ()) == 3
        assert levenshtein((), ("x",)) == 1
        assert levenshtein((), ()) == 0

    def test_kitten_sitting(self):
        s, t = tuple("kitten"), tuple("sitting")
        assert levenshtein(s, t) == 3
        assert lev_recursive(s, t) == 3

    @given(st.lists(labels, max_size=5).map(tuple), st.lists(labels, max_size=5).map(tuple))
    @settings(max_examples=150, deadline=None)
    def test_agrees_with_naive_recursion(self, s, t):
        assert levenshtein(s, t) == lev_recursive(s, t)

    @given(sequences, sequences, sequences)
    @settings(max_examples=150, deadline=None)
    def test_is_a_metric(self, a, b, c):
        assert levenshtein(a, b) >= 0
        assert (levenshtein(a, b) == 0) == (a == b)
        assert levenshtein(a, b) == levenshtein(b, a)
        assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)

    @given(sequences, sequences)
    @settings(max_examples=100, deadline=None)
    def test_bounded_by_longer_length(self, a, b):
        assert levenshtein(a, b) <= max(len(a), len(b))


class TestVariantCatalog:
    def test_identical_signatures_merge(self):
        log = make_log(
            trace_from("C1", "2021-01-04", ["a", "b"]),
            trace_from("C2", "2021-02-01", ["a", "b"]),
        )
        catalog = build_variant_catalog(log)
        (variant,) = catalog.variants("AT-X")
        assert variant.frequency == 2
        assert variant.exemplars == ("C1", "C2")

    def test_single_trace_profile_equals_its_offsets(self):
        log = make_log(trace_from("C1", "2021-01-04", ["a", "b", "c"], gap_days=2.0))
        (variant,) = build_variant_catalog(log).variants("AT-X")
        assert [p.offset_days for p in variant.offset_profile] == [0.0, 2.0, 4.0]
        assert [p.duration_hours for p in variant.offset_profile] == [2.0, 2.0, 2.0]

    def test_offsets_are_averaged(self):
        log = make_log(
            trace_from("C1", "2021-01-04", ["a", "b"], gap_days=2.0),
            trace_from("C2", "2021-02-01", ["a", "b"], gap_days=4.0),
        )
        (variant,) = build_variant_catalog(log).variants("AT-X")
        assert [p.offset_days for p in variant.offset_profile] == [0.0, 3.0]

    def test_ordering_by_frequency_then_signature(self):
        traces = (
            [trace_from(f"X{i}", "2021-01-04", ["a", "b"]) for i in range(2)]
            + [trace_from(f"Y{i}", "2021-01-04", ["a", "c"]) for i in range(2)]
            + [trace_from("Z0", "2021-01-04", ["b"])]
        )
        catalog = build_variant_catalog(make_log(*traces))
        ranked = [(v.signature, v.frequency) for v in catalog.variants("AT-X")]
        assert ranked == [(("a", "b"), 2), (("a", "c"), 2), (("b",), 1)]

    def test_unknown_type(self):
        catalog = build_variant_catalog(make_log(trace_from("C1", "2021-01-04", ["a"])))
        with pytest.raises(UnknownArticleTypeError):
            catalog.variants("AT-NOPE")


def catalog_with_frequencies(*freqs, article_type="AT-X"):
    """One variant per frequency, distinct signatures of distinct lengths."""
    traces = []
    for v, freq in enumerate(freqs):
        signature = [f"s{v}-{i}" for i in range(v + 1)]
        for k in range(freq):
            traces.append(
                trace_from(f"T{v}-{k}", "2021-01-04", signature, article_type=article_type)
            )
    return build_variant_catalog(make_log(*traces))


class TestFrequencyFilter:
    def test_single_variant_retained(self):
        variants = catalog_with_frequencies(4).variants("AT-X")
        assert frequency_filter(variants, 0.8) == list(variants)

    def test_sixty_thirty_ten(self):
        variants = catalog_with_frequencies(60, 30, 10).variants("AT-X")
        retained = frequency_filter(variants, 0.8)
        assert [v.frequency for v in retained] == [60, 30]

    def test_full_mass_keeps_all(self):
        variants = catalog_with_frequencies(60, 30, 10).variants("AT-X")
        assert len(frequency_filter(variants, 1.0)) == 3

    def test_empty_list(self):
        assert frequency_filter([], 0.8) == []

    @given(
        st.lists(st.integers(1, 50), min_size=1, max_size=12),
        st.floats(0.05, 1.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_minimality_and_coverage(self, freqs, mass):
        variants = catalog_with_frequencies(*freqs).variants("AT-X")
        retained = frequency_filter(variants, mass)
        total = sum(v.frequency for v in variants)
        covered = sum(v.frequency for v in retained)
        assert covered / total >= mass
        if len(retained) > 1:
            assert (covered - retained[-1].frequency) / total < mass


class TestSampling:
    def test_zero_quantity(self):
        catalog = catalog_with_frequencies(3)
        assert sample_new_order_activities(catalog, "AT-X", 0, date(2022, 1, 3), 1) == []

    def test_single_variant_emitted_twice_with_identical_offsets(self):
        log = make_log(trace_from("C1", "2021-01-04", ["a", "b"], gap_days=1.5))
        catalog = build_variant_catalog(log)
        activities = sample_new_order_activities(catalog, "AT-X", 2, date(2022, 1, 3), 1)
        assert [a.activity for a in activities] == ["a", "b", "a", "b"]
        assert [a.offset_days for a in activities] == [0.0, 1.5, 0.0, 1.5]
        assert activities[0].planned_date == datetime(2022, 1, 3)
        assert activities[1].planned_date == datetime(2022, 1, 4, 12)

    def test_deterministic_given_seed(self):
        catalog = catalog_with_frequencies(5, 3, 2)
        a = sample_new_order_activities(catalog, "AT-X", 20, date(2022, 1, 3), 7)
        b = sample_new_order_activities(catalog, "AT-X", 20, date(2022, 1, 3), 7)
        assert a == b

    def test_unknown_type(self):
        catalog = catalog_with_frequencies(3)
        with pytest.raises(UnknownArticleTypeError):
            sample_new_order_activities(catalog, "AT-NOPE", 1, date(2022, 1, 3), 1)

    def test_duration_total_equals_profile_sum_exactly(self):
        log = make_log(
            trace_from("C1", "2021-01-04", ["a", "b", "c"], duration_hours=1.1),
            trace_from("C2", "2021-02-01", ["a", "b", "c"], duration_hours=2.7),
        )
        catalog = build_variant_catalog(log)
        (variant,) = catalog.variants("AT-X")
        profile_sum = math.fsum(p.duration_hours for p in variant.offset_profile)
        activities = sample_new_order_activities(catalog, "AT-X", 1, date(2022, 1, 3), 3)
        assert math.fsum(a.duration_hours for a in activities) == profile_sum


class TestCompleteRunningOrder:
    def make_catalog(self):
        traces = [
            trace_from(f"H{i}", "2021-01-04", ["a", "b", "c"], gap_days=2.0)
            for i in range(5)
        ] + [trace_from("H9", "2021-01-04", ["a", "x", "c"], gap_days=2.0)]
        return build_variant_catalog(make_log(*traces))

    def order(self, signature, as_of="2022-03-07"):
        executed = trace_from("RUN", "2022-02-21", signature)
        return RunningOrder("RUN", "AT-X", executed, date.fromisoformat(as_of))

    def test_full_match_leaves_nothing(self):
        assert complete_running_order(self.order(["a", "b", "c"]), self.make_catalog()) == []

    def test_exact_prefix_replays_remainder(self):
        completions = complete_running_order(self.order(["a"]), self.make_catalog())
        assert [c.activity for c in completions] == ["b", "c"]
        # offsets relative to the matched prefix's last activity (a at 0.0)
        assert [c.offset_days for c in completions] == [2.0, 4.0]
        assert completions[0].planned_date == datetime(2022, 3, 9)

    def test_distance_beats_frequency(self):
        # executed [a, x]: the rare variant [a, x, c] matches exactly at
        # p=2 (distance 0); the frequent [a, b, c] is distance 1 anywhere
        completions = complete_running_order(self.order(["a", "x"]), self.make_catalog())
        assert [c.activity for c in completions] == ["c"]
        assert completions[0].provenance.kind == "running_completion"
        assert completions[0].provenance.source == "RUN"

    def test_never_before_as_of(self):
        catalog = self.make_catalog()
        for signature in (["a"], ["a", "b"], ["x"], ["q", "q"]):
            for completion in complete_running_order(self.order(signature), catalog):
                assert completion.planned_date >= datetime(2022, 3, 7)

    def test_no_history(self):
        executed = trace_from("RUN", "2022-02-21", ["a"], article_type="AT-NOPE")
        order = RunningOrder("RUN", "AT-NOPE", executed, date(2022, 3, 7))
        with pytest.raises(NoHistoryError):
            complete_running_order(order, self.make_catalog())

    def test_brute_force_selection_agrees(self):
        # enumerate all (variant, prefix) pairs by hand for a mixed history
        traces = (
            [trace_from(f"A{i}", "2021-01-04", ["a", "b", "c", "d"]) for i in range(3)]
            + [trace_from(f"B{i}", "2021-01-04", ["a", "c", "d"]) for i in range(2)]
            + [trace_from("C0", "2021-01-04", ["b", "c"])]
        )
        catalog = build_variant_catalog(make_log(*traces))
        executed = ("a", "c")
        best = None
        for variant in catalog.variants("AT-X"):
            sig = variant.signature
            lengths = (
                range(len(executed), len(sig) + 1)
                if len(sig) >= len(executed)
                else [len(sig)]
            )
            for p in lengths:
                key = (
                    levenshtein(executed, sig[:p]),
                    -variant.frequency,
                    len(sig) - p,
                    sig,
                )
                if best is None or key < best[0]:
                    best = (key, sig, p)
        _, expected_sig, expected_p = best
        completions = complete_running_order(self.order(["a", "c"]), catalog)
        assert [c.activity for c in completions] == list(expected_sig[expected_p:])
