import math
from datetime import date, datetime, timedelta

import numpy as np
import pytest

import workcast.forecast as forecast_pkg
from workcast.errors import MissingModelError, UndefinedMetricError
from workcast.forecast import TrainConfig, build_features, train
from workcast.forecast.gru import GruParameters
from workcast.forecast.training import ForecastModel, Normalization, TrainReport
from workcast.pipeline import (
    EvalConfig,
    ForecastRequest,
    aggregate_activities,
    eval_report_to_dict,
    evaluate,
    first_forecast_week,
    forecast_to_dict,
    mape,
    mape_detail,
    rmse,
    run_pipeline,
    running_orders,
    weekly_demand,
)

from conftest import make_log, trace_from


def zero_model(article_type="AT-X", K=4, input_dim=15) -> ForecastModel:
    """A model that always predicts exactly zero."""
    z = lambda *shape: np.zeros(shape)
    params = GruParameters(
        input_dim=input_dim, hidden_dim=2,
        W_z=z(2, input_dim), W_r=z(2, input_dim), W_h=z(2, input_dim),
        U_z=z(2, 2), U_r=z(2, 2), U_h=z(2, 2),
        b_z=z(2), b_r=z(2), b_h=z(2), w_out=z(2), b_out=0.0,
    )
    return ForecastModel(
        params=params,
        config=TrainConfig(window=K, epochs=0, hidden_dim=2),
        normalization=Normalization(mean=np.zeros(input_dim), scale=np.ones(input_dim)),
        article_type=article_type,
        train_report=TrainReport((), None, None, 0, 0, 0, (0, 0), (0, 0)),
    )


def history_log(weeks=8, article_type="AT-X"):
    traces = [
        trace_from(
            f"C{w}", (date(2021, 1, 4) + timedelta(days=7 * w)).isoformat(),
            ["a", "b", "c"], article_type=article_type, gap_days=3.0,
        )
        for w in range(weeks)
    ]
    return make_log(*traces)


class TestMetrics:
    def test_identical_series(self):
        assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0
        assert mape([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_direct_arithmetic(self):
        assert rmse([2.0], [1.0]) == 1.0
        assert mape([2.0], [1.0]) == 50.0

    def test_zero_actuals_skipped_and_reported(self):
        value, skipped = mape_detail([0.0, 2.0], [5.0, 2.0])
        assert value == 0.0
        assert skipped == 1

    def test_all_zero_actuals_undefined(self):
        with pytest.raises(UndefinedMetricError):
            mape([0.0, 0.0], [1.0, 2.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            rmse([1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            mape([], [])

    def test_constant_prediction_baseline_on_constant_series(self):
        actual = [4.0] * 10
        last_value = [4.0] * 10
        assert rmse(actual, last_value) == 0.0


class TestRunningOrders:
    def test_open_case_detection(self):
        log = history_log(weeks=4)
        # pick an as_of that falls inside some traces' spans
        as_of = date(2021, 1, 20)
        orders = running_orders(log, as_of)
        for order in orders:
            assert order.executed.events
            starts = [e.start for t in log.traces if t.case_id == order.case_id for e in t.events]
            assert min(starts) < datetime.combine(as_of, datetime.min.time())
            assert max(starts) >= datetime.combine(as_of, datetime.min.time())

    def test_no_open_cases_after_log_end(self):
        log = history_log(weeks=4)
        assert running_orders(log, date(2022, 6, 1)) == []


class TestRunPipeline:
    def test_zero_demand_no_running_orders_empty_forecast(self):
        log = history_log(weeks=8)
        request = ForecastRequest(as_of=date(2022, 6, 6), horizon_weeks=1, seed=1)
        result = run_pipeline(log, request, {"AT-X": zero_model()})
        assert result.order_quantities["AT-X"] == (0.0,)
        assert result.new_order_activities == ()
        assert result.running_completions == ()
        assert result.aggregate == {}

    def test_single_running_order_is_the_whole_aggregate(self):
        log = history_log(weeks=8)
        # inside the span of the week-5 trace (starts Feb 8, ends Feb 14)
        as_of = date(2021, 2, 10)
        request = ForecastRequest(as_of=as_of, horizon_weeks=1, seed=1)
        result = run_pipeline(log, request, {"AT-X": zero_model()})
        assert result.new_order_activities == ()
        assert len(result.running_completions) > 0
        rebinned = aggregate_activities(list(result.running_completions))
        assert {u: s.values for u, s in rebinned.items()} == {
            u: s.values for u, s in result.aggregate.items()
        }

    def test_missing_model_names_type(self):
        log = history_log(weeks=8)
        request = ForecastRequest(as_of=date(2022, 6, 6), horizon_weeks=1)
        with pytest.raises(MissingModelError) as excinfo:
            run_pipeline(log, request, {})
        assert "AT-X" in str(excinfo.value)

    def test_deterministic_and_additive(self, small_log, small_models):
        request = ForecastRequest(as_of=date(2021, 9, 1), horizon_weeks=3, seed=42)
        a = run_pipeline(small_log, request, small_models)
        b = run_pipeline(small_log, request, small_models)
        assert forecast_to_dict(a) == forecast_to_dict(b)

        union = [*a.new_order_activities, *a.running_completions]
        rebinned = aggregate_activities(union)
        assert set(rebinned) == set(a.aggregate)
        for unit in rebinned:
            assert rebinned[unit].values == a.aggregate[unit].values
            assert rebinned[unit].start_date == a.aggregate[unit].start_date

    def test_quantities_round_half_to_even(self, small_log, small_models):
        request = ForecastRequest(as_of=date(2021, 9, 1), horizon_weeks=2, seed=0)
        result = run_pipeline(small_log, request, small_models)
        for article_type, predicted in result.order_quantities.items():
            emitted = [
                a
                for a in result.new_order_activities
                if a.provenance.kind == "new_order"
            ]
            assert all(q >= 0.0 for q in predicted)
        assert emitted  # the fixture predicts nonzero demand

    def test_first_forecast_week(self):
        assert first_forecast_week(date(2021, 9, 6)) == date(2021, 9, 6)  # a Monday
        assert first_forecast_week(date(2021, 9, 8)) == date(2021, 9, 13)


class TestEvaluate:
    def test_perfect_oracle_model_scores_zero(self, monkeypatch):
        log = history_log(weeks=30)
        demand = weekly_demand(log, "AT-X")
        values = demand.series.values

        class OracleReport:
            pass

        def fake_train(series, features, config):
            model = zero_model(K=config.window)
            n_windows = len(series.series.values) - config.window
            n_test = max(1, int(n_windows * config.test_fraction))
            n_train = n_windows - n_test
            model.train_report = TrainReport(
                epoch_loss=(),
                test_rmse=0.0,
                test_mape=0.0,
                test_mape_skipped=0,
                n_train_windows=n_train,
                n_test_windows=n_test,
                train_window_range=(0, n_train),
                test_window_range=(n_train, n_windows),
            )
            return model

        def fake_horizon(model, window, horizon, exogenous_future=None):
            start = model.config.window + model.train_report.n_train_windows
            return list(values[start : start + horizon])

        monkeypatch.setattr(forecast_pkg, "train", fake_train)
        monkeypatch.setattr("workcast.pipeline.predict_horizon", fake_horizon)
        report = evaluate(log, EvalConfig(train=TrainConfig(window=4, epochs=0)))
        (entry,) = report.per_type
        assert entry.one_step_rmse == 0.0
        assert entry.one_step_mape == 0.0
        assert entry.horizon_mape == 0.0

    def test_short_series_skipped_not_fatal(self, small_log):
        config = EvalConfig(train=TrainConfig(window=500, epochs=1))
        report = evaluate(small_log, config)
        assert report.per_type == ()
        assert len(report.skipped_types) == len(small_log.article_types())

    def test_no_training_on_test_windows(self, small_log):
        config = EvalConfig(train=TrainConfig(window=6, epochs=1, hidden_dim=4))
        demand = weekly_demand(small_log, "AT-ALPHA")
        features = build_features(demand, small_log)
        model = train(demand, features, config.train)
        r = model.train_report
        assert r.train_window_range[1] == r.test_window_range[0]
        assert r.test_window_range[1] - r.train_window_range[0] == (
            len(demand.series.values) - config.train.window
        )

    def test_report_serialization_fields(self, small_log):
        config = EvalConfig(
            train=TrainConfig(window=6, epochs=2, hidden_dim=4),
            horizon_weeks=4,
            article_types=("AT-ALPHA",),
        )
        document = eval_report_to_dict(evaluate(small_log, config))
        (entry,) = document["per_type"]
        assert set(entry) == {
            "article_type",
            "one_step_rmse",
            "one_step_mape",
            "one_step_mape_skipped",
            "horizon_weeks",
            "horizon_mape",
            "horizon_mape_skipped",
        }
        assert document["macro_rmse"] == entry["one_step_rmse"]
