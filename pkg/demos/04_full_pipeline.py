#!/usr/bin/env python3
"""The five steps end to end: reconstruct, predict quantities, replay
new-order activities, complete running orders, aggregate.

Produces the per-business-unit weekly workload forecast and a stacked
chart of the two components.
"""

import json
from datetime import date
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from workcast import parse_log
from workcast.forecast import TrainConfig, build_features, train
from workcast.pipeline import (
    ForecastRequest,
    aggregate_activities,
    forecast_to_dict,
    run_pipeline,
    weekly_demand,
)

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

with open(HERE.parent / "data" / "synthetic_log.csv", newline="", encoding="utf-8") as handle:
    log = parse_log(handle)

config = TrainConfig(window=12, epochs=60, hidden_dim=32, seed=7)
models = {}
for article_type in log.article_types():
    demand = weekly_demand(log, article_type)
    models[article_type] = train(demand, build_features(demand, log), config)
    print(f"trained {article_type}: "
          f"test MAPE {models[article_type].train_report.test_mape:.1f}%")

request = ForecastRequest(as_of=date(2022, 11, 2), horizon_weeks=8, seed=7)
forecast = run_pipeline(log, request, models)
print(f"\nforecast from {forecast.first_week} for {request.horizon_weeks} weeks")
for article_type, quantities in forecast.order_quantities.items():
    rounded = [round(q, 1) for q in quantities]
    print(f"  {article_type}: {rounded}")
print(f"new-order activities: {len(forecast.new_order_activities)}, "
      f"running completions: {len(forecast.running_completions)}")

(OUT / "04_forecast.json").write_text(
    json.dumps(forecast_to_dict(forecast), sort_keys=True, indent=1), encoding="utf-8"
)

# the two components of the final workload, stacked per week
new_part = aggregate_activities(list(forecast.new_order_activities))
run_part = aggregate_activities(list(forecast.running_completions))


def weekly_total(parts):
    totals = {}
    for series in parts.values():
        for day, value in zip(series.dates(), series.values):
            totals[day] = totals.get(day, 0.0) + value
    return totals


new_totals = weekly_total(new_part)
run_totals = weekly_total(run_part)
weeks = sorted(set(new_totals) | set(run_totals))
new_values = [new_totals.get(w, 0.0) for w in weeks]
run_values = [run_totals.get(w, 0.0) for w in weeks]

fig, ax = plt.subplots(figsize=(10, 4))
ax.bar(weeks, run_values, width=6, label="running-order completions")
ax.bar(weeks, new_values, width=6, bottom=run_values, label="new-order activities")
ax.set_ylabel("hours / week")
ax.set_title("Predicted workload = new orders + running completions")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "04_workload_forecast.png", dpi=120)
print(f"wrote {OUT / '04_workload_forecast.png'} and {OUT / '04_forecast.json'}")
