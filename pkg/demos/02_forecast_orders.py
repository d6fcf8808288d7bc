#!/usr/bin/env python3
"""Forecasting customer-order quantities with the recurrent regressor.

Trains one model on the bundled log's busiest article type, shows the
one-step fit on the chronological test split, then re-injects
predictions to walk a multi-week horizon.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from workcast import parse_log
from workcast.forecast import TrainConfig, build_features, forward, predict_horizon, train
from workcast.pipeline import weekly_demand

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

with open(HERE.parent / "data" / "synthetic_log.csv", newline="", encoding="utf-8") as handle:
    log = parse_log(handle)

article_type = "AT-ALPHA"
demand = weekly_demand(log, article_type)
features = build_features(demand, log)
values = np.asarray(demand.series.values)
weeks = demand.series.dates()

config = TrainConfig(window=12, epochs=100, hidden_dim=64, dropout_rate=0.2, seed=7)
model = train(demand, features, config)
r = model.train_report
print(f"{article_type}: trained {config.epochs} epochs, "
      f"one-step test RMSE {r.test_rmse:.3f}, MAPE {r.test_mape:.1f}%")

K, n_train = config.window, r.n_train_windows
one_step = [forward(model, features[i : i + K]) for i in range(n_train, len(values) - K)]
horizon = min(41, r.n_test_windows)
reinjected = predict_horizon(model, features[n_train : n_train + K], horizon)

fig, ax = plt.subplots(figsize=(11, 4))
ax.plot(weeks, values, lw=0.9, color="gray", label="actual")
test_weeks = weeks[K + n_train :]
ax.plot(test_weeks, one_step, "o-", ms=3, lw=0.8, label="one-step predictions")
ax.plot(test_weeks[:horizon], reinjected, "r.--", lw=0.8,
        label=f"re-injected {horizon}-week horizon")
ax.axvline(weeks[K + n_train], color="k", lw=0.5)
ax.set_ylabel("positions / week")
ax.set_title(f"Order forecast, {article_type} (loss trace final {r.epoch_loss[-1]:.3f})")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "02_forecast.png", dpi=120)
print(f"wrote {OUT / '02_forecast.png'}")

# error growth with the forecast distance
from workcast.pipeline import mape_detail

actuals = values[K + n_train : K + n_train + horizon]
h_mape, _ = mape_detail(actuals, reinjected)
print(f"one-step MAPE {r.test_mape:.1f}% vs {horizon}-week re-injected MAPE {h_mape:.1f}% "
      "(errors compound through the window)")
