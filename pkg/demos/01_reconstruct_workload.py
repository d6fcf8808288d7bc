#!/usr/bin/env python3
"""Reconstructing the historical workload from an event log.

Walks the first stage of the toolkit: parse the bundled synthetic log,
sanity-check it, turn it into demand (order positions) and supply
(activity hours) series, smooth the demand, and export the frequency-
filtered process map as DOT. Charts land in demos/output/.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from workcast import (
    build_process_graph,
    demand_series,
    export_graph,
    parse_log,
    resample_weekly,
    supply_series,
    triangular_smooth,
    validate_log,
)

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

with open(HERE.parent / "data" / "synthetic_log.csv", newline="", encoding="utf-8") as handle:
    log = parse_log(handle)

print(f"parsed {len(log.traces)} traces covering {log.period[0].date()} .. {log.period[1].date()}")
print(f"article types: {log.article_types()}")

issues = validate_log(log)
print(f"validation issues: {len(issues)}")
for issue in issues:
    print(f"  - [{issue.kind}] {issue.message}")

# demand: daily order positions, then a 12-week triangular smooth, then weekly bins
article_type = "AT-ALPHA"
daily = demand_series(log, article_type, step="day")
smoothed = triangular_smooth(daily.series, 84)  # 12 weeks of days
weekly_raw = resample_weekly(daily.series)
weekly_smooth = resample_weekly(smoothed)

fig, axes = plt.subplots(2, 1, figsize=(11, 6), sharex=True)
axes[0].plot(weekly_raw.dates(), weekly_raw.values, lw=0.8, label="weekly orders")
axes[0].plot(weekly_smooth.dates(), weekly_smooth.values, lw=2, label="triangular smooth (12w)")
axes[0].set_ylabel("positions / week")
axes[0].legend()
axes[0].set_title(f"Demand, {article_type}")

# supply: hours per week, stacked by business unit
units = sorted({e.business_unit for t in log.traces_of_type(article_type) for e in t.events})
bottom = None
for unit in units:
    weekly = resample_weekly(supply_series(log, article_type, business_unit=unit).series)
    values = weekly.values
    axes[1].bar(weekly.dates(), values, width=6, bottom=bottom, label=unit)
    bottom = [b + v for b, v in zip(bottom, values)] if bottom else list(values)
axes[1].set_ylabel("hours / week")
axes[1].legend(fontsize=7, ncol=4)
axes[1].set_title("Supply by business unit")
fig.tight_layout()
fig.savefig(OUT / "01_workload.png", dpi=120)
print(f"wrote {OUT / '01_workload.png'}")

# the process map, trimmed to the most frequent transitions
graph = build_process_graph(log, threshold=0.8)
dot = export_graph(graph)
(OUT / "01_process_map.dot").write_text(dot, encoding="utf-8")
print(f"wrote {OUT / '01_process_map.dot'} "
      f"({len(graph.nodes)} activities, {len(graph.edges)} transitions at 80% mass)")
