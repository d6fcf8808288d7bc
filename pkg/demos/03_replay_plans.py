#!/usr/bin/env python3
"""From predicted quantities to concrete activity plans.

Builds the variant catalog, trims rare trace shapes with the 80%
frequency filter, samples a week of new-order activities, and completes
a running order by aligning its executed prefix against history.
"""

import io
from datetime import date
from pathlib import Path

from workcast import parse_log
from workcast.pipeline import running_orders
from workcast.replay import (
    build_variant_catalog,
    complete_running_order,
    frequency_filter,
    planned_activities_to_csv,
    sample_new_order_activities,
)

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

with open(HERE.parent / "data" / "synthetic_log.csv", newline="", encoding="utf-8") as handle:
    log = parse_log(handle)

catalog = build_variant_catalog(log)
article_type = "AT-ALPHA"
variants = catalog.variants(article_type)
print(f"{article_type}: {len(variants)} distinct trace shapes")
for v in variants[:5]:
    print(f"  {v.frequency:4d}x  {' > '.join(v.signature)}")

retained = frequency_filter(variants, 0.8)
total = sum(v.frequency for v in variants)
covered = sum(v.frequency for v in retained)
print(f"80% filter keeps {len(retained)}/{len(variants)} shapes "
      f"({covered}/{total} = {covered/total:.0%} of the mass)")

# replay 6 predicted orders for one future week
week = date(2023, 7, 3)
plan = sample_new_order_activities(catalog, article_type, 6, week, rng_seed=42)
print(f"\nsampled {len(plan)} activities for 6 predicted orders in week {week}:")
for a in plan[:8]:
    print(f"  {a.planned_date:%Y-%m-%d %H:%M}  {a.activity:22s} {a.business_unit:16s} "
          f"{a.duration_hours:5.2f}h")
print("  ...")

# complete whatever is still open mid-history
as_of = date(2022, 9, 7)
open_orders = running_orders(log, as_of)
print(f"\n{len(open_orders)} orders open at {as_of}")
for order in open_orders[:3]:
    completions = complete_running_order(order, catalog)
    done = " > ".join(order.executed.signature)
    todo = " > ".join(c.activity for c in completions) or "(nothing left)"
    print(f"  {order.case_id}: done [{done}] -> replay [{todo}]")

buffer = io.StringIO()
all_completions = [
    c for order in open_orders for c in complete_running_order(order, catalog)
]
planned_activities_to_csv([*plan, *all_completions], buffer)
(OUT / "03_planned_activities.csv").write_text(buffer.getvalue(), encoding="utf-8")
print(f"\nwrote {OUT / '03_planned_activities.csv'} "
      f"({len(plan)} new-order + {len(all_completions)} completion activities)")
