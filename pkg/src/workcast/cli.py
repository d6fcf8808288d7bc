"""Command-line interface. Every subcommand wraps one library operation;
failures print a machine-readable JSON error to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from datetime import date
from pathlib import Path

from .config import AppConfig
from .errors import WorkcastError
from .eventlog import build_process_graph, export_graph, parse_log, validate_log, write_log_csv
from .forecast import TrainConfig, build_features, train
from .pipeline import (
    EvalConfig,
    ForecastRequest,
    eval_report_to_dict,
    evaluate,
    forecast_to_dict,
    run_pipeline,
    weekly_demand,
)
from .replay import planned_activities_to_csv
from .store import load_models, save_models
from .synth import bundled_spec, generate_synthetic_log
from .workload import demand_series, series_to_csv, supply_series


def _read_log(path: str, schema_path: str | None = None):
    schema = None
    if schema_path:
        schema = json.loads(Path(schema_path).read_text(encoding="utf-8"))
    with open(path, newline="", encoding="utf-8") as handle:
        return parse_log(handle, schema=schema)


def _train_config(args: argparse.Namespace) -> TrainConfig:
    return TrainConfig(
        window=args.window,
        epochs=args.epochs,
        hidden_dim=args.hidden_dim,
        dropout_rate=args.dropout,
        learning_rate=args.learning_rate,
        seed=args.seed,
        test_fraction=args.test_fraction,
    )


def _add_train_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", type=int, default=TrainConfig.window)
    parser.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    parser.add_argument("--hidden-dim", type=int, default=TrainConfig.hidden_dim)
    parser.add_argument("--dropout", type=float, default=TrainConfig.dropout_rate)
    parser.add_argument("--learning-rate", type=float, default=TrainConfig.learning_rate)
    parser.add_argument("--test-fraction", type=float, default=TrainConfig.test_fraction)
    parser.add_argument("--seed", type=int, default=0)


def cmd_synth(args: argparse.Namespace) -> int:
    spec = bundled_spec(seed=args.seed, weeks=args.weeks, start=date.fromisoformat(args.start))
    log = generate_synthetic_log(spec)
    with open(args.out, "w", newline="", encoding="utf-8") as handle:
        write_log_csv(log, handle)
    print(json.dumps({"traces": len(log.traces), "out": args.out}))
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.schema)
    with open(args.out, "w", newline="", encoding="utf-8") as handle:
        write_log_csv(log, handle)
    report = [
        {"line": v.line, "reason": v.reason} for v in log.validation_report
    ]
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")
    print(json.dumps({"traces": len(log.traces), "rejected_rows": len(report)}))
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.schema)
    issues = validate_log(log, min_traces_per_type=args.min_traces)
    document = [
        {"kind": i.kind, "subject": i.subject, "message": i.message} for i in issues
    ]
    print(json.dumps(document, indent=1))
    if args.strict and issues:
        return 1
    return 0


def cmd_reconstruct(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.schema)
    if args.kind == "demand":
        series = demand_series(log, args.article_type, step=args.step).series
    else:
        series = supply_series(
            log, args.article_type, business_unit=args.business_unit, step=args.step
        ).series
    with open(args.out, "w", encoding="utf-8") as handle:
        series_to_csv(series, handle)
    print(json.dumps({"points": len(series.values), "out": args.out}))
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.schema)
    graph = build_process_graph(log, args.threshold)
    Path(args.out).write_text(export_graph(graph), encoding="utf-8")
    print(json.dumps({"nodes": len(graph.nodes), "edges": len(graph.edges)}))
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.schema)
    config = _train_config(args)
    types = args.article_types.split(",") if args.article_types else log.article_types()
    models = {}
    summary = {}
    for article_type in sorted(types):
        demand = weekly_demand(
            log,
            article_type,
            triangular_window_days=args.smooth_triangular,
            exp_smooth_span=args.smooth_exp,
        )
        features = build_features(demand, log)
        model = train(demand, features, config)
        models[article_type] = model
        summary[article_type] = {
            "test_rmse": model.train_report.test_rmse,
            "test_mape": model.train_report.test_mape,
        }
    save_models(Path(args.model_dir), models)
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_forecast(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.schema)
    models = load_models(Path(args.model_dir))
    request = ForecastRequest(
        as_of=date.fromisoformat(args.as_of),
        horizon_weeks=args.horizon,
        article_types=tuple(args.article_types.split(",")) if args.article_types else (),
        seed=args.seed,
    )
    forecast = run_pipeline(log, request, models)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    document = forecast_to_dict(forecast)
    (out_dir / "forecast.json").write_text(
        json.dumps(document, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    buffer = io.StringIO()
    planned_activities_to_csv(
        [*forecast.new_order_activities, *forecast.running_completions], buffer
    )
    (out_dir / "activities.csv").write_text(buffer.getvalue(), encoding="utf-8")
    aggregate_lines = ["business_unit,week,hours"]
    for unit, series in sorted(forecast.aggregate.items()):
        for day, value in zip(series.dates(), series.values):
            aggregate_lines.append(f"{unit},{day.isoformat()},{value!r}")
    (out_dir / "aggregate.csv").write_text(
        "\n".join(aggregate_lines) + "\n", encoding="utf-8"
    )
    print(
        json.dumps(
            {
                "out_dir": str(out_dir),
                "new_order_activities": len(forecast.new_order_activities),
                "running_completions": len(forecast.running_completions),
            }
        )
    )
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    log = _read_log(args.log, args.schema)
    config = EvalConfig(
        train=_train_config(args),
        horizon_weeks=args.horizon,
        article_types=tuple(args.article_types.split(",")) if args.article_types else (),
        triangular_window_days=args.smooth_triangular,
        exp_smooth_span=args.smooth_exp,
    )
    report = evaluate(log, config)
    document = eval_report_to_dict(report)
    if args.out:
        Path(args.out).write_text(
            json.dumps(document, sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )
    print(json.dumps({"macro_rmse": report.macro_rmse, "macro_mape": report.macro_mape}))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    config = AppConfig.from_env()
    config.data_dir = Path(args.data_dir)
    config.model_dir = Path(args.model_dir)
    if args.bind:
        config.bind = args.bind
    config.ensure_dirs()
    log = _read_log(args.log, args.schema)
    app = create_app(config, log)
    host, _, port = config.bind.partition(":")
    uvicorn.run(app, host=host, port=int(port or 8000))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="workcast",
        description="Reconstruct and forecast workload from business process logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic event log CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=20220314)
    p.add_argument("--weeks", type=int, default=126)
    p.add_argument("--start", default="2021-01-04")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="parse a raw log into canonical CSV")
    p.add_argument("--log", required=True)
    p.add_argument("--schema", help="JSON file mapping canonical column names to source names")
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write rejected-row report JSON here")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="check a log against the forecasting assumptions")
    p.add_argument("--log", required=True)
    p.add_argument("--schema")
    p.add_argument("--min-traces", type=int, default=5)
    p.add_argument("--strict", action="store_true", help="exit 1 when issues are found")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reconstruct", help="export a demand or supply series as CSV")
    p.add_argument("--log", required=True)
    p.add_argument("--schema")
    p.add_argument("--article-type", required=True)
    p.add_argument("--kind", choices=("demand", "supply"), default="demand")
    p.add_argument("--business-unit")
    p.add_argument("--step", choices=("day", "week"), default="day")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("graph", help="export the directly-follows process graph as DOT")
    p.add_argument("--log", required=True)
    p.add_argument("--schema")
    p.add_argument("--threshold", type=float, default=0.8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("train", help="train one model per article type")
    p.add_argument("--log", required=True)
    p.add_argument("--schema")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--article-types", help="comma-separated subset (default: all)")
    p.add_argument("--smooth-triangular", type=int, default=None)
    p.add_argument("--smooth-exp", type=int, default=None)
    _add_train_options(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("forecast", help="run the full workload forecast")
    p.add_argument("--log", required=True)
    p.add_argument("--schema")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--as-of", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--article-types")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("evaluate", help="chronological train/test evaluation per type")
    p.add_argument("--log", required=True)
    p.add_argument("--schema")
    p.add_argument("--article-types")
    p.add_argument("--horizon", type=int, default=41)
    p.add_argument("--smooth-triangular", type=int, default=None)
    p.add_argument("--smooth-exp", type=int, default=None)
    p.add_argument("--out")
    _add_train_options(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("--log", required=True)
    p.add_argument("--schema")
    p.add_argument("--model-dir", default="workcast-models")
    p.add_argument("--data-dir", default="workcast-data")
    p.add_argument("--bind", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WorkcastError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
