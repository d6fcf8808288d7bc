"""HTTP API over the library, consumed by the dashboard.

Read endpoints are side-effect free; forecasts are persisted under a
content-addressed id, so identical requests (including the seed) map to
identical persisted documents. Training runs as one background job per
article type; a second request for a type that is already training is
rejected with 409.
"""

from __future__ import annotations

import threading
from dataclasses import replace
from datetime import date
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import AppConfig
from .errors import (
    EmptySeriesError,
    MissingModelError,
    UnknownArticleTypeError,
    WorkcastError,
)
from .eventlog import EventLog, build_process_graph, export_graph
from .forecast import build_features, train
from .pipeline import (
    EvalConfig,
    ForecastRequest,
    eval_report_to_dict,
    evaluate,
    forecast_to_dict,
    planned_activity_to_dict,
    run_pipeline,
    series_to_dict,
    weekly_demand,
)
from .replay import build_variant_catalog, complete_running_order
from .pipeline import running_orders as find_running_orders
from .store import forecast_id, load_forecast, load_models, persist_forecast, save_models
from .workload import demand_series, supply_series


class ForecastBody(BaseModel):
    as_of: date
    horizon_weeks: int
    article_types: list[str] = []
    seed: int = 0


class TrainBody(BaseModel):
    article_types: list[str] = []
    epochs: int | None = None
    seed: int | None = None


class _TrainJobs:
    """One training job per article type at a time."""

    def __init__(self):
        self._lock = threading.Lock()
        self._status: dict[str, dict[str, Any]] = {}

    def start(self, article_type: str) -> None:
        with self._lock:
            current = self._status.get(article_type)
            if current and current["state"] == "running":
                raise HTTPException(
                    status_code=409,
                    detail=f"a training job for {article_type!r} is already running",
                )
            self._status[article_type] = {"state": "running", "detail": None}

    def finish(self, article_type: str, error: str | None = None) -> None:
        with self._lock:
            if error is None:
                self._status[article_type] = {"state": "done", "detail": None}
            else:
                self._status[article_type] = {"state": "failed", "detail": error}

    def status(self, article_type: str) -> dict[str, Any]:
        with self._lock:
            return dict(self._status.get(article_type, {"state": "idle", "detail": None}))


def create_app(config: AppConfig, log: EventLog) -> FastAPI:
    app = FastAPI(title="workcast", version="0.1.0")
    config.ensure_dirs()

    state: dict[str, Any] = {
        "models": load_models(config.model_dir),
        "catalog": build_variant_catalog(log),
        "eval_cache": {},
    }
    state_lock = threading.Lock()
    jobs = _TrainJobs()

    @app.exception_handler(RequestValidationError)
    async def malformed_payload(_: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(WorkcastError)
    async def domain_error(_: Request, exc: WorkcastError):
        status = 404 if isinstance(
            exc, (EmptySeriesError, MissingModelError, UnknownArticleTypeError)
        ) else 400
        return JSONResponse(
            status_code=status,
            content={"detail": str(exc), "error": type(exc).__name__},
        )

    @app.get("/api/article-types")
    def article_types():
        return {"article_types": log.article_types()}

    @app.get("/api/workload")
    def workload(
        article_type: str,
        kind: str = "demand",
        unit: str | None = None,
        step: str = "week",
    ):
        if kind not in ("demand", "supply"):
            raise HTTPException(status_code=400, detail=f"unknown kind {kind!r}")
        if step not in ("day", "week"):
            raise HTTPException(status_code=400, detail=f"unknown step {step!r}")
        if kind == "demand":
            series = demand_series(log, article_type, step=step)
        else:
            series = supply_series(log, article_type, business_unit=unit, step=step)
        return {
            "article_type": series.article_type,
            "kind": series.kind,
            "unit": series.unit,
            "business_unit": series.business_unit,
            "series": series_to_dict(series.series),
        }

    @app.get("/api/process-graph")
    def process_graph(threshold: float = 0.8):
        if not 0.0 <= threshold <= 1.0:
            raise HTTPException(
                status_code=400, detail="threshold must be within [0, 1]"
            )
        graph = build_process_graph(log, threshold)
        return {
            "threshold": threshold,
            "nodes": [
                {"activity": label, "frequency": graph.nodes[label]}
                for label in sorted(graph.nodes)
            ],
            "edges": [
                {"source": src, "target": dst, "frequency": graph.edges[(src, dst)]}
                for src, dst in sorted(graph.edges)
            ],
            "dot": export_graph(graph),
        }

    @app.post("/api/forecast")
    def post_forecast(body: ForecastBody):
        if body.horizon_weeks < 1:
            raise HTTPException(status_code=400, detail="horizon_weeks must be >= 1")
        request = ForecastRequest(
            as_of=body.as_of,
            horizon_weeks=body.horizon_weeks,
            article_types=tuple(body.article_types),
            seed=body.seed,
        )
        with state_lock:
            models = dict(state["models"])
            catalog = state["catalog"]
        forecast = run_pipeline(log, request, models, catalog=catalog)
        document = forecast_to_dict(forecast)
        fid = forecast_id(
            {
                "as_of": body.as_of.isoformat(),
                "horizon_weeks": body.horizon_weeks,
                "article_types": sorted(body.article_types),
                "seed": body.seed,
            }
        )
        persist_forecast(config.data_dir, fid, document)
        return {"id": fid, **document}

    @app.get("/api/forecast/{fid}/activities")
    def forecast_activities(fid: str):
        document = load_forecast(config.data_dir, fid)
        if document is None:
            raise HTTPException(status_code=404, detail=f"unknown forecast id {fid!r}")
        return {
            "id": fid,
            "activities": [
                *document["new_order_activities"],
                *document["running_completions"],
            ],
        }

    @app.get("/api/running-orders")
    def running_orders(as_of: date):
        with state_lock:
            catalog = state["catalog"]
        orders = find_running_orders(log, as_of)
        return {
            "as_of": as_of.isoformat(),
            "running_orders": [
                {
                    "case_id": order.case_id,
                    "article_type": order.article_type,
                    "executed_signature": list(order.executed.signature),
                    "completions": [
                        planned_activity_to_dict(a)
                        for a in complete_running_order(order, catalog)
                    ],
                }
                for order in orders
            ],
        }

    @app.get("/api/eval")
    def eval_report(
        horizon_weeks: int = 41,
        epochs: int | None = None,
        article_types: str | None = None,
    ):
        train_config = config.train if epochs is None else replace(config.train, epochs=epochs)
        types = tuple(article_types.split(",")) if article_types else ()
        key = (horizon_weeks, train_config, types)
        with state_lock:
            cached = state["eval_cache"].get(key)
        if cached is None:
            report = evaluate(
                log,
                EvalConfig(
                    train=train_config, horizon_weeks=horizon_weeks, article_types=types
                ),
            )
            cached = eval_report_to_dict(report)
            with state_lock:
                state["eval_cache"][key] = cached
        return cached

    @app.post("/api/train")
    def post_train(body: TrainBody):
        types = body.article_types or log.article_types()
        for article_type in types:
            if article_type not in log.article_types():
                raise HTTPException(
                    status_code=404, detail=f"unknown article type {article_type!r}"
                )
        train_config = config.train
        if body.epochs is not None:
            train_config = replace(train_config, epochs=body.epochs)
        if body.seed is not None:
            train_config = replace(train_config, seed=body.seed)
        for article_type in types:
            jobs.start(article_type)

        def run(article_type: str):
            try:
                demand = weekly_demand(log, article_type)
                features = build_features(demand, log)
                model = train(demand, features, train_config)
                with state_lock:
                    models = dict(state["models"])
                    models[article_type] = model
                    state["models"] = models
                save_models(config.model_dir, {article_type: model})
                jobs.finish(article_type)
            except Exception as exc:  # job must always record its outcome
                jobs.finish(article_type, error=str(exc))

        threads = []
        for article_type in types:
            thread = threading.Thread(target=run, args=(article_type,), daemon=True)
            thread.start()
            threads.append(thread)
        return {"started": sorted(types)}

    @app.get("/api/train/{article_type}")
    def train_status(article_type: str):
        return {"article_type": article_type, **jobs.status(article_type)}

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(config.ui_dir), html=True), name="ui")

    return app
