"""File-based persistence: one JSON document per model or forecast,
forecasts content-addressed by request hash."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from urllib.parse import quote, unquote

from .forecast import ForecastModel, load_model, save_model


def model_path(model_dir: Path, article_type: str) -> Path:
    return model_dir / (quote(article_type, safe="") + ".model.json")


def save_models(model_dir: Path, models: dict[str, ForecastModel]) -> None:
    model_dir.mkdir(parents=True, exist_ok=True)
    for article_type, model in models.items():
        model_path(model_dir, article_type).write_bytes(save_model(model))


def load_models(model_dir: Path) -> dict[str, ForecastModel]:
    models = {}
    if model_dir.is_dir():
        for path in sorted(model_dir.glob("*.model.json")):
            article_type = unquote(path.name[: -len(".model.json")])
            models[article_type] = load_model(path.read_bytes())
    return models


def forecast_id(request_doc: dict) -> str:
    """Content address of a forecast request: identical requests map to
    the same id (and therefore the same persisted document)."""
    canonical = json.dumps(request_doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def forecast_path(data_dir: Path, forecast_id_: str) -> Path:
    return data_dir / "forecasts" / f"{forecast_id_}.json"


def persist_forecast(data_dir: Path, forecast_id_: str, document: dict) -> Path:
    path = forecast_path(data_dir, forecast_id_)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    return path


def load_forecast(data_dir: Path, forecast_id_: str) -> dict | None:
    path = forecast_path(data_dir, forecast_id_)
    if not path.is_file():
        return None
    return json.loads(path.read_text(encoding="utf-8"))
