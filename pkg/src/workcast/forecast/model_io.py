"""Versioned JSON persistence for trained models.

Floats are serialized with full repr precision, so a save/load round
trip reproduces bit-identical predictions.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import ModelFormatError, ModelVersionError
from .gru import GruParameters
from .training import ForecastModel, Normalization, TrainConfig, TrainReport

MODEL_FORMAT_VERSION = 1


def save_model(model: ForecastModel) -> bytes:
    """Serialize a model to a self-contained JSON document (as bytes).
    Parameter matrices are flattened row-major."""
    p = model.params
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "article_type": model.article_type,
        "config": {
            "window": model.config.window,
            "epochs": model.config.epochs,
            "hidden_dim": model.config.hidden_dim,
            "dropout_rate": model.config.dropout_rate,
            "learning_rate": model.config.learning_rate,
            "seed": model.config.seed,
            "test_fraction": model.config.test_fraction,
            "adam_beta1": model.config.adam_beta1,
            "adam_beta2": model.config.adam_beta2,
            "adam_eps": model.config.adam_eps,
        },
        "normalization": {
            "mean": model.normalization.mean.tolist(),
            "scale": model.normalization.scale.tolist(),
        },
        "params": {
            "input_dim": p.input_dim,
            "hidden_dim": p.hidden_dim,
            **{
                name: getattr(p, name).ravel().tolist()
                for name in ("W_z", "W_r", "W_h", "U_z", "U_r", "U_h", "b_z", "b_r", "b_h", "w_out")
            },
            "b_out": p.b_out,
        },
        "train_report": {
            "epoch_loss": list(model.train_report.epoch_loss),
            "test_rmse": model.train_report.test_rmse,
            "test_mape": model.train_report.test_mape,
            "test_mape_skipped": model.train_report.test_mape_skipped,
            "n_train_windows": model.train_report.n_train_windows,
            "n_test_windows": model.train_report.n_test_windows,
            "train_window_range": list(model.train_report.train_window_range),
            "test_window_range": list(model.train_report.test_window_range),
        },
    }
    return json.dumps(doc, sort_keys=True).encode("utf-8")


def load_model(data: bytes) -> ForecastModel:
    """Inverse of :func:`save_model`.

    Raises :class:`ModelFormatError` on undecodable input and
    :class:`ModelVersionError` when the document was written by a newer
    format."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"cannot decode model artifact: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise ModelFormatError("model artifact lacks a format_version field")
    version = doc["format_version"]
    if version != MODEL_FORMAT_VERSION:
        raise ModelVersionError(found=version, supported=MODEL_FORMAT_VERSION)
    try:
        pd = doc["params"]
        d, h = int(pd["input_dim"]), int(pd["hidden_dim"])

        def arr(name: str, shape: tuple[int, ...]) -> np.ndarray:
            return np.array(pd[name], dtype=float).reshape(shape)

        params = GruParameters(
            input_dim=d,
            hidden_dim=h,
            W_z=arr("W_z", (h, d)),
            W_r=arr("W_r", (h, d)),
            W_h=arr("W_h", (h, d)),
            U_z=arr("U_z", (h, h)),
            U_r=arr("U_r", (h, h)),
            U_h=arr("U_h", (h, h)),
            b_z=arr("b_z", (h,)),
            b_r=arr("b_r", (h,)),
            b_h=arr("b_h", (h,)),
            w_out=arr("w_out", (h,)),
            b_out=float(pd["b_out"]),
        )
        config = TrainConfig(**doc["config"])
        normalization = Normalization(
            mean=np.array(doc["normalization"]["mean"], dtype=float),
            scale=np.array(doc["normalization"]["scale"], dtype=float),
        )
        tr = doc["train_report"]
        report = TrainReport(
            epoch_loss=tuple(tr["epoch_loss"]),
            test_rmse=tr["test_rmse"],
            test_mape=tr["test_mape"],
            test_mape_skipped=tr["test_mape_skipped"],
            n_train_windows=tr["n_train_windows"],
            n_test_windows=tr["n_test_windows"],
            train_window_range=tuple(tr["train_window_range"]),
            test_window_range=tuple(tr["test_window_range"]),
        )
        return ForecastModel(
            params=params,
            config=config,
            normalization=normalization,
            article_type=doc["article_type"],
            train_report=report,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model artifact: {exc}") from exc
