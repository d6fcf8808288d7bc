"""Model fitting: chronological window split, z-score normalization
fitted on the training region only, full-batch Adam on an RMSE loss,
dropout on the final hidden state, and held-out one-step metrics."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ..errors import AlignmentError, DivergenceError, SeriesTooShortError
from ..workload import WorkloadSeries
from .features import FeatureRow, rows_to_matrix
from .gru import PARAM_NAMES, GruParameters, forward_batch, backward_batch, init_parameters


@dataclass(frozen=True)
class TrainConfig:
    window: int = 12
    epochs: int = 100
    hidden_dim: int = 64
    dropout_rate: float = 0.2
    learning_rate: float = 1e-3
    seed: int = 0
    test_fraction: float = 0.2
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


@dataclass(frozen=True)
class Normalization:
    """Per-feature z-score constants. Features with (near-)zero variance
    keep scale 1 so the transform stays invertible."""

    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        if np.any(self.scale <= 0):
            raise ValueError("normalization scales must be positive")

    @classmethod
    def fit(cls, rows_matrix: np.ndarray) -> "Normalization":
        mean = rows_matrix.mean(axis=0)
        scale = rows_matrix.std(axis=0)
        scale = np.where(scale > 1e-12, scale, 1.0)
        return cls(mean=mean, scale=scale)

    def transform(self, rows_matrix: np.ndarray) -> np.ndarray:
        return (rows_matrix - self.mean) / self.scale

    def normalize_target(self, value: float) -> float:
        # the target is the next value of the series, i.e. feature 0
        return (value - self.mean[0]) / self.scale[0]

    def denormalize_target(self, value: float) -> float:
        return value * self.scale[0] + self.mean[0]


@dataclass(frozen=True)
class TrainReport:
    """Loss trace plus the held-out one-step metrics, with the window
    index ranges that document the chronological split."""

    epoch_loss: tuple[float, ...]
    test_rmse: float | None
    test_mape: float | None
    test_mape_skipped: int
    n_train_windows: int
    n_test_windows: int
    train_window_range: tuple[int, int]
    test_window_range: tuple[int, int]


@dataclass
class ForecastModel:
    params: GruParameters
    config: TrainConfig
    normalization: Normalization
    article_type: str
    train_report: TrainReport


def forward(model: ForecastModel, window: Sequence[FeatureRow]) -> float:
    """Predict the next observation from the K most recent feature rows
    (denormalized; dropout is never applied at inference)."""
    if len(window) != model.config.window:
        raise ValueError(
            f"window has {len(window)} rows, model expects {model.config.window}"
        )
    X = model.normalization.transform(rows_to_matrix(window))[np.newaxis, :, :]
    y = forward_batch(model.params, X).y[0]
    return float(model.normalization.denormalize_target(y))


def _sliding_windows(X_rows: np.ndarray, K: int) -> tuple[np.ndarray, np.ndarray]:
    """All (K-window, next-value) pairs. Targets are feature 0 of the row
    following each window."""
    n = X_rows.shape[0]
    windows = np.stack([X_rows[i : i + K] for i in range(n - K)])
    targets = X_rows[K:, 0]
    return windows, targets


class _Adam:
    def __init__(self, config: TrainConfig):
        self.lr = config.learning_rate
        self.beta1 = config.adam_beta1
        self.beta2 = config.adam_beta2
        self.eps = config.adam_eps
        self.t = 0
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}

    def update(self, params: GruParameters, grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        for name in PARAM_NAMES:
            g = grads[name]
            if name not in self.m:
                self.m[name] = np.zeros_like(g)
                self.v[name] = np.zeros_like(g)
            self.m[name] = self.beta1 * self.m[name] + (1 - self.beta1) * g
            self.v[name] = self.beta2 * self.v[name] + (1 - self.beta2) * g * g
            m_hat = self.m[name] / (1 - self.beta1**self.t)
            v_hat = self.v[name] / (1 - self.beta2**self.t)
            step = self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
            if name == "b_out":
                params.b_out = float(params.b_out - step[0])
            else:
                getattr(params, name)[...] -= step


def train(
    series: WorkloadSeries,
    features: Sequence[FeatureRow],
    config: TrainConfig,
) -> ForecastModel:
    """Fit a model on a weekly series.

    Sliding (window -> next value) pairs are split chronologically: the
    last ``test_fraction`` of windows is held out and never touches the
    optimizer or the normalization constants. The loss is the RMSE over
    the training pairs, minimized with full-batch Adam; per-epoch losses
    and held-out RMSE/MAPE land in the train report.
    """
    if series.series.step != "week":
        raise AlignmentError("train expects a weekly series")
    n = len(series.series.values)
    K = config.window
    if n < K + 2:
        raise SeriesTooShortError(
            f"series has {n} observations, need at least {K + 2} for window {K}"
        )
    if len(features) != n:
        raise AlignmentError(f"{len(features)} feature rows for {n} observations")

    n_windows = n - K
    n_test = min(n_windows - 1, max(1, int(n_windows * config.test_fraction)))
    n_train = n_windows - n_test

    raw = rows_to_matrix(features)
    # rows visible to training: window inputs 0..K+n_train-2, targets K..K+n_train-1
    normalization = Normalization.fit(raw[: K + n_train])
    X_rows = normalization.transform(raw)
    windows, targets = _sliding_windows(X_rows, K)

    seq_init, seq_dropout = np.random.SeedSequence(config.seed).spawn(2)
    rng_init = np.random.Generator(np.random.PCG64(seq_init))
    rng_dropout = np.random.Generator(np.random.PCG64(seq_dropout))

    params = init_parameters(raw.shape[1], config.hidden_dim, rng_init)
    adam = _Adam(config)
    keep_prob = 1.0 - config.dropout_rate

    X_train, y_train = windows[:n_train], targets[:n_train]
    losses: list[float] = []
    for epoch in range(config.epochs):
        mask = None
        if config.dropout_rate > 0.0:
            mask = (
                rng_dropout.random((n_train, config.hidden_dim)) < keep_prob
            ).astype(float)
        cache = forward_batch(params, X_train, dropout_mask=mask, keep_prob=keep_prob)
        residuals = cache.y - y_train
        rmse = float(np.sqrt(np.mean(residuals**2)))
        if not np.isfinite(rmse):
            raise DivergenceError(epoch)
        losses.append(rmse)
        if rmse == 0.0:
            continue
        # d RMSE / d y_n = residual_n / (N * RMSE)
        dy = residuals / (n_train * rmse)
        grads = backward_batch(params, cache, dy, dropout_mask=mask, keep_prob=keep_prob)
        adam.update(params, grads)

    test_pred = forward_batch(params, windows[n_train:]).y
    test_pred = normalization.denormalize_target(test_pred)
    test_actual = normalization.denormalize_target(targets[n_train:])
    test_rmse = float(np.sqrt(np.mean((test_pred - test_actual) ** 2)))
    nonzero = test_actual != 0
    skipped = int(np.sum(~nonzero))
    if np.any(nonzero):
        test_mape = float(
            np.mean(np.abs(test_actual[nonzero] - test_pred[nonzero]) / np.abs(test_actual[nonzero]))
            * 100.0
        )
    else:
        test_mape = None

    report = TrainReport(
        epoch_loss=tuple(losses),
        test_rmse=test_rmse,
        test_mape=test_mape,
        test_mape_skipped=skipped,
        n_train_windows=n_train,
        n_test_windows=n_test,
        train_window_range=(0, n_train),
        test_window_range=(n_train, n_windows),
    )
    return ForecastModel(
        params=params,
        config=config,
        normalization=normalization,
        article_type=series.article_type,
        train_report=report,
    )
