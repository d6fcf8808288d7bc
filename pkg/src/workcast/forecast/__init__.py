"""Order-quantity forecasting: a GRU regressor over sliding weekly
windows with exogenous calendar/customer features, trained from scratch
with backpropagation through time, plus multi-step prediction by
re-injection."""

from .features import FEATURE_DIM, FeatureRow, build_features, month_onehot_for
from .gru import GruParameters, gradients, gru_step, init_parameters, squared_error
from .horizon import predict_horizon
from .model_io import MODEL_FORMAT_VERSION, load_model, save_model
from .training import (
    ForecastModel,
    Normalization,
    TrainConfig,
    TrainReport,
    forward,
    train,
)

__all__ = [
    "FEATURE_DIM",
    "FeatureRow",
    "ForecastModel",
    "GruParameters",
    "MODEL_FORMAT_VERSION",
    "Normalization",
    "TrainConfig",
    "TrainReport",
    "build_features",
    "forward",
    "gradients",
    "gru_step",
    "init_parameters",
    "load_model",
    "month_onehot_for",
    "predict_horizon",
    "save_model",
    "squared_error",
    "train",
]
