"""Multi-step forecasting by re-injection: each prediction becomes the
newest observation of the next window."""

from __future__ import annotations

from typing import Sequence

from .features import FeatureRow, carry_forward_row, month_onehot_for
from .training import ForecastModel, forward


def predict_horizon(
    model: ForecastModel,
    window: Sequence[FeatureRow],
    horizon: int,
    exogenous_future: Sequence[FeatureRow] | None = None,
) -> list[float]:
    """Predict ``horizon`` weekly values past the end of ``window``.

    Each step's prediction (clamped at zero, demand is a count) is fed
    back as the final observation of the translated window. Future
    exogenous counts come from ``exogenous_future`` rows when supplied,
    otherwise the last observed counts are carried forward; the month
    indicator always advances with the calendar.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if exogenous_future is not None and len(exogenous_future) < horizon:
        raise ValueError(
            f"exogenous_future has {len(exogenous_future)} rows, horizon is {horizon}"
        )
    current = list(window)
    predictions: list[float] = []
    for step in range(horizon):
        value = max(0.0, forward(model, current))
        predictions.append(value)
        if exogenous_future is not None:
            given = exogenous_future[step]
            next_row = FeatureRow(
                week_start=given.week_start,
                value=value,
                month_onehot=month_onehot_for(given.week_start),
                unique_customers=given.unique_customers,
                unique_countries=given.unique_countries,
            )
        else:
            next_row = carry_forward_row(current[-1], value)
        current = current[1:] + [next_row]
    return predictions
