"""Gated recurrent unit with a scalar regression head, implemented on
plain numpy arrays.

Cell convention (pinned for reproducibility):

    z_t = sigmoid(W_z x_t + U_z h_{t-1} + b_z)
    r_t = sigmoid(W_r x_t + U_r h_{t-1} + b_r)
    g_t = tanh(W_h x_t + U_h (r_t * h_{t-1}) + b_h)
    h_t = (1 - z_t) * h_{t-1} + z_t * g_t

The head reads the last hidden state: y = w_out . h_K + b_out. Both the
batched forward pass and the analytic backward pass (backpropagation
through time) live here; training policy is in :mod:`.training`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .features import FeatureRow
    from .training import ForecastModel

PARAM_NAMES = ("W_z", "W_r", "W_h", "U_z", "U_r", "U_h", "b_z", "b_r", "b_h", "w_out", "b_out")


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # numerically symmetric form, finite for any finite input
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass
class GruParameters:
    """All trainable arrays. Gate weights W_* are (hidden, input), the
    recurrent weights U_* are (hidden, hidden)."""

    input_dim: int
    hidden_dim: int
    W_z: np.ndarray
    W_r: np.ndarray
    W_h: np.ndarray
    U_z: np.ndarray
    U_r: np.ndarray
    U_h: np.ndarray
    b_z: np.ndarray
    b_r: np.ndarray
    b_h: np.ndarray
    w_out: np.ndarray
    b_out: float

    def __post_init__(self):
        d, h = self.input_dim, self.hidden_dim
        shapes = {
            "W_z": (h, d), "W_r": (h, d), "W_h": (h, d),
            "U_z": (h, h), "U_r": (h, h), "U_h": (h, h),
            "b_z": (h,), "b_r": (h,), "b_h": (h,), "w_out": (h,),
        }
        for name, shape in shapes.items():
            array = getattr(self, name)
            if array.shape != shape:
                raise ValueError(f"{name} has shape {array.shape}, expected {shape}")
            if not np.all(np.isfinite(array)):
                raise ValueError(f"{name} contains non-finite entries")
        if not np.isfinite(self.b_out):
            raise ValueError("b_out is not finite")

    def items(self) -> list[tuple[str, np.ndarray]]:
        """Named parameter arrays in a fixed order (b_out as a 0-d array view)."""
        return [(name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
                for name in PARAM_NAMES]

    def copy(self) -> "GruParameters":
        return GruParameters(
            input_dim=self.input_dim,
            hidden_dim=self.hidden_dim,
            **{n: np.array(getattr(self, n)) for n in PARAM_NAMES[:-1]},
            b_out=float(self.b_out),
        )


def init_parameters(input_dim: int, hidden_dim: int, rng: np.random.Generator) -> GruParameters:
    """Uniform initialization in [-s, s] with s = 1/sqrt(hidden_dim)."""
    s = 1.0 / np.sqrt(hidden_dim)

    def u(*shape):
        return rng.uniform(-s, s, size=shape)

    return GruParameters(
        input_dim=input_dim,
        hidden_dim=hidden_dim,
        W_z=u(hidden_dim, input_dim),
        W_r=u(hidden_dim, input_dim),
        W_h=u(hidden_dim, input_dim),
        U_z=u(hidden_dim, hidden_dim),
        U_r=u(hidden_dim, hidden_dim),
        U_h=u(hidden_dim, hidden_dim),
        b_z=u(hidden_dim),
        b_r=u(hidden_dim),
        b_h=u(hidden_dim),
        w_out=u(hidden_dim),
        b_out=float(u()),
    )


def gru_step(params: GruParameters, x: np.ndarray, h_prev: np.ndarray) -> np.ndarray:
    """One cell update for a single input vector."""
    x = np.asarray(x, dtype=float)
    h_prev = np.asarray(h_prev, dtype=float)
    if x.shape != (params.input_dim,):
        raise ValueError(f"x has shape {x.shape}, expected ({params.input_dim},)")
    if h_prev.shape != (params.hidden_dim,):
        raise ValueError(f"h_prev has shape {h_prev.shape}, expected ({params.hidden_dim},)")
    z = _sigmoid(params.W_z @ x + params.U_z @ h_prev + params.b_z)
    r = _sigmoid(params.W_r @ x + params.U_r @ h_prev + params.b_r)
    g = np.tanh(params.W_h @ x + params.U_h @ (r * h_prev) + params.b_h)
    return (1.0 - z) * h_prev + z * g


@dataclass
class _ForwardCache:
    X: np.ndarray        # (N, K, D)
    H: np.ndarray        # (N, K+1, hidden), H[:, 0] = 0
    Z: np.ndarray        # (N, K, hidden)
    R: np.ndarray
    G: np.ndarray
    h_out: np.ndarray    # final hidden state after optional dropout, (N, hidden)
    y: np.ndarray        # (N,)


def forward_batch(
    params: GruParameters,
    X: np.ndarray,
    dropout_mask: np.ndarray | None = None,
    keep_prob: float = 1.0,
) -> _ForwardCache:
    """Run the cell over a batch of windows, zero initial state.

    ``dropout_mask`` (0/1, shape (N, hidden)) is applied to the final
    hidden state with inverted scaling; inference passes no mask.
    """
    N, K, D = X.shape
    H = np.zeros((N, K + 1, params.hidden_dim))
    Z = np.empty((N, K, params.hidden_dim))
    R = np.empty_like(Z)
    G = np.empty_like(Z)
    for t in range(K):
        x_t = X[:, t, :]
        h_prev = H[:, t, :]
        z = _sigmoid(x_t @ params.W_z.T + h_prev @ params.U_z.T + params.b_z)
        r = _sigmoid(x_t @ params.W_r.T + h_prev @ params.U_r.T + params.b_r)
        g = np.tanh(x_t @ params.W_h.T + (r * h_prev) @ params.U_h.T + params.b_h)
        H[:, t + 1, :] = (1.0 - z) * h_prev + z * g
        Z[:, t, :], R[:, t, :], G[:, t, :] = z, r, g
    h_out = H[:, K, :]
    if dropout_mask is not None:
        h_out = h_out * dropout_mask / keep_prob
    y = h_out @ params.w_out + params.b_out
    return _ForwardCache(X=X, H=H, Z=Z, R=R, G=G, h_out=h_out, y=y)


def backward_batch(
    params: GruParameters,
    cache: _ForwardCache,
    dy: np.ndarray,
    dropout_mask: np.ndarray | None = None,
    keep_prob: float = 1.0,
) -> dict[str, np.ndarray]:
    """Gradients of sum_n dy_n * y_n w.r.t. every parameter (i.e. ``dy``
    is dLoss/dy per window), accumulated over the batch."""
    N, K, D = cache.X.shape
    grads = {name: np.zeros_like(np.atleast_1d(getattr(params, name)), dtype=float)
             for name in PARAM_NAMES}
    grads["w_out"] = dy @ cache.h_out
    grads["b_out"] = np.array([dy.sum()])
    dh = np.outer(dy, params.w_out)
    if dropout_mask is not None:
        dh = dh * dropout_mask / keep_prob
    for t in range(K - 1, -1, -1):
        x_t = cache.X[:, t, :]
        h_prev = cache.H[:, t, :]
        z, r, g = cache.Z[:, t, :], cache.R[:, t, :], cache.G[:, t, :]

        dz = dh * (g - h_prev)
        dg = dh * z
        da_z = dz * z * (1.0 - z)
        da_g = dg * (1.0 - g * g)
        drh = da_g @ params.U_h          # gradient w.r.t. (r * h_prev)
        dr = drh * h_prev
        da_r = dr * r * (1.0 - r)

        grads["W_z"] += da_z.T @ x_t
        grads["W_r"] += da_r.T @ x_t
        grads["W_h"] += da_g.T @ x_t
        grads["U_z"] += da_z.T @ h_prev
        grads["U_r"] += da_r.T @ h_prev
        grads["U_h"] += da_g.T @ (r * h_prev)
        grads["b_z"] += da_z.sum(axis=0)
        grads["b_r"] += da_r.sum(axis=0)
        grads["b_h"] += da_g.sum(axis=0)

        dh = dh * (1.0 - z) + da_z @ params.U_z + da_r @ params.U_r + drh * r
    return grads


def _window_matrix(window) -> np.ndarray:
    """Accept a sequence of feature rows or a ready (K, input_dim) matrix."""
    if isinstance(window, np.ndarray):
        return window
    from .features import rows_to_matrix

    return rows_to_matrix(window)


def squared_error(model: "ForecastModel", window, target: float) -> float:
    """Scalar loss (prediction - target)^2 in normalized space for one
    window; the quantity :func:`gradients` differentiates."""
    X = model.normalization.transform(_window_matrix(window))[np.newaxis, :, :]
    cache = forward_batch(model.params, X)
    residual = cache.y[0] - model.normalization.normalize_target(target)
    return float(residual * residual)


def gradients(model: "ForecastModel", window, target: float) -> dict[str, np.ndarray]:
    """Analytic BPTT gradients of :func:`squared_error` w.r.t. every
    parameter, keyed by parameter name."""
    X = model.normalization.transform(_window_matrix(window))[np.newaxis, :, :]
    cache = forward_batch(model.params, X)
    residual = cache.y[0] - model.normalization.normalize_target(target)
    return backward_batch(model.params, cache, np.array([2.0 * residual]))
