"""Per-channel autoregressive fits and innovation (residual) extraction.

Each channel gets its own univariate no-intercept AR model, estimated by
ordinary least squares on the conditional regression of a frame on its own
lagged values. The residuals of those fits, the innovations, are the
unpredictable part of each channel and the raw material for the lagged
embedding. A local variant pools regression equations across epochs around
a single target time.

Degenerate designs (constant or all-zero channels) are solved by
minimum-norm least squares with a relative singular-value cutoff of 1e-10,
so a dead channel yields zero coefficients and zero-variance innovations
rather than an error; the embedding's normalizer flags it downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import (
    NonFiniteError,
    OrderBelowGlobalError,
    TooEarlyError,
    TooLateError,
    TooShortError,
)
from .series import EpochedSeries, MultichannelSeries

_LSTSQ_RCOND = 1e-10


@dataclass(frozen=True)
class ArModel:
    """Fitted AR coefficients for one channel.

    ``coefficients[k-1]`` multiplies the value k frames in the past;
    ``innovation_variance`` is the mean squared residual of the fit.
    """

    channel: int
    order: int
    coefficients: np.ndarray
    innovation_variance: float


@dataclass(frozen=True)
class InnovationSeries:
    """Time-aligned innovation rows for all channels.

    Column c corresponds to original frame ``max_order + 1 + c`` (1-based):
    all rows start at the same frame even when channels were fitted with
    different orders, so the lagged embedding can stack a single time index
    across channels.
    """

    values: np.ndarray
    global_order: int
    max_order: int

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]

    @property
    def n_columns(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class LocalArModel:
    """AR model anchored at one target time, pooled across epochs.

    ``innovations`` has order+1 rows covering local times
    ``target_time - order .. target_time`` in ascending order, one column
    per epoch. ``target_time`` is a 1-based frame index.
    """

    channel: int
    target_time: int
    order: int
    coefficients: np.ndarray
    innovations: np.ndarray

    @property
    def n_epochs(self) -> int:
        return self.innovations.shape[1]


def _lagged_design(row, order):
    """Design matrix X with X[j] = (row[j+order-1], ..., row[j]).

    Row j regresses target row[order + j] on its ``order`` most recent
    past values, lag 1 first. Returns a strided view; do not mutate.
    """
    return sliding_window_view(row[:-1], order)[:, ::-1]


def _solve_lstsq(x, y):
    coef, _, _, _ = np.linalg.lstsq(x, y, rcond=_LSTSQ_RCOND)
    return coef


def fit_ar_channel(row: np.ndarray, order: int, channel: int = 0) -> ArModel:
    """Fit a no-intercept AR model of the given order to one channel.

    Minimizes the sum of squared residuals of the regression of frame t on
    frames t-1..t-order, over all t where the full lag window exists.

    Raises
    ------
    TooShortError
        Fewer than ``2*order + 2`` frames.
    NonFiniteError
        Any NaN or infinity in the input.
    """
    row = np.ascontiguousarray(row, dtype=np.float64)
    if row.ndim != 1:
        raise ValueError("fit_ar_channel expects a 1-d array")
    if order < 1:
        raise ValueError("order must be at least 1")
    n = row.shape[0]
    if n < 2 * order + 2:
        raise TooShortError(
            f"channel {channel}: {n} frames is too short for order {order} "
            f"(need at least {2 * order + 2})"
        )
    if not np.isfinite(row).all():
        raise NonFiniteError(channel=channel, frame=int(np.flatnonzero(~np.isfinite(row))[0]))
    x = _lagged_design(row, order)
    y = row[order:]
    coef = _solve_lstsq(x, y)
    resid = y - x @ coef
    return ArModel(
        channel=channel,
        order=order,
        coefficients=coef,
        innovation_variance=float(np.mean(resid * resid)),
    )


def ar_residuals(row: np.ndarray, coefficients: np.ndarray, start: int) -> np.ndarray:
    """Residuals row[t] - sum_k a_k row[t-k] for t = start..end (0-based).

    ``start`` must be at least the model order so every lag exists.
    """
    row = np.asarray(row, dtype=np.float64)
    order = len(coefficients)
    if start < order:
        raise ValueError("start must be >= order")
    x = _lagged_design(row, order)
    y = row[order:]
    offset = start - order
    return y[offset:] - x[offset:] @ np.asarray(coefficients, dtype=np.float64)


def compute_innovations(
    series: MultichannelSeries,
    global_order: int,
    per_channel_orders=None,
) -> InnovationSeries:
    """Fit every channel and collect time-aligned innovation rows.

    Channel i is fitted with ``per_channel_orders[i]`` (default: the global
    order). Each per-channel order must be at least the global order.
    Residuals are stored from frame ``max(orders) + 1`` (1-based) on, so all
    rows cover the same frames; the output has ``n_frames - max(orders)``
    columns.
    """
    if global_order < 1:
        raise ValueError("global_order must be at least 1")
    nv = series.n_channels
    if per_channel_orders is None:
        orders = [global_order] * nv
    else:
        orders = [int(q) for q in per_channel_orders]
        if len(orders) != nv:
            raise OrderBelowGlobalError(
                f"{len(orders)} per-channel orders for {nv} channels"
            )
        low = [i for i, q in enumerate(orders) if q < global_order]
        if low:
            raise OrderBelowGlobalError(
                f"per-channel order must be >= global order {global_order}; "
                f"violated by channels {low}"
            )
    q_max = max(orders)
    if series.n_frames < 2 * q_max + 2:
        raise TooShortError(
            f"{series.n_frames} frames is too short for order {q_max} "
            f"(need at least {2 * q_max + 2})"
        )
    out = np.empty((nv, series.n_frames - q_max), dtype=np.float64)
    for i in range(nv):
        model = fit_ar_channel(series.values[i], orders[i], channel=i)
        out[i] = ar_residuals(series.values[i], model.coefficients, q_max)
    return InnovationSeries(values=out, global_order=global_order, max_order=q_max)


def fit_local_ar(
    epochs: EpochedSeries, target_time: int, global_order: int
) -> list[LocalArModel]:
    """Fit one local AR model per channel around a target time.

    For each channel the regression equations for local times
    ``target_time - order .. target_time`` are pooled over all epochs
    (regressors reach back ``2*order`` frames), giving one least-squares
    system of ``(order+1) * n_epochs`` equations in ``order`` unknowns.
    Residuals at those local times populate the innovations.

    ``target_time`` is 1-based; the admissible range is
    ``2*order + 1 .. n_frames``.
    """
    q = int(global_order)
    if q < 1:
        raise ValueError("global_order must be at least 1")
    tau = int(target_time)
    if tau < 2 * q + 1:
        raise TooEarlyError(
            f"target time {tau} is before the earliest admissible frame {2 * q + 1}"
        )
    if tau > epochs.n_frames:
        raise TooLateError(
            f"target time {tau} is past the last frame {epochs.n_frames}"
        )
    t0 = tau - 1  # 0-based index of the target frame
    ns = epochs.n_epochs
    models = []
    for i in range(epochs.n_channels):
        u = epochs.values[i]  # (n_frames, n_epochs)
        # Equations grouped by local time (ascending), epochs inner.
        y = u[t0 - q : t0 + 1, :].reshape((q + 1) * ns)
        x = np.empty(((q + 1) * ns, q), dtype=np.float64)
        for r, t in enumerate(range(t0 - q, t0 + 1)):
            for k in range(1, q + 1):
                x[r * ns : (r + 1) * ns, k - 1] = u[t - k, :]
        if not np.isfinite(y).all() or not np.isfinite(x).all():
            raise NonFiniteError(channel=i, frame=tau)
        coef = _solve_lstsq(x, y)
        resid = (y - x @ coef).reshape(q + 1, ns)
        models.append(
            LocalArModel(
                channel=i,
                target_time=tau,
                order=q,
                coefficients=coef,
                innovations=resid,
            )
        )
    return models
