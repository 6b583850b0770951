"""Containers and validation for stationary and epoched multichannel recordings.

Channels are indexed 0..n_channels-1 everywhere; labels are presentation
metadata only. Frame indices in public interfaces are 1-based (frame 1 is
``values[:, 0]``), matching how target times are specified elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LabelMismatchError, NonFiniteError, TooShortError


def _as_readonly(values, ndim):
    arr = np.array(values, dtype=np.float64, order="C")
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got {arr.ndim}-d")
    arr.setflags(write=False)
    return arr


def _as_labels(labels):
    return None if labels is None else tuple(str(x) for x in labels)


@dataclass(frozen=True)
class MultichannelSeries:
    """A stationary recording: ``values[channel, frame]``.

    Construction only coerces types; invariants (finiteness, label
    consistency, minimum length) are checked by :func:`validate_series`.
    """

    values: np.ndarray
    channel_labels: tuple[str, ...] | None = None
    sample_interval: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly(self.values, 2))
        object.__setattr__(self, "channel_labels", _as_labels(self.channel_labels))

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]

    @property
    def n_frames(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class EpochedSeries:
    """An event-locked recording: ``values[channel, frame, epoch]``.

    All epochs share the same channel count and frame count by construction;
    ragged inputs must be rejected upstream, never truncated.
    """

    values: np.ndarray
    channel_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly(self.values, 3))
        object.__setattr__(self, "channel_labels", _as_labels(self.channel_labels))

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]

    @property
    def n_frames(self) -> int:
        return self.values.shape[1]

    @property
    def n_epochs(self) -> int:
        return self.values.shape[2]


def _first_nonfinite(values):
    """Index of the first non-finite entry in C order, or None."""
    finite = np.isfinite(values)
    if finite.all():
        return None
    flat = int(np.flatnonzero(~finite)[0])
    return np.unravel_index(flat, values.shape)


def _validate_labels(labels, n_channels):
    if labels is None:
        return
    if len(labels) != n_channels:
        raise LabelMismatchError(
            f"{len(labels)} labels for {n_channels} channels"
        )
    if len(set(labels)) != len(labels):
        raise LabelMismatchError("channel labels must be distinct")


def validate_series(series: MultichannelSeries, min_length: int) -> MultichannelSeries:
    """Check all invariants of a stationary series and return it unchanged.

    ``min_length`` is supplied by callers as ``2*Q + 2`` so that downstream
    regression systems and lagged matrices are nonempty.

    Raises
    ------
    TooShortError, NonFiniteError, LabelMismatchError
    """
    if series.n_channels < 1 or series.n_frames < 1:
        raise TooShortError("series must have at least one channel and one frame")
    if series.n_frames < min_length:
        raise TooShortError(
            f"series has {series.n_frames} frames, need at least {min_length}"
        )
    bad = _first_nonfinite(series.values)
    if bad is not None:
        raise NonFiniteError(channel=bad[0], frame=bad[1])
    _validate_labels(series.channel_labels, series.n_channels)
    return series


def validate_epochs(epochs: EpochedSeries, min_length: int) -> EpochedSeries:
    """Check all invariants of an epoched series and return it unchanged.

    ``min_length`` applies per epoch; callers pass ``2*Q + 1`` so that the
    admissible target-time range is nonempty.
    """
    if epochs.n_channels < 1 or epochs.n_frames < 1:
        raise TooShortError("epochs must have at least one channel and one frame")
    if epochs.n_epochs < 2:
        raise TooShortError(f"need at least 2 epochs, got {epochs.n_epochs}")
    if epochs.n_frames < min_length:
        raise TooShortError(
            f"epochs have {epochs.n_frames} frames, need at least {min_length}"
        )
    bad = _first_nonfinite(epochs.values)
    if bad is not None:
        raise NonFiniteError(channel=bad[0], frame=bad[1], epoch=bad[2])
    _validate_labels(epochs.channel_labels, epochs.n_channels)
    return epochs
