"""Time-lagged innovation matrix construction and row normalization.

The data matrix stacks innovation rows in lag blocks: block b occupies rows
``b*n_channels .. (b+1)*n_channels - 1`` and holds the innovations delayed
by b frames, so block 0 is the present and the deepest block the furthest
past. After row normalization, ``Z @ Z.T / n_columns`` is exactly the
sample cross-correlation matrix of the stacked rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ar import InnovationSeries, LocalArModel
from .errors import AllRowsDegenerateError, InconsistentModelsError, TooShortError

# Rows with population std below this times max(1, |max entry|) are zeroed.
DEGENERACY_EPS = 1e-12


@dataclass(frozen=True)
class LaggedDataMatrix:
    """Lag-blocked data matrix, optionally row-normalized.

    ``row_degenerate`` is None before normalization; afterwards it flags
    the rows that had (numerically) zero variance and were zeroed.
    """

    values: np.ndarray
    global_order: int
    n_channels: int
    row_degenerate: np.ndarray | None = None

    def __post_init__(self):
        expected = (self.global_order + 1) * self.n_channels
        if self.values.shape[0] != expected:
            raise ValueError(
                f"matrix has {self.values.shape[0]} rows, expected {expected}"
            )

    @property
    def n_columns(self) -> int:
        return self.values.shape[1]

    @property
    def normalized(self) -> bool:
        return self.row_degenerate is not None

    def block(self, lag: int) -> np.ndarray:
        """Rows holding the innovations delayed by ``lag`` frames."""
        if not 0 <= lag <= self.global_order:
            raise IndexError(f"lag must be in 0..{self.global_order}")
        nv = self.n_channels
        return self.values[lag * nv : (lag + 1) * nv]

    @property
    def degenerate_channels(self) -> tuple[int, ...]:
        """Channels whose rows are degenerate in every lag block."""
        if self.row_degenerate is None:
            return ()
        per_block = self.row_degenerate.reshape(self.global_order + 1, self.n_channels)
        return tuple(int(i) for i in np.flatnonzero(per_block.all(axis=0)))


def build_stationary_matrix(innovations: InnovationSeries) -> LaggedDataMatrix:
    """Stack lagged copies of the innovation rows (unnormalized).

    Column m holds the innovations at frame ``max_order + global_order +
    1 + m`` (1-based) in block 0 and their q-frame pasts in the deeper
    blocks. With uniform per-channel orders this gives
    ``n_frames - 2*global_order`` columns.
    """
    q = innovations.global_order
    cols = innovations.n_columns
    if cols < q + 2:
        raise TooShortError(
            f"innovation series has {cols} columns; need at least {q + 2} "
            f"to build a lag-{q} matrix with 2+ columns"
        )
    values = _kernels.lag_stack(innovations.values, q)
    return LaggedDataMatrix(
        values=values, global_order=q, n_channels=innovations.n_channels
    )


def build_locked_matrix(local_models: list[LocalArModel]) -> LaggedDataMatrix:
    """Stack per-epoch local innovations into a lag-blocked matrix.

    Column j holds, for each channel, the innovations of epoch j at the
    target time (block 0) back to ``order`` frames before it (deepest
    block). The models must agree on target time, order, and epoch count,
    and be given in channel order 0..n-1.
    """
    if not local_models:
        raise InconsistentModelsError("no local models given")
    first = local_models[0]
    q, tau, ns = first.order, first.target_time, first.n_epochs
    for pos, model in enumerate(local_models):
        if model.channel != pos:
            raise InconsistentModelsError(
                f"model at position {pos} is for channel {model.channel}"
            )
        if (model.order, model.target_time, model.n_epochs) != (q, tau, ns):
            raise InconsistentModelsError(
                f"channel {model.channel} disagrees on (order, target time, epochs): "
                f"{(model.order, model.target_time, model.n_epochs)} != {(q, tau, ns)}"
            )
    nv = len(local_models)
    values = np.empty(((q + 1) * nv, ns), dtype=np.float64)
    for b in range(q + 1):
        for i, model in enumerate(local_models):
            # innovations row q - b is local time tau - b
            values[b * nv + i, :] = model.innovations[q - b, :]
    return LaggedDataMatrix(values=values, global_order=q, n_channels=nv)


def normalize_rows(matrix: LaggedDataMatrix) -> LaggedDataMatrix:
    """Center each row and scale it to unit population variance.

    Zero-variance rows are zeroed and flagged degenerate instead of
    erroring, so a dead channel cannot abort a whole analysis; the flags
    surface in results. Raises AllRowsDegenerateError when nothing remains.
    """
    if matrix.n_columns < 2:
        raise TooShortError("need at least 2 columns to normalize rows")
    values, degenerate = _kernels.normalize_rows(matrix.values, DEGENERACY_EPS)
    if degenerate.all():
        raise AllRowsDegenerateError(
            "every row of the lagged matrix has zero variance"
        )
    return LaggedDataMatrix(
        values=values,
        global_order=matrix.global_order,
        n_channels=matrix.n_channels,
        row_degenerate=degenerate,
    )
