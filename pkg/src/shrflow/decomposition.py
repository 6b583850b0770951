"""Singular value decomposition of the lagged matrix and SHR score extraction.

The leading left singular vector inherits the lag-block structure of the
data matrix: its block 0 entries quantify each channel's receiving
function, the deepest block its sending function, and the intermediate
blocks its hub (relay) function. The leading right singular vector is the
temporal mode of that dominant network.

Singular-vector signs are arbitrary, so a deterministic convention is
applied: the largest-magnitude entry of the left vector is made positive
(ties to the lowest index) and the right vector is flipped in tandem,
preserving their outer product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .embedding import LaggedDataMatrix
from .errors import NotConvergedError, NumericalFailureError, ShapeMismatchError

POWER_TOL = 1e-10
POWER_MAX_ITERS = 10_000


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD: ``left @ diag(singular_values) @ right.T`` rebuilds the input."""

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class ShrResult:
    """Leading singular triplet split into sender/hub/receiver blocks.

    Loadings are signed entries of the (sign-fixed) leading left singular
    vector; scores are their magnitudes, with the hub score aggregated as
    the per-channel maximum across intermediate lags. ``hub_loadings`` and
    ``hub_score`` are None when the order is 1, where the hub function is
    undefined. ``explained_fraction`` is None when only the leading
    singular value is known (power iteration).
    """

    gamma: np.ndarray
    receiver_loadings: np.ndarray
    sender_loadings: np.ndarray
    hub_loadings: np.ndarray | None
    receiver_score: np.ndarray
    sender_score: np.ndarray
    hub_score: np.ndarray | None
    temporal_mode: np.ndarray
    leading_singular_value: float
    explained_fraction: float | None
    degenerate_channels: tuple[int, ...]
    global_order: int
    n_channels: int


def _matrix_values(matrix) -> np.ndarray:
    if isinstance(matrix, LaggedDataMatrix):
        return matrix.values
    return np.asarray(matrix, dtype=np.float64)


def full_svd(matrix) -> SvdFactors:
    """Thin SVD with singular values in nonincreasing order.

    Accepts a LaggedDataMatrix or a plain 2-d array.
    """
    values = _matrix_values(matrix)
    try:
        left, sigma, right_t = np.linalg.svd(values, full_matrices=False)
    except np.linalg.LinAlgError as err:
        raise NumericalFailureError(f"SVD did not converge: {err}") from err
    return SvdFactors(left=left, singular_values=sigma, right=right_t.T)


def leading_triplet_power(
    matrix, tol: float = POWER_TOL, max_iters: int = POWER_MAX_ITERS
):
    """Leading singular triplet via power iteration on the data matrix.

    Alternates applications of the matrix and its transpose with
    renormalization until the left-vector direction changes by less than
    ``tol`` in sine distance between successive iterations.

    Returns ``(sigma, left_vector, right_vector)`` with unit-norm vectors.

    Raises
    ------
    NotConvergedError
        The iteration cap was reached first; typical when the two leading
        singular values are nearly tied. Callers may fall back to
        :func:`full_svd`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    values = _matrix_values(matrix)
    sigma, u, v, iters, delta, converged = _kernels.power_iteration(
        values, float(tol), int(max_iters)
    )
    if not converged:
        raise NotConvergedError(iterations=iters, last_delta=delta)
    return float(sigma), u, v


def extract_shr(
    gamma_raw: np.ndarray,
    rho_raw: np.ndarray,
    sigma_1: float,
    all_sigmas=None,
    *,
    global_order: int,
    n_channels: int,
    degenerate_channels=(),
) -> ShrResult:
    """Split a leading left singular vector into SHR blocks and scores.

    Applies the deterministic sign fix to ``gamma_raw`` and the same flip
    to ``rho_raw``, slices the receiver (block 0), hub (blocks 1..Q-1) and
    sender (block Q) loadings, and derives magnitude scores.
    """
    q, nv = int(global_order), int(n_channels)
    gamma = np.asarray(gamma_raw, dtype=np.float64)
    rho = np.asarray(rho_raw, dtype=np.float64)
    if gamma.ndim != 1 or gamma.shape[0] != (q + 1) * nv:
        raise ShapeMismatchError(
            f"left vector has length {gamma.shape}, expected {(q + 1) * nv}"
        )
    pivot = int(np.argmax(np.abs(gamma)))
    if gamma[pivot] < 0:
        gamma = -gamma
        rho = -rho
    else:
        gamma = gamma.copy()
        rho = rho.copy()
    receiver = gamma[:nv]
    sender = gamma[q * nv :]
    hub = gamma[nv : q * nv].reshape(q - 1, nv) if q >= 2 else None
    explained = None
    if all_sigmas is not None:
        sigmas = np.asarray(all_sigmas, dtype=np.float64)
        explained = float(sigma_1**2 / np.sum(sigmas**2))
    return ShrResult(
        gamma=gamma,
        receiver_loadings=receiver,
        sender_loadings=sender,
        hub_loadings=hub,
        receiver_score=np.abs(receiver),
        sender_score=np.abs(sender),
        hub_score=np.abs(hub).max(axis=0) if hub is not None else None,
        temporal_mode=rho,
        leading_singular_value=float(sigma_1),
        explained_fraction=explained,
        degenerate_channels=tuple(int(c) for c in sorted(degenerate_channels)),
        global_order=q,
        n_channels=nv,
    )
