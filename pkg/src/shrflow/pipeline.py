"""End-to-end analyses: stationary, and an event-locked sweep over target times.

Both compose the same stages: AR innovations, lagged embedding, row
normalization, leading-triplet factorization, SHR extraction. Stage
failures are wrapped with the stage name. In the event-locked sweep each
target time is independent; a failure there becomes a gap entry instead of
aborting the whole sweep.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .ar import compute_innovations, fit_local_ar
from .decomposition import (
    POWER_MAX_ITERS,
    POWER_TOL,
    ShrResult,
    extract_shr,
    full_svd,
    leading_triplet_power,
)
from .embedding import build_locked_matrix, build_stationary_matrix, normalize_rows
from .errors import NotConvergedError, PipelineError, ShrError, ValidationError
from .series import EpochedSeries, MultichannelSeries, validate_epochs, validate_series

SVD_MODES = ("full", "power", "auto")

# Auto picks power iteration only when the matrix is this much taller than wide.
AUTO_POWER_ROW_FACTOR = 4


@dataclass(frozen=True)
class AnalysisConfig:
    """User-facing knobs for one analysis run.

    ``tau_range`` is a 1-based inclusive frame interval and applies to the
    event-locked mode only; the default is the full admissible range
    ``2*global_order + 1 .. n_frames``. ``per_channel_orders`` applies to
    the stationary mode only.
    """

    global_order: int
    per_channel_orders: tuple[int, ...] | None = None
    svd_mode: str = "auto"
    power_tol: float = POWER_TOL
    power_max_iters: int = POWER_MAX_ITERS
    tau_range: tuple[int, int] | None = None

    def __post_init__(self):
        if self.global_order < 1:
            raise ValidationError(
                f"global order must be at least 1, got {self.global_order}"
            )
        if self.svd_mode not in SVD_MODES:
            raise ValidationError(
                f"svd_mode must be one of {SVD_MODES}, got {self.svd_mode!r}"
            )
        if self.power_tol <= 0:
            raise ValidationError("power_tol must be positive")
        if self.per_channel_orders is not None:
            object.__setattr__(
                self, "per_channel_orders", tuple(int(q) for q in self.per_channel_orders)
            )
        if self.tau_range is not None:
            a, b = self.tau_range
            object.__setattr__(self, "tau_range", (int(a), int(b)))


@dataclass(frozen=True)
class LockedStep:
    """One target time of a sweep: either a result or a gap reason."""

    tau: int
    result: ShrResult | None
    gap: str | None


@dataclass(frozen=True)
class LockedShrSweep:
    steps: tuple[LockedStep, ...]
    config: AnalysisConfig


class _Stage:
    """Rewraps stage errors so failures name the stage that raised them."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, ShrError) and not isinstance(exc, PipelineError):
            raise PipelineError(self.name, exc) from exc
        return False


def _warn_if_hubless(config):
    if config.global_order == 1:
        warnings.warn(
            "hub scores are undefined at order 1; only sender and receiver "
            "scores will be produced",
            RuntimeWarning,
            stacklevel=3,
        )


def _leading_triplet(matrix, config):
    """(sigma, left, right, all_sigmas) per the configured SVD mode."""

    def by_power():
        sigma, u, v = leading_triplet_power(
            matrix, tol=config.power_tol, max_iters=config.power_max_iters
        )
        return sigma, u, v, None

    def by_full():
        factors = full_svd(matrix)
        return (
            float(factors.singular_values[0]),
            factors.left[:, 0],
            factors.right[:, 0],
            factors.singular_values,
        )

    if config.svd_mode == "full":
        return by_full()
    if config.svd_mode == "power":
        return by_power()
    rows, cols = matrix.values.shape
    if rows > AUTO_POWER_ROW_FACTOR * cols:
        try:
            return by_power()
        except NotConvergedError:
            return by_full()
    return by_full()


def _finish(matrix, config):
    """Normalize, factorize, and extract scores from a built lag matrix."""
    with _Stage("normalization"):
        normalized = normalize_rows(matrix)
    with _Stage("decomposition"):
        sigma, gamma_raw, rho_raw, all_sigmas = _leading_triplet(normalized, config)
    with _Stage("scores"):
        return extract_shr(
            gamma_raw,
            rho_raw,
            sigma,
            all_sigmas,
            global_order=normalized.global_order,
            n_channels=normalized.n_channels,
            degenerate_channels=normalized.degenerate_channels,
        )


def analyze_stationary(series: MultichannelSeries, config: AnalysisConfig) -> ShrResult:
    """Run the full stationary analysis and return the SHR result.

    Stages: validate, per-channel AR innovations, lag stacking, row
    normalization, leading-triplet factorization (full, power, or auto
    with fallback), score extraction.
    """
    q = config.global_order
    orders = config.per_channel_orders
    q_max = max(orders) if orders else q
    _warn_if_hubless(config)
    with _Stage("validation"):
        validate_series(series, min_length=2 * q_max + 2)
    with _Stage("innovations"):
        innovations = compute_innovations(series, q, orders)
    with _Stage("embedding"):
        matrix = build_stationary_matrix(innovations)
    return _finish(matrix, config)


def _analyze_at_tau(epochs, tau, config):
    with _Stage("local innovations"):
        models = fit_local_ar(epochs, tau, config.global_order)
    with _Stage("embedding"):
        matrix = build_locked_matrix(models)
    return _finish(matrix, config)


def analyze_event_locked(epochs: EpochedSeries, config: AnalysisConfig) -> LockedShrSweep:
    """Sweep the event-locked analysis over target times.

    Each target time gets its own local AR fit, lagged matrix,
    normalization, and decomposition; the sweep entries are ordered by
    target time. A target time that fails (for example, all rows
    degenerate there) yields a gap entry rather than aborting the sweep.
    """
    q = config.global_order
    _warn_if_hubless(config)
    with _Stage("validation"):
        if config.per_channel_orders is not None:
            raise ValidationError(
                "per_channel_orders applies to the stationary mode only"
            )
        validate_epochs(epochs, min_length=2 * q + 1)
        lo, hi = config.tau_range or (2 * q + 1, epochs.n_frames)
        if lo < 2 * q + 1:
            raise ValidationError(
                f"tau range must start at or after 2*order+1 = {2 * q + 1}, "
                f"got {lo}"
            )
        if hi > epochs.n_frames:
            raise ValidationError(
                f"tau range must end at or before the last frame "
                f"{epochs.n_frames}, got {hi}"
            )
        if lo > hi:
            raise ValidationError(f"empty tau range {lo}:{hi}")
    steps = []
    for tau in range(lo, hi + 1):
        try:
            result = _analyze_at_tau(epochs, tau, config)
            steps.append(LockedStep(tau=tau, result=result, gap=None))
        except ShrError as err:
            reason = err.cause if isinstance(err, PipelineError) else err
            steps.append(
                LockedStep(tau=tau, result=None, gap=f"{type(reason).__name__}: {reason}")
            )
    return LockedShrSweep(steps=tuple(steps), config=config)
