"""Sender/hub/receiver localization for multichannel time series.

Fits per-channel autoregressive models, stacks lagged innovations into a
normalized data matrix, and reads directed-flow roles off the lag blocks
of its leading left singular vector. Works on stationary recordings and
on event-locked epoched recordings (per target time).
"""

from ._kernels import get_backend
from .ar import (
    ArModel,
    InnovationSeries,
    LocalArModel,
    compute_innovations,
    fit_ar_channel,
    fit_local_ar,
)
from .decomposition import (
    ShrResult,
    SvdFactors,
    extract_shr,
    full_svd,
    leading_triplet_power,
)
from .embedding import (
    LaggedDataMatrix,
    build_locked_matrix,
    build_stationary_matrix,
    normalize_rows,
)
from .errors import (
    AllRowsDegenerateError,
    InconsistentModelsError,
    InvalidCouplingError,
    LabelMismatchError,
    NonFiniteError,
    NotConvergedError,
    NumericalError,
    NumericalFailureError,
    OrderBelowGlobalError,
    PipelineError,
    ShapeMismatchError,
    ShrError,
    TooEarlyError,
    TooLateError,
    TooShortError,
    UnstableSpecError,
    ValidationError,
)
from .pipeline import (
    AnalysisConfig,
    LockedShrSweep,
    LockedStep,
    analyze_event_locked,
    analyze_stationary,
)
from .series import (
    EpochedSeries,
    MultichannelSeries,
    validate_epochs,
    validate_series,
)
from .synth import (
    Coupling,
    NetworkSpec,
    Role,
    expected_roles,
    generate,
    spec_from_dict,
    spec_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "ArModel",
    "Coupling",
    "EpochedSeries",
    "InnovationSeries",
    "LaggedDataMatrix",
    "LocalArModel",
    "LockedShrSweep",
    "LockedStep",
    "MultichannelSeries",
    "NetworkSpec",
    "Role",
    "ShrResult",
    "SvdFactors",
    "analyze_event_locked",
    "analyze_stationary",
    "build_locked_matrix",
    "build_stationary_matrix",
    "compute_innovations",
    "expected_roles",
    "extract_shr",
    "fit_ar_channel",
    "fit_local_ar",
    "full_svd",
    "generate",
    "get_backend",
    "leading_triplet_power",
    "normalize_rows",
    "spec_from_dict",
    "spec_to_dict",
    "validate_epochs",
    "validate_series",
    # errors
    "ShrError",
    "ValidationError",
    "NumericalError",
    "NonFiniteError",
    "TooShortError",
    "LabelMismatchError",
    "OrderBelowGlobalError",
    "TooEarlyError",
    "TooLateError",
    "InconsistentModelsError",
    "ShapeMismatchError",
    "InvalidCouplingError",
    "UnstableSpecError",
    "AllRowsDegenerateError",
    "NumericalFailureError",
    "NotConvergedError",
    "PipelineError",
]
