"""Kernel backend selection.

The hot kernels (lag stacking, row normalization, power iteration) exist
twice: a Cython extension (``_core``) and a pure numpy fallback
(``_python``). The compiled module is preferred when importable. Set
``SHRFLOW_KERNELS=python`` or ``SHRFLOW_KERNELS=compiled`` to force a
backend; forcing ``compiled`` raises if the extension is missing.

Both backends are deterministic for fixed inputs, but they are not
bit-identical to each other (different summation orders); see
``benchmarks/bench_kernels.py`` for timing and agreement checks.
"""

import os

_requested = os.environ.get("SHRFLOW_KERNELS", "auto").strip().lower()

if _requested in ("auto", "", "compiled"):
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "SHRFLOW_KERNELS=compiled but the shrflow._kernels._core "
                "extension is not built"
            )
        from . import _python as _impl

        BACKEND = "python"
elif _requested == "python":
    from . import _python as _impl

    BACKEND = "python"
else:
    raise ValueError(f"unknown SHRFLOW_KERNELS value: {_requested!r}")

lag_stack = _impl.lag_stack
normalize_rows = _impl.normalize_rows
power_iteration = _impl.power_iteration


def get_backend() -> str:
    """Name of the kernel backend selected at import: compiled or python."""
    return BACKEND
