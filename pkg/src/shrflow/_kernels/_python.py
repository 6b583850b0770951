"""Pure numpy implementations of the hot kernels.

Same contracts as the compiled module ``_core``; used as the fallback when
the extension is unavailable and as the reference in backend-parity tests.
"""

import numpy as np

BACKEND_NAME = "python"


def lag_stack(values, q):
    """Stack ``q+1`` lagged copies of the rows of ``values``.

    ``values`` is (n_channels, n_cols); the output is ((q+1)*n_channels,
    n_cols - q). Block b (rows b*n_channels..(b+1)*n_channels-1) holds the
    rows delayed by b columns, so block 0 is the present and block q the
    deepest past.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    nv, cols = values.shape
    m = cols - q
    out = np.empty(((q + 1) * nv, m), dtype=np.float64)
    for b in range(q + 1):
        out[b * nv : (b + 1) * nv, :] = values[:, q - b : q - b + m]
    return out


def normalize_rows(values, eps):
    """Center each row and scale it to unit population variance.

    Rows whose population standard deviation falls below
    ``eps * max(1, max |entry|)`` are zeroed instead. Returns the new array
    plus a boolean flag per row marking the zeroed (degenerate) ones.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    means = values.mean(axis=1)
    centered = values - means[:, None]
    sd = np.sqrt(np.mean(centered * centered, axis=1))
    scale = np.maximum(1.0, np.abs(values).max(axis=1, initial=0.0))
    degenerate = sd < eps * scale
    out = np.zeros_like(values)
    keep = ~degenerate
    out[keep] = centered[keep] / sd[keep, None]
    return out, degenerate


def power_iteration(z, tol, max_iters):
    """Leading singular triplet of ``z`` by alternating matrix products.

    Starts from the row of ``z`` with the largest norm (ties to the lowest
    index), then alternates ``z @ v`` and ``z.T @ u`` with renormalization.
    Convergence is declared when the sine of the angle between successive
    left vectors drops below ``tol``.

    Returns ``(sigma, u, v, iterations, last_delta, converged)``. ``sigma``
    is 0 with ``converged=False`` if the start vector lies in the null
    space (only possible for an all-zero matrix given a sensible start).
    """
    z = np.ascontiguousarray(z, dtype=np.float64)
    rows, cols = z.shape
    row_norms = np.sqrt(np.einsum("ij,ij->i", z, z))
    r0 = int(np.argmax(row_norms))
    if row_norms[r0] == 0.0:
        return 0.0, np.zeros(rows), np.zeros(cols), 0, np.inf, False
    v = z[r0] / row_norms[r0]
    u_prev = None
    sigma = 0.0
    delta = np.inf
    for it in range(1, max_iters + 1):
        w = z @ v
        sigma = float(np.linalg.norm(w))
        if sigma == 0.0:
            return 0.0, np.zeros(rows), v, it, np.inf, False
        u = w / sigma
        x = z.T @ u
        xn = float(np.linalg.norm(x))
        if xn == 0.0:
            return sigma, u, np.zeros(cols), it, np.inf, False
        v = x / xn
        if u_prev is not None:
            c = min(1.0, abs(float(u @ u_prev)))
            delta = np.sqrt(max(0.0, 1.0 - c * c))
            if delta < tol:
                return sigma, u, v, it, float(delta), True
        u_prev = u
    return sigma, u_prev, v, max_iters, float(delta), False
