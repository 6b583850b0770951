"""Independent brute-force oracles used to compute expected test values.

Everything here is deliberately written from first principles (plain loops,
explicit normal equations) and never calls into shrflow, so the tests stay
a genuinely independent check on the library's linear-algebra paths.
"""

import numpy as np


def scalar_ar_series(coefficients, n, seed, noise_std=1.0, burn=500):
    """Simulate a univariate AR process with a plain scalar recursion."""
    rng = np.random.default_rng(seed)
    total = n + burn
    eps = rng.standard_normal(total) * noise_std
    x = np.zeros(total)
    for t in range(total):
        acc = eps[t]
        for k, a in enumerate(coefficients, start=1):
            if t - k >= 0:
                acc += a * x[t - k]
        x[t] = acc
    return x[burn:]


def autocorr(x, lag):
    """Sample autocorrelation at one lag, mean-removed, biased denominator."""
    x = np.asarray(x, dtype=float)
    x = x - x.mean()
    return float(np.dot(x[:-lag], x[lag:]) / np.dot(x, x))


def lagged_crosscorr(x, y, lag):
    """corr(x[t], y[t + lag]) computed by direct slicing."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if lag > 0:
        a, b = x[:-lag], y[lag:]
    elif lag < 0:
        a, b = x[-lag:], y[:lag]
    else:
        a, b = x, y
    return float(np.corrcoef(a, b)[0, 1])


def correlation_matrix(rows):
    """Sample correlation matrix of the rows, from the defining formula."""
    rows = np.asarray(rows, dtype=float)
    centered = rows - rows.mean(axis=1, keepdims=True)
    cov = centered @ centered.T
    sd = np.sqrt(np.diag(cov))
    return cov / np.outer(sd, sd)


def pooled_local_ols(channel_values, tau, order):
    """Local AR coefficients by explicit normal equations.

    ``channel_values`` is (n_frames, n_epochs) for one channel; ``tau`` is
    1-based. Pools equations for local times tau-order..tau over all
    epochs and solves X'X a = X'y directly.
    """
    u = np.asarray(channel_values, dtype=float)
    q = order
    t0 = tau - 1
    xtx = np.zeros((q, q))
    xty = np.zeros(q)
    n_epochs = u.shape[1]
    for t in range(t0 - q, t0 + 1):
        for j in range(n_epochs):
            x = np.array([u[t - k, j] for k in range(1, q + 1)])
            xtx += np.outer(x, x)
            xty += x * u[t, j]
    return np.linalg.solve(xtx, xty)
