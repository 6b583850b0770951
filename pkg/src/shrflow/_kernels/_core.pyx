# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Mirrors ``_python`` exactly in contract and algorithm; loops are written
with fixed summation order so results are deterministic for fixed inputs.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

BACKEND_NAME = "compiled"


def lag_stack(values, int q):
    """Stack q+1 lagged copies of the rows of ``values``; see ``_python``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] src = np.ascontiguousarray(
        values, dtype=np.float64
    )
    cdef Py_ssize_t nv = src.shape[0]
    cdef Py_ssize_t cols = src.shape[1]
    cdef Py_ssize_t m = cols - q
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty(
        ((q + 1) * nv, m), dtype=np.float64
    )
    cdef double[:, ::1] s = src
    cdef double[:, ::1] o = out
    cdef Py_ssize_t b, i, j, shift
    for b in range(q + 1):
        shift = q - b
        for i in range(nv):
            for j in range(m):
                o[b * nv + i, j] = s[i, shift + j]
    return out


def normalize_rows(values, double eps):
    """Center rows, scale to unit population variance; see ``_python``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] src = np.ascontiguousarray(
        values, dtype=np.float64
    )
    cdef Py_ssize_t rows = src.shape[0]
    cdef Py_ssize_t m = src.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((rows, m), dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1, cast=True] degenerate = np.zeros(
        rows, dtype=bool
    )
    cdef double[:, ::1] s = src
    cdef double[:, ::1] o = out
    cdef Py_ssize_t r, j
    cdef double mean, var, sd, scale, d
    for r in range(rows):
        mean = 0.0
        scale = 0.0
        for j in range(m):
            mean += s[r, j]
            if fabs(s[r, j]) > scale:
                scale = fabs(s[r, j])
        mean /= m
        var = 0.0
        for j in range(m):
            d = s[r, j] - mean
            var += d * d
        var /= m
        sd = sqrt(var)
        if scale < 1.0:
            scale = 1.0
        if sd < eps * scale:
            degenerate[r] = True
        else:
            for j in range(m):
                o[r, j] = (s[r, j] - mean) / sd
    return out, np.asarray(degenerate)


cdef double _matvec(double[:, ::1] z, double[::1] v, double[::1] w) noexcept nogil:
    """w = z @ v; returns the Euclidean norm of w."""
    cdef Py_ssize_t rows = z.shape[0]
    cdef Py_ssize_t cols = z.shape[1]
    cdef Py_ssize_t r, c
    cdef double acc, nrm = 0.0
    for r in range(rows):
        acc = 0.0
        for c in range(cols):
            acc += z[r, c] * v[c]
        w[r] = acc
        nrm += acc * acc
    return sqrt(nrm)


cdef double _matvec_t(double[:, ::1] z, double[::1] u, double[::1] x) noexcept nogil:
    """x = z.T @ u, accumulated row-major; returns the Euclidean norm of x."""
    cdef Py_ssize_t rows = z.shape[0]
    cdef Py_ssize_t cols = z.shape[1]
    cdef Py_ssize_t r, c
    cdef double ur, nrm = 0.0
    for c in range(cols):
        x[c] = 0.0
    for r in range(rows):
        ur = u[r]
        for c in range(cols):
            x[c] += z[r, c] * ur
    for c in range(cols):
        nrm += x[c] * x[c]
    return sqrt(nrm)


def power_iteration(z, double tol, int max_iters):
    """Leading singular triplet by alternating products; see ``_python``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] mat = np.ascontiguousarray(
        z, dtype=np.float64
    )
    cdef Py_ssize_t rows = mat.shape[0]
    cdef Py_ssize_t cols = mat.shape[1]
    cdef double[:, ::1] zz = mat
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u_arr = np.zeros(rows, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] up_arr = np.zeros(rows, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v_arr = np.zeros(cols, dtype=np.float64)
    cdef double[::1] u = u_arr
    cdef double[::1] u_prev = up_arr
    cdef double[::1] v = v_arr
    cdef Py_ssize_t r, c, r0 = 0
    cdef double best = 0.0, nrm, acc
    # Start from the largest-norm row (ties to the lowest index).
    for r in range(rows):
        acc = 0.0
        for c in range(cols):
            acc += zz[r, c] * zz[r, c]
        if acc > best:
            best = acc
            r0 = r
    if best == 0.0:
        return 0.0, u_arr, v_arr, 0, np.inf, False
    nrm = sqrt(best)
    for c in range(cols):
        v[c] = zz[r0, c] / nrm
    cdef double sigma = 0.0, xn, dot, delta = np.inf
    cdef bint have_prev = False
    cdef int it
    for it in range(1, max_iters + 1):
        sigma = _matvec(zz, v, u)
        if sigma == 0.0:
            return 0.0, np.zeros(rows), v_arr, it, np.inf, False
        for r in range(rows):
            u[r] /= sigma
        xn = _matvec_t(zz, u, v)
        if xn == 0.0:
            return sigma, u_arr, np.zeros(cols), it, np.inf, False
        for c in range(cols):
            v[c] /= xn
        if have_prev:
            dot = 0.0
            for r in range(rows):
                dot += u[r] * u_prev[r]
            dot = fabs(dot)
            if dot > 1.0:
                dot = 1.0
            delta = sqrt(1.0 - dot * dot) if dot < 1.0 else 0.0
            if delta < tol:
                return sigma, u_arr, v_arr, it, delta, True
        for r in range(rows):
            u_prev[r] = u[r]
        have_prev = True
    return sigma, up_arr, v_arr, max_iters, delta, False
