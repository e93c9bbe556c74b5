# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernel. Mirrors ``_mc_py`` operation for operation."""

from libc.stdint cimport uint64_t, int64_t

DEF MAX_DIM = 64

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TO_UNIT = 1.1102230246251565e-16  # 2**-53


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double sumsq(double* x, int lo, int hi) noexcept nogil:
    cdef double acc = x[lo] * x[lo]
    cdef int j
    for j in range(lo + 1, hi):
        acc = acc + x[j] * x[j]
    return acc


cdef inline bint inside(int kind, const double[::1] params, double* x, int dim) noexcept nogil:
    cdef double d, y2, t, acc, s, z, eps
    cdef int j, n
    if kind == 1:
        n = <int>params[0]
        eps = params[2]
        d = sumsq(x, 0, n) - 1.0
        y2 = sumsq(x, n, dim)
        return d * d + y2 <= eps * eps
    elif kind == 2:
        t = x[0] / params[0]
        acc = t * t
        for j in range(1, dim):
            t = x[j] / params[j]
            acc = acc + t * t
        return acc <= 1.0
    elif kind == 3:
        s = sumsq(x, 0, dim - 1) if dim > 1 else 0.0
        z = x[dim - 1]
        return s <= z and z <= params[0]
    elif kind == 4:
        z = x[0]
        s = sumsq(x, 1, dim) if dim > 1 else 0.0
        return z * z - s >= 1.0 and z >= 0.0 and z <= params[0]
    return False


def count_range(int kind, const double[::1] params, const double[::1] lower,
                const double[::1] width, const double[::1] coef, double offset,
                uint64_t key, int64_t start, int64_t stop):
    """Return ``(hits_minus, hits_plus)`` for samples ``start..stop-1``."""
    cdef int dim = lower.shape[0]
    if dim > MAX_DIM or dim < 1:
        raise ValueError(f"dimension must be in 1..{MAX_DIM}")
    if coef.shape[0] != dim or width.shape[0] != dim:
        raise ValueError("shape mismatch")
    if kind < 1 or kind > 4:
        raise ValueError(f"unknown body kind {kind}")
    cdef double x[MAX_DIM]
    cdef int64_t i, minus = 0, plus = 0
    cdef uint64_t z
    cdef int j
    cdef double f
    with nogil:
        for i in range(start, stop):
            for j in range(dim):
                z = key + (<uint64_t>(i * dim + j) + 1) * GOLDEN
                z = mix64(z)
                x[j] = lower[j] + width[j] * (<double>(z >> 11) * TO_UNIT)
            if inside(kind, params, x, dim):
                f = x[0] * coef[0]
                for j in range(1, dim):
                    f = f + x[j] * coef[j]
                f = f - offset
                if f > 0.0:
                    plus += 1
                else:
                    minus += 1
    return int(minus), int(plus)
