"""Pure numpy Monte Carlo kernel.

Reference twin of ``_mc_core.pyx``. Both compute every floating-point
quantity with the same operations in the same order, so hit counts agree
bit for bit. Keep them in sync.
"""

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TO_UNIT = 2.0 ** -53

KIND_GENERIC = 0
KIND_TUBE = 1
KIND_ELLIPSOID = 2
KIND_PARABOLOID = 3
KIND_HYPERBOLOID = 4

BLOCK = 1 << 16


def mix64(z):
    """SplitMix64 finaliser on uint64 scalars or arrays (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int) -> int:
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must fit in 64 unsigned bits")
    with np.errstate(over="ignore"):
        return int(mix64(np.uint64(seed) + GOLDEN))


def uniforms(key: int, start: int, stop: int, dim: int) -> np.ndarray:
    """Uniforms in [0, 1) for samples ``start..stop-1``, shape (count, dim).

    Coordinate ``j`` of sample ``i`` is a pure function of ``(key, i*dim + j)``.
    """
    counters = np.arange(start * dim, stop * dim, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(key) + (counters + np.uint64(1)) * GOLDEN
    z = mix64(z)
    return ((z >> np.uint64(11)).astype(np.float64) * _TO_UNIT).reshape(stop - start, dim)


def points(key, start, stop, lower, width):
    u = uniforms(key, start, stop, len(lower))
    return lower + width * u


def _sumsq(x, lo, hi):
    acc = x[:, lo] * x[:, lo]
    for j in range(lo + 1, hi):
        acc = acc + x[:, j] * x[:, j]
    return acc


def contains(kind: int, params, x: np.ndarray) -> np.ndarray:
    """Vectorised membership for the built-in body kinds."""
    dim = x.shape[1]
    if kind == KIND_TUBE:
        n = int(params[0])
        eps = params[2]
        d = _sumsq(x, 0, n) - 1.0
        y2 = _sumsq(x, n, dim)
        return d * d + y2 <= eps * eps
    if kind == KIND_ELLIPSOID:
        t = x[:, 0] / params[0]
        acc = t * t
        for j in range(1, dim):
            t = x[:, j] / params[j]
            acc = acc + t * t
        return acc <= 1.0
    if kind == KIND_PARABOLOID:
        s = _sumsq(x, 0, dim - 1) if dim > 1 else np.zeros(len(x))
        z = x[:, dim - 1]
        return (s <= z) & (z <= params[0])
    if kind == KIND_HYPERBOLOID:
        z = x[:, 0]
        s = _sumsq(x, 1, dim) if dim > 1 else np.zeros(len(x))
        return (z * z - s >= 1.0) & (z >= 0.0) & (z <= params[0])
    raise ValueError(f"unknown body kind {kind}")


def functional(x, coef, offset):
    acc = x[:, 0] * coef[0]
    for j in range(1, x.shape[1]):
        acc = acc + x[:, j] * coef[j]
    return acc - offset


def count_range(kind, params, lower, width, coef, offset, key, start, stop):
    """Return ``(hits_minus, hits_plus)`` for samples ``start..stop-1``.

    A hit is a sample inside the body; it lands on the plus side when the
    affine functional is strictly positive.
    """
    lower = np.asarray(lower, dtype=np.float64)
    width = np.asarray(width, dtype=np.float64)
    coef = np.asarray(coef, dtype=np.float64)
    minus = plus = 0
    for lo in range(start, stop, BLOCK):
        hi = min(lo + BLOCK, stop)
        x = points(key, lo, hi, lower, width)
        inside = contains(kind, params, x)
        pos = functional(x, coef, offset) > 0.0
        p = int(np.count_nonzero(inside & pos))
        plus += p
        minus += int(np.count_nonzero(inside)) - p
    return minus, plus
