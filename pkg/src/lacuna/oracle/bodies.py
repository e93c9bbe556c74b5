"""Bodies given by a membership predicate plus an explicit bounding box."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Sequence

import numpy as np

from . import _mc_py


@dataclass(frozen=True)
class AffineFunctional:
    """``f(x) = coef . x - offset``; the hyperplane is its zero set."""

    coef: tuple[float, ...]
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "coef", tuple(float(c) for c in self.coef))
        object.__setattr__(self, "offset", float(self.offset))
        if not any(self.coef):
            raise ValueError("affine functional has zero gradient")

    @property
    def dimension(self) -> int:
        return len(self.coef)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return _mc_py.functional(np.atleast_2d(x), self.coef, self.offset)


@dataclass(frozen=True)
class ImplicitBody:
    """A compact body in R^N.

    ``contains`` maps an ``(n, N)`` array of points to a boolean mask. Built-in
    bodies also carry a ``kind`` code and ``params`` understood by the
    compiled kernel; ``kind == 0`` marks a generic predicate that only the
    numpy path can evaluate.
    """

    dimension: int
    contains: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    tag: str
    kind: int = _mc_py.KIND_GENERIC
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.lower) != self.dimension or len(self.upper) != self.dimension:
            raise ValueError("bounding box does not match dimension")
        if any(hi <= lo for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("bounding box must have positive volume")

    @property
    def box_volume(self) -> float:
        return math.prod(hi - lo for lo, hi in zip(self.lower, self.upper))


def _builtin(kind, params, dim, lower, upper, tag):
    params = tuple(float(p) for p in params)
    return ImplicitBody(dim, partial(_mc_py.contains, kind, np.asarray(params)),
                        tuple(map(float, lower)), tuple(map(float, upper)),
                        tag, kind, params)


def tube_body(n: int, m: int, eps: float) -> ImplicitBody:
    """``(|x|^2 - 1)^2 + |y|^2 <= eps^2`` in R^n x R^m."""
    r = math.sqrt(1.0 + eps)
    lower = [-r] * n + [-eps] * m
    upper = [r] * n + [eps] * m
    return _builtin(_mc_py.KIND_TUBE, (n, m, eps), n + m, lower, upper,
                    f"tube(n={n}, m={m}, eps={eps!r})")


def ellipsoid_body(semiaxes: Sequence[float]) -> ImplicitBody:
    semiaxes = [float(s) for s in semiaxes]
    if any(s <= 0 for s in semiaxes):
        raise ValueError("semiaxes must be positive")
    return _builtin(_mc_py.KIND_ELLIPSOID, semiaxes, len(semiaxes),
                    [-s for s in semiaxes], semiaxes, f"ellipsoid{tuple(semiaxes)}")


def ball_body(dim: int) -> ImplicitBody:
    return ellipsoid_body([1.0] * dim)


def paraboloid_body(dim: int, top: float, radius: float | None = None,
                    center: Sequence[float] | None = None) -> ImplicitBody:
    """``|x'|^2 <= x_N <= top``, boxed to ``center +- radius`` in x'.

    The default box is the full disc ``|x'| <= sqrt(top)``.
    """
    if top <= 0:
        raise ValueError("top must be positive")
    r = math.sqrt(top) if radius is None else float(radius)
    center = [0.0] * (dim - 1) if center is None else [float(c) for c in center]
    lower = [c - r for c in center] + [0.0]
    upper = [c + r for c in center] + [top]
    return _builtin(_mc_py.KIND_PARABOLOID, (top,), dim, lower, upper,
                    f"paraboloid(N={dim}, top={top!r})")


def hyperboloid_body(dim: int, top: float) -> ImplicitBody:
    """Upper sheet ``x_1^2 - |x'|^2 >= 1`` truncated at ``x_1 <= top``."""
    if top <= 1:
        raise ValueError("top must exceed 1")
    r = math.sqrt(top * top - 1.0)
    lower = [1.0] + [-r] * (dim - 1)
    upper = [top] + [r] * (dim - 1)
    return _builtin(_mc_py.KIND_HYPERBOLOID, (top,), dim, lower, upper,
                    f"hyperboloid(N={dim}, top={top!r})")
