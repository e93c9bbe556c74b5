"""Closed-form cut volumes for quadrics: balls, ellipsoids, paraboloids, hyperboloids.

In odd dimension N the ball cap above height ``h`` is a polynomial of degree
N in ``h``; the cap of one sheet of ``x_1^2 - |x'|^2 = 1`` below ``x_1 = h``
is the same polynomial up to the sign ``(-1)^((N+1)/2)``. Paraboloid segments
have volume ``K * D^((N+1)/2)`` with ``D = d + |c|^2/4``: polynomial in the
plane coefficients for odd N, with polynomial square for even N.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DomainError, EvenDimension, NoIntersection
from .exact import BiPoly, PiNumber, UniPoly, unit_ball_volume
from .oracle.bodies import AffineFunctional
from .oracle.quadrature import adaptive_quad


class Certificate(str, enum.Enum):
    POLYNOMIAL = "polynomial"
    SQUARE_IS_POLYNOMIAL = "square-is-polynomial"
    TRANSCENDENTAL_SUSPECTED = "transcendental-suspected"


@dataclass(frozen=True)
class EllipsoidSpec:
    semiaxes: tuple[float, ...]

    def __post_init__(self):
        axes = tuple(float(s) for s in self.semiaxes)
        if not axes or any(not s > 0 for s in axes):
            raise ValueError("semiaxes must all be positive")
        object.__setattr__(self, "semiaxes", axes)

    @property
    def dimension(self) -> int:
        return len(self.semiaxes)


@dataclass(frozen=True)
class QuadricCut:
    volume: float
    certificate: Certificate
    exact: PiNumber | None = None

    def to_json(self) -> dict:
        return {"volume": self.volume, "certificate": self.certificate.value,
                "exact": None if self.exact is None else self.exact.to_json()}


def _odd(N: int) -> int:
    if N < 1:
        raise ValueError("dimension must be positive")
    if N % 2 == 0:
        raise EvenDimension(f"no polynomial cap formula in even dimension {N}")
    return (N - 1) // 2


@lru_cache(maxsize=None)
def ball_cap_poly(N: int) -> UniPoly:
    """Volume of ``{|x| <= 1, x_1 >= h}`` as an exact polynomial in ``h`` (N odd)."""
    r = _odd(N)
    terms: dict[int, Fraction] = {}
    # int_h^1 (1 - t^2)^r dt, expanded binomially
    for j in range(r + 1):
        c = Fraction((-1) ** j * math.comb(r, j), 2 * j + 1)
        terms[0] = terms.get(0, 0) + c
        terms[2 * j + 1] = -c
    return UniPoly(terms) * unit_ball_volume(N - 1)


@lru_cache(maxsize=None)
def hyperboloid_cap_poly(N: int) -> UniPoly:
    """Volume of ``{x_1^2 - |x'|^2 >= 1, 1 <= x_1 <= h}`` as a polynomial in ``h`` (N odd)."""
    r = _odd(N)
    terms: dict[int, Fraction] = {}
    for j in range(r + 1):
        c = Fraction((-1) ** (r - j) * math.comb(r, j), 2 * j + 1)
        terms[0] = terms.get(0, 0) - c
        terms[2 * j + 1] = c
    return UniPoly(terms) * unit_ball_volume(N - 1)


def ball_cap(N: int, h: float, tol: float = 1e-13) -> float:
    """Volume of the unit-ball cap ``{x_1 >= h}`` in R^N.

    Odd N evaluates the exact polynomial; even N integrates
    ``v_{N-1} * int_0^{arccos h} sin^N`` numerically.
    """
    if not -1.0 <= h <= 1.0:
        raise DomainError(f"cap height {h} outside [-1, 1]")
    if N % 2:
        return float(ball_cap_poly(N).evaluate(h))
    import numpy as np

    vol = float(unit_ball_volume(N - 1))
    return vol * adaptive_quad(lambda t: np.sin(t) ** N, 0.0, math.acos(h), tol / vol)


def ellipsoid_cut(e: EllipsoidSpec, plane: AffineFunctional) -> QuadricCut:
    """Volume of the part of the ellipsoid where ``plane(x) >= 0``.

    The diagonal map ``x = diag(semiaxes) z`` sends the unit ball to the
    ellipsoid and multiplies volumes by the product of the semiaxes.
    """
    N = e.dimension
    if plane.dimension != N:
        raise ValueError("plane and ellipsoid dimensions differ")
    pulled = [c * s for c, s in zip(plane.coef, e.semiaxes)]
    h = plane.offset / math.hypot(*pulled)
    if abs(h) > 1.0:
        raise NoIntersection(f"plane at normalised offset {h} misses the ellipsoid")
    det = math.prod(e.semiaxes)
    if N % 2:
        exact = ball_cap_poly(N).evaluate(h) * Fraction(det)
        return QuadricCut(float(exact), Certificate.POLYNOMIAL, exact)
    return QuadricCut(det * ball_cap(N, h), Certificate.TRANSCENDENTAL_SUSPECTED)


def paraboloid_constant(N: int) -> PiNumber:
    """``K = 2 v_{N-1} / (N + 1)`` in ``V = K * D^((N+1)/2)``."""
    if N < 2:
        raise ValueError("paraboloid needs N >= 2")
    return unit_ball_volume(N - 1) * Fraction(2, N + 1)


def paraboloid_cut(N: int, c: Sequence[float], d: float) -> QuadricCut:
    """Segment ``{|x'|^2 <= x_N <= <c, x'> + d}`` of the paraboloid."""
    c = [float(v) for v in c]
    if len(c) != N - 1:
        raise ValueError(f"expected {N - 1} slope coefficients, got {len(c)}")
    cert = Certificate.POLYNOMIAL if N % 2 else Certificate.SQUARE_IS_POLYNOMIAL
    big_k = paraboloid_constant(N)
    depth = Fraction(d) + sum(Fraction(v) ** 2 for v in c) / 4
    if depth <= 0:
        return QuadricCut(0.0, cert, PiNumber() if N % 2 else None)
    if N % 2:
        exact = big_k * depth ** ((N + 1) // 2)
        return QuadricCut(float(exact), cert, exact)
    return QuadricCut(float(big_k) * float(depth) ** ((N + 1) / 2), cert)


def paraboloid_square_poly(N: int) -> BiPoly:
    """Exact ``V^2 = K^2 (d + s^2/4)^(N+1)`` as a BiPoly in ``(a, b) = (s, d)``.

    ``s = |c|``; valid where ``d + s^2/4 >= 0``.
    """
    big_k = paraboloid_constant(N)
    terms = {}
    for j in range(N + 2):
        terms[(2 * j, N + 1 - j)] = Fraction(math.comb(N + 1, j), 4 ** j)
    return BiPoly(terms) * (big_k * big_k)
