"""Cut volumes of the tubular neighbourhood of S^{2k} inside R^{2k+1} x R^m.

The body is ``(|x|^2 - 1)^2 + |y|^2 <= eps^2`` with ``x`` in R^n, n = 2k+1,
and ``y`` in R^m. Any hyperplane not containing the R^n directions reduces
under O(n) x O(m) to ``x_1 = a*y_1 + b`` with ``a, b >= 0``. For small
``a, b`` the derivative of the larger cut volume in ``b`` is an exact
polynomial ``Q(a, b)``; its antiderivative ``P`` gives both cut volumes as
``C/2 +- P``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DegenerateHyperplane, OutsideLacuna
from .exact import BiPoly, PiNumber, poly_antiderivative_b, unit_ball_volume, wallis
from .oracle.bodies import AffineFunctional, ImplicitBody, tube_body
from .oracle.quadrature import integrate


@dataclass(frozen=True)
class TubeSpec:
    k: int
    m: int
    epsilon: Fraction

    def __post_init__(self):
        if isinstance(self.epsilon, float):
            raise TypeError("epsilon must be exact (Fraction, int or 'p/q' string)")
        eps = Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if self.k < 1 or self.m < 1:
            raise ValueError("k and m must be positive integers")
        if not 0 < eps < 1:
            raise ValueError("epsilon must lie in (0, 1)")

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    @property
    def N(self) -> int:
        return self.n + self.m

    @property
    def pi_grade(self) -> int:
        """pi exponent carried by every coefficient of ``tube_dvdb``."""
        return self.k + (self.m + 1) // 2

    def body(self) -> ImplicitBody:
        return tube_body(self.n, self.m, float(self.epsilon))


@dataclass(frozen=True)
class Hyperplane:
    """``alpha . x + gamma . y = beta`` in R^n x R^m."""

    alpha: tuple[float, ...]
    gamma: tuple[float, ...]
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "gamma", tuple(float(v) for v in self.gamma))
        object.__setattr__(self, "beta", float(self.beta))
        if not any(self.alpha) and not any(self.gamma):
            raise ValueError("hyperplane needs a nonzero normal")

    def functional(self) -> AffineFunctional:
        return AffineFunctional(self.alpha + self.gamma, self.beta)

    @classmethod
    def from_normal_form(cls, spec: TubeSpec, a: float, b: float) -> "Hyperplane":
        """The representative ``x_1 - a*y_1 = b``."""
        alpha = (1.0,) + (0.0,) * (spec.n - 1)
        gamma = (-float(a),) + (0.0,) * (spec.m - 1)
        return cls(alpha, gamma, b)


@dataclass(frozen=True)
class NormalForm:
    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("normal form parameters are non-negative")


@dataclass(frozen=True)
class TwoValuedVolume:
    bigger: float
    smaller: float
    total: float
    total_error: float
    normal: NormalForm
    cut_value: PiNumber  # exact P(a, b); bigger = total/2 + P

    def to_json(self) -> dict:
        return {"bigger": self.bigger, "smaller": self.smaller, "total": self.total,
                "total_error": self.total_error, "a": self.normal.a, "b": self.normal.b,
                "cut_value": self.cut_value.to_json()}


def normal_form(h: Hyperplane) -> NormalForm:
    norm_alpha = math.hypot(*h.alpha)
    if norm_alpha == 0:
        raise DegenerateHyperplane("hyperplane is parallel to or contains the R^n factor")
    return NormalForm(math.hypot(*h.gamma) / norm_alpha, abs(h.beta) / norm_alpha)


def in_lacuna(spec: TubeSpec, nf: NormalForm) -> bool:
    """Sufficient condition ``(a*eps + b)^2 <= 1 - eps``, checked exactly.

    It keeps the inner radius of every fibre layer real, so each section is a
    full spherical layer.
    """
    if not (math.isfinite(nf.a) and math.isfinite(nf.b)):
        return False
    eps = spec.epsilon
    return (Fraction(nf.a) * eps + Fraction(nf.b)) ** 2 <= 1 - eps


@lru_cache(maxsize=None)
def _layer_factor_terms(r: int) -> dict[tuple[int, int, int], int]:
    """Expand ``(1 - (a*s + b)^2)^r`` as ``{(deg a, deg b, deg s): coef}``.

    ``s`` stands for ``sin(phi)``; ``eps`` is absorbed later via ``a -> eps*a``.
    """
    out: dict[tuple[int, int, int], int] = {}
    for t in range(r + 1):
        sign_binom = (-1) ** t * math.comb(r, t)
        for l in range(2 * t + 1):
            key = (l, 2 * t - l, l)
            out[key] = out.get(key, 0) + sign_binom * math.comb(2 * t, l)
    return out


def _phi_integral(r: int, cos_power: int) -> BiPoly:
    """``int_{-pi/2}^{pi/2} (1 - (a sin + b)^2)^r cos^q dphi`` as a BiPoly in (a, b)."""
    terms: dict[tuple[int, int], PiNumber] = {}
    for (ia, jb, l), c in _layer_factor_terms(r).items():
        if l % 2:
            continue  # odd in sin(phi): vanishes on the symmetric interval
        val = wallis(l, cos_power) * (2 * c)
        terms[(ia, jb)] = terms.get((ia, jb), PiNumber()) + val
    return BiPoly(terms)


@lru_cache(maxsize=None)
def tube_dvdb(spec: TubeSpec) -> BiPoly:
    """Exact ``Q(a, b) = dV/db`` on the lacuna.

    The layer volume ``v_{2k}[(u+s)^k - (u-s)^k]`` keeps only odd powers of
    ``s``; after ``y_1 = eps sin(phi)`` (and ``rho = eps cos(phi) sin(theta)``
    when m > 1) each monomial integrates to a Wallis value.
    """
    k, m, eps = spec.k, spec.m, spec.epsilon
    v2k = unit_ball_volume(2 * k)
    total = BiPoly()
    for i in range(1, k + 1, 2):
        if m == 1:
            scalar = v2k * (2 * math.comb(k, i) * eps ** (i + 1))
            total = total + _phi_integral(k - i, i + 1) * scalar
        else:
            scalar = (unit_ball_volume(m - 1) * v2k * wallis(m - 2, i + 1)
                      * (2 * (m - 1) * math.comb(k, i) * eps ** (m + i)))
            total = total + _phi_integral(k - i, m + i) * scalar
    return total.scale_a(eps)


@lru_cache(maxsize=None)
def tube_cut_poly(spec: TubeSpec) -> BiPoly:
    """``P(a, b)`` with ``V(a, b) = C/2 + P``; even in ``a``, odd in ``b``."""
    return poly_antiderivative_b(tube_dvdb(spec))


def _shell_integrand(spec: TubeSpec):
    eps = float(spec.epsilon)
    half_n = spec.n / 2.0

    def f(theta):
        s = eps * np.cos(theta)
        return np.sin(theta) ** (spec.m - 1) * np.cos(theta) * (
            (1.0 + s) ** half_n - (1.0 - s) ** half_n)

    return f


@lru_cache(maxsize=256)
def _total_volume(spec: TubeSpec, tol: float) -> tuple[float, float]:
    eps = float(spec.epsilon)
    # rho = eps*sin(theta) removes the square-root endpoint of the shell profile
    scale = (spec.m * float(unit_ball_volume(spec.m)) * float(unit_ball_volume(spec.n))
             * eps ** spec.m)
    res = integrate(_shell_integrand(spec), 0.0, math.pi / 2, tol / scale)
    return scale * res.value, scale * res.error


def tube_total_volume(spec: TubeSpec, tol: float = 1e-12) -> float:
    """Volume ``C(eps)`` of the whole tube, absolute error ``<= tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    return _total_volume(spec, float(tol))[0]


def tube_volumes(spec: TubeSpec, h: Hyperplane | NormalForm,
                 tol: float = 1e-12) -> TwoValuedVolume:
    """Both cut volumes ``C/2 +- P(a, b)`` for a hyperplane in the lacuna.

    The bigger value belongs to the part containing the origin.
    """
    nf = h if isinstance(h, NormalForm) else normal_form(h)
    if len(getattr(h, "alpha", ())) not in (0, spec.n) or \
            len(getattr(h, "gamma", ())) not in (0, spec.m):
        raise ValueError("hyperplane dimensions do not match the tube")
    if not in_lacuna(spec, nf):
        raise OutsideLacuna(f"a={nf.a}, b={nf.b} outside the lacuna: (a*eps + b)^2 > 1 - eps")
    total, err = _total_volume(spec, float(tol))
    p = tube_cut_poly(spec).evaluate(nf.a, nf.b)
    pv = float(p)
    return TwoValuedVolume(total / 2 + pv, total / 2 - pv, total, err, nf, p)


__all__ = [
    "TubeSpec", "Hyperplane", "NormalForm", "TwoValuedVolume", "normal_form",
    "in_lacuna", "tube_dvdb", "tube_cut_poly", "tube_total_volume", "tube_volumes",
]
