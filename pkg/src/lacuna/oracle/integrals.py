"""Numeric evaluation of dV/db for the tube directly from the layer volumes.

Deliberately independent of the exact engine: ball volumes come from the
Gamma function and the integrand is the raw layer formula, with square roots
evaluated in floating point.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import OutsideLacuna
from .quadrature import adaptive_quad, adaptive_quad_2d


def ball_volume(p: int) -> float:
    return math.pi ** (p / 2) / math.gamma(p / 2 + 1)


def layer_volume(k: int, eps: float, a: float, b: float, y1, y_sq):
    """(2k)-volume of a section of the fibre over ``y`` by ``x_1 = a*y_1 + b``."""
    s = np.sqrt(np.maximum(eps * eps - y_sq, 0.0))
    u = 1.0 - (a * y1 + b) ** 2
    return ball_volume(2 * k) * ((u + s) ** k - (u - s) ** k)


def quad_dvdb(spec, a: float, b: float, tol: float = 1e-12) -> float:
    """``dV/db`` at ``(a, b)`` by adaptive quadrature over the ``y``-ball.

    For m = 1 the fibre integral runs over ``y in [-eps, eps]``; for m > 1
    the ``y``-ball is sliced into (m-1)-balls of radius ``sqrt(eps^2 - y_1^2)``.
    The outer variable is ``y_1 = eps sin(phi)`` and the inner radial one
    ``rho = R sin(theta)`` so neither integrand has a square-root endpoint.
    """
    k, m = spec.k, spec.m
    eps = float(spec.epsilon)
    if (a * eps + b) ** 2 > 1 - eps:
        raise OutsideLacuna(f"a={a}, b={b} outside the lacuna")
    half_pi = math.pi / 2

    if m == 1:
        def f(phi):
            y = eps * np.sin(phi)
            return layer_volume(k, eps, a, b, y, y * y) * eps * np.cos(phi)

        return adaptive_quad(f, -half_pi, half_pi, tol)

    sphere = (m - 1) * ball_volume(m - 1)

    def g(phi, theta):
        y1 = eps * math.sin(phi)
        big_r = eps * math.cos(phi)
        rho = big_r * np.sin(theta)
        jac = eps * math.cos(phi) * big_r * np.cos(theta)
        return jac * sphere * rho ** (m - 2) * layer_volume(k, eps, a, b, y1, y1 * y1 + rho * rho)

    return adaptive_quad_2d(g, -half_pi, half_pi, 0.0, half_pi, tol)
