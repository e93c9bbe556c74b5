"""Independent numeric ground truth: quadrature and seeded Monte Carlo."""

from ._backend import DEFAULT as BACKEND
from .bodies import (AffineFunctional, ImplicitBody, ball_body, ellipsoid_body,
                     hyperboloid_body, paraboloid_body, tube_body)
from .integrals import quad_dvdb
from .montecarlo import McEstimate, mc_cut_volume, mc_volume
from .quadrature import QuadResult, adaptive_quad, adaptive_quad_2d, integrate
