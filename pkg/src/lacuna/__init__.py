"""Exact cut-volume polynomials for tubes around even-dimensional spheres.

Submodules: :mod:`~lacuna.exact` (pi-graded exact arithmetic),
:mod:`~lacuna.tube` (the tube construction), :mod:`~lacuna.oracle`
(quadrature and Monte Carlo ground truth), :mod:`~lacuna.classical`
(quadric caps and segments), :mod:`~lacuna.fitter` (degree detection).
"""

from .exact import BiPoly, PiNumber, UniPoly, unit_ball_volume, wallis
from .tube import (Hyperplane, NormalForm, TubeSpec, TwoValuedVolume, in_lacuna,
                   normal_form, tube_cut_poly, tube_dvdb, tube_total_volume, tube_volumes)

__version__ = "0.1.0"
