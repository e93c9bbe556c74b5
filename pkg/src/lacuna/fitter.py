"""Polynomial least squares as an algebraicity probe.

A sampled function that *is* a polynomial of degree d is fitted to rounding
error at degree d. A transcendental one, like the disk segment area, leaves
a residual floor that no moderate degree gets under.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, RankDeficient


@dataclass(frozen=True)
class SampleSet:
    inputs: np.ndarray  # shape (n, nvars)
    values: np.ndarray  # shape (n,)
    variables: tuple[str, ...]
    description: str = ""

    def __post_init__(self):
        x = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        if x.shape[0] == 1 and len(self.variables) == 1 and x.shape[1] != 1:
            x = x.T
        y = np.asarray(self.values, dtype=float).ravel()
        if len(y) < 1 or x.shape[0] != len(y):
            raise ValueError("need at least one point and matching values")
        if x.shape[1] != len(self.variables):
            raise ValueError("variable names do not match input width")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "inputs", x)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "variables", tuple(self.variables))

    def __len__(self):
        return len(self.values)

    @property
    def points(self) -> list[tuple[tuple[float, ...], float]]:
        return [(tuple(row), v) for row, v in zip(self.inputs.tolist(), self.values.tolist())]

    @classmethod
    def from_function(cls, f: Callable, grids: Sequence[Sequence[float]],
                      variables: Sequence[str], description: str = "") -> "SampleSet":
        """Tensor grid of ``grids`` evaluated by ``f(*coords)`` (vectorised)."""
        mesh = np.meshgrid(*[np.asarray(g, dtype=float) for g in grids], indexing="ij")
        cols = [m.ravel() for m in mesh]
        return cls(np.column_stack(cols), np.asarray(f(*cols), dtype=float),
                   tuple(variables), description)

    def map_values(self, g: Callable[[np.ndarray], np.ndarray], description: str = "") -> "SampleSet":
        return SampleSet(self.inputs, g(self.values), self.variables, description)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(self.variables) + ["value"])
        for row, v in zip(self.inputs.tolist(), self.values.tolist()):
            w.writerow([repr(x) for x in row] + [repr(v)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, description: str = "") -> "SampleSet":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], [r for r in rows[1:] if r]
        if header[-1] != "value":
            raise ValueError("last CSV column must be 'value'")
        data = np.array([[float(v) for v in r] for r in body], dtype=float)
        return cls(data[:, :-1], data[:, -1], tuple(header[:-1]), description)


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree <= ``degree`` in graded-lex order."""
    if nvars == 1:
        return [(i,) for i in range(degree + 1)]
    if nvars == 2:
        return [(t - j, j) for t in range(degree + 1) for j in range(t + 1)]
    raise ValueError("fit_poly supports one or two input variables")


@dataclass(frozen=True)
class FitReport:
    degree: int
    coefficients: list[float]
    max_abs_residual: float
    rms_residual: float
    monomials: list[tuple[int, ...]] = field(default_factory=list)

    def __call__(self, *coords):
        out = 0.0
        for c, exps in zip(self.coefficients, self.monomials):
            term = c
            for x, e in zip(coords, exps):
                term = term * np.asarray(x, dtype=float) ** e
            out = out + term
        return out

    def to_json(self) -> dict:
        return {"degree": self.degree, "coefficients": list(self.coefficients),
                "monomials": [list(m) for m in self.monomials],
                "max_abs_residual": self.max_abs_residual,
                "rms_residual": self.rms_residual}


def _shifted_to_monomial(coef_t, monos, centers, halfwidths):
    """Re-express ``sum c * prod(((x - center)/hw)^e)`` in plain monomials of ``x``."""
    index = {m: i for i, m in enumerate(monos)}
    out = np.zeros(len(monos))
    for c, exps in zip(coef_t, monos):
        # expand each factor ((x - c0)/h)^e = sum_p C(e, p) x^p (-c0)^(e-p) / h^e
        parts = [[(p, math.comb(e, p) * (-c0) ** (e - p) / h ** e) for p in range(e + 1)]
                 for e, c0, h in zip(exps, centers, halfwidths)]
        combos = [((), 1.0)]
        for part in parts:
            combos = [(key + (p,), w * wp) for key, w in combos for p, wp in part]
        for key, w in combos:
            out[index[key]] += c * w
    return out


def fit_poly(s: SampleSet, degree: int) -> FitReport:
    """Least-squares polynomial of total degree ``degree``.

    Inputs are mapped affinely onto [-1, 1] and the design matrix is
    column-equilibrated before a Householder QR; coefficients are returned
    in the plain monomial basis (graded-lex order).
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    x, y = s.inputs, s.values
    monos = monomials(x.shape[1], degree)
    lo, hi = x.min(axis=0), x.max(axis=0)
    centers = (lo + hi) / 2
    halfwidths = np.where(hi > lo, (hi - lo) / 2, 1.0)
    t = (x - centers) / halfwidths

    design = np.column_stack([np.prod(t ** np.array(e), axis=1) for e in monos])
    if design.shape[0] < design.shape[1]:
        raise RankDeficient(f"{design.shape[0]} samples for {design.shape[1]} coefficients")
    norms = np.linalg.norm(design, axis=0)
    norms[norms == 0] = 1.0
    q, r = np.linalg.qr(design / norms)
    diag = np.abs(np.diag(r))
    if diag.min() <= diag.max() * max(design.shape) * np.finfo(float).eps:
        raise RankDeficient(f"design matrix rank < {len(monos)} at degree {degree}")
    coef_scaled = np.linalg.solve(r, q.T @ y)
    resid = y - (design / norms) @ coef_scaled

    coef = _shifted_to_monomial(coef_scaled / norms, monos, centers, halfwidths)
    return FitReport(degree, coef.tolist(), float(np.max(np.abs(resid))),
                     float(np.sqrt(np.mean(resid ** 2))), monos)


@dataclass(frozen=True)
class Detection:
    degree: int | None
    report: FitReport
    history: list[FitReport]
    threshold: float

    def to_json(self) -> dict:
        return {"detected": "none" if self.degree is None else self.degree,
                "threshold": self.threshold,
                "report": self.report.to_json(),
                "residuals": [{"degree": r.degree, "max_abs_residual": r.max_abs_residual,
                               "rms_residual": r.rms_residual} for r in self.history]}


def detect_degree(s: SampleSet, dmax: int, tol: float = 1e-9,
                  relative: bool = True) -> Detection:
    """Smallest degree ``<= dmax`` whose max-abs residual is below threshold.

    With ``relative`` the threshold is ``tol * max|value|``. When no degree
    qualifies, ``degree`` is None and ``report`` is the best fit seen.
    """
    if dmax < 0 or not tol > 0:
        raise ValueError("need dmax >= 0 and tol > 0")
    scale = float(np.max(np.abs(s.values))) if relative else 1.0
    threshold = tol * (scale if scale > 0 else 1.0)
    history = []
    for d in range(dmax + 1):
        rep = fit_poly(s, d)
        history.append(rep)
        if rep.max_abs_residual < threshold:
            return Detection(d, rep, history, threshold)
    best = min(history, key=lambda r: r.max_abs_residual)
    return Detection(None, best, history, threshold)


def disk_segment_area(b):
    """Area of ``{x^2 + y^2 <= 1, x >= b}``; accepts scalars or arrays."""
    arr = np.asarray(b, dtype=float)
    if np.any(np.abs(arr) > 1.0) or not np.all(np.isfinite(arr)):
        raise DomainError("segment offset must lie in [-1, 1]")
    out = np.arccos(arr) - arr * np.sqrt(1.0 - arr * arr)
    return float(out) if out.ndim == 0 else out
