"""Seeded Monte Carlo estimates of the two volumes cut by a hyperplane."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend, _mc_py
from .bodies import AffineFunctional, ImplicitBody

# fixed work unit; the partition never depends on the worker count
CHUNK = 1 << 20


@dataclass(frozen=True)
class McEstimate:
    side_minus: float
    side_plus: float
    stderr: float
    samples: int
    seed: int
    hits_minus: int
    hits_plus: int
    box_volume: float

    def _side_stderr(self, hits: int) -> float:
        p = hits / self.samples
        return self.box_volume * math.sqrt(p * (1.0 - p) / self.samples)

    @property
    def stderr_minus(self) -> float:
        return self._side_stderr(self.hits_minus)

    @property
    def stderr_plus(self) -> float:
        return self._side_stderr(self.hits_plus)

    @property
    def total(self) -> float:
        return self.side_minus + self.side_plus

    @property
    def stderr_total(self) -> float:
        return self._side_stderr(self.hits_minus + self.hits_plus)

    def to_json(self) -> dict:
        return {"side_minus": self.side_minus, "side_plus": self.side_plus,
                "stderr": self.stderr, "samples": self.samples, "seed": self.seed}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _generic_count(body, plane, key, start, stop):
    lower = np.asarray(body.lower)
    width = np.asarray(body.upper) - lower
    minus = plus = 0
    for lo in range(start, stop, _mc_py.BLOCK):
        hi = min(lo + _mc_py.BLOCK, stop)
        x = _mc_py.points(key, lo, hi, lower, width)
        inside = np.asarray(body.contains(x), dtype=bool)
        pos = _mc_py.functional(x, plane.coef, plane.offset) > 0.0
        p = int(np.count_nonzero(inside & pos))
        plus += p
        minus += int(np.count_nonzero(inside)) - p
    return minus, plus


def mc_cut_volume(body: ImplicitBody, plane: AffineFunctional, n: int, seed: int = 0,
                  workers: int = 1, backend: str | None = None) -> McEstimate:
    """Estimate the volumes of ``body`` on each side of ``plane``.

    ``side_plus`` collects points with ``plane(x) > 0``, ``side_minus`` the
    rest. Sample ``i`` depends only on ``(seed, i)``, so results are
    bit-identical for any ``workers`` and either kernel backend.
    ``stderr`` is the larger of the two per-side binomial standard errors.
    """
    if n <= 0:
        raise ValueError("sample count must be positive")
    if plane.dimension != body.dimension:
        raise ValueError("plane and body dimensions differ")
    key = _mc_py.stream_key(seed)
    lower = np.asarray(body.lower, dtype=np.float64)
    width = np.asarray(body.upper, dtype=np.float64) - lower
    coef = np.asarray(plane.coef, dtype=np.float64)

    if body.kind == _mc_py.KIND_GENERIC:
        def work(span):
            return _generic_count(body, plane, key, *span)
    else:
        impl = _backend.get(backend)
        params = np.asarray(body.params, dtype=np.float64)

        def work(span):
            return impl.count_range(body.kind, params, lower, width, coef,
                                    plane.offset, key, *span)

    spans = [(lo, min(lo + CHUNK, n)) for lo in range(0, n, CHUNK)]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(work, spans))
    else:
        counts = [work(s) for s in spans]
    hits_minus = sum(c[0] for c in counts)
    hits_plus = sum(c[1] for c in counts)

    box = body.box_volume
    est = McEstimate(box * hits_minus / n, box * hits_plus / n, 0.0, n, seed,
                     hits_minus, hits_plus, box)
    return McEstimate(est.side_minus, est.side_plus,
                      max(est.stderr_minus, est.stderr_plus), n, seed,
                      hits_minus, hits_plus, box)


def mc_volume(body: ImplicitBody, n: int, seed: int = 0, **kw) -> tuple[float, float]:
    """Whole-body volume estimate and its standard error."""
    dim = body.dimension
    # a plane far outside the box puts every hit on one side
    far = AffineFunctional((1.0,) + (0.0,) * (dim - 1), body.upper[0] + 1.0)
    est = mc_cut_volume(body, far, n, seed, **kw)
    return est.total, est.stderr_total
