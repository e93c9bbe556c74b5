"""Command-line front end.

Every subcommand writes JSON (or CSV where noted) to stdout or ``--output``.
Relative output paths are resolved against ``$LACUNA_OUTPUT_DIR`` when set.
Exit status: 0 on success, 1 when a requested check fails or a computation
raises, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import classical, fitter, tube
from .errors import LacunaError
from .exact import format_rational, parse_rational
from .oracle import _backend
from .oracle.integrals import quad_dvdb
from .oracle.montecarlo import mc_cut_volume

OUTPUT_DIR_ENV = "LACUNA_OUTPUT_DIR"
LOW_POWER_SAMPLES = 100_000


def _epsilon(text: str) -> Fraction:
    try:
        eps = parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"epsilon must be an exact rational 'p/q', got {text!r}")
    if not 0 < eps < 1:
        raise argparse.ArgumentTypeError(f"epsilon must lie in (0, 1), got {text}")
    return eps


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return v


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    path = output
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _spec(args) -> tube.TubeSpec:
    return tube.TubeSpec(args.k, args.m, args.eps)


# ---------------------------------------------------------------- subcommands

def cmd_tube_poly(args) -> int:
    spec = _spec(args)
    dvdb = tube.tube_dvdb(spec)
    cut = tube.tube_cut_poly(spec)
    out = {
        "k": spec.k, "m": spec.m, "epsilon": format_rational(spec.epsilon),
        "N": spec.N, "pi_grade": spec.pi_grade,
        "degree": cut.degree(), "terms": len(cut),
        "cut_poly": cut.to_json(), "dvdb": dvdb.to_json(),
    }
    _emit(_json(out), args.output)
    return 0


def cmd_tube_cut(args) -> int:
    spec = _spec(args)
    nf = tube.NormalForm(args.a, args.b)
    vol = tube.tube_volumes(spec, nf, tol=args.tol)
    out = {"k": spec.k, "m": spec.m, "epsilon": format_rational(spec.epsilon),
           "exact": vol.to_json()}
    if args.samples:
        est = mc_cut_volume(spec.body(), tube.Hyperplane.from_normal_form(spec, nf.a, nf.b)
                            .functional(), args.samples, args.seed, workers=args.workers)
        out["monte_carlo"] = est.to_json()
    _emit(_json(out), args.output)
    return 0


def _lacuna_points(spec, rng, count):
    """``count`` points drawn uniformly from the lacuna box, rejecting outside ones."""
    eps = float(spec.epsilon)
    bmax = math.sqrt(1 - eps)
    pts = []
    while len(pts) < count:
        a, b = rng.uniform(0, bmax / eps), rng.uniform(0, bmax)
        if tube.in_lacuna(spec, tube.NormalForm(a, b)):
            pts.append((float(a), float(b)))
    return pts


def _structure_check(spec) -> dict:
    q = tube.tube_dvdb(spec)
    even = all(i % 2 == 0 and j % 2 == 0 for (i, j) in q.terms)
    degree_ok = all(i + j <= 2 * (spec.k - 1) for (i, j) in q.terms)
    grade_ok = all(c.grades == {spec.pi_grade} for c in q.terms.values())
    return {"name": f"structure k={spec.k} m={spec.m}",
            "status": "pass" if even and degree_ok and grade_ok else "fail",
            "even": even, "degree_ok": degree_ok, "grade_ok": grade_ok}


def _mc_check(name, exact_value, est_value, stderr, samples, sigmas=3.0) -> dict:
    dev = abs(exact_value - est_value)
    if samples < LOW_POWER_SAMPLES:
        status = "low-power"
    else:
        status = "pass" if dev <= sigmas * stderr else "fail"
    return {"name": name, "status": status, "exact": exact_value, "estimate": est_value,
            "deviation": dev, "bound": sigmas * stderr}


def run_verify(k_values, m_values, eps, points, samples, seed, tol, workers=1) -> dict:
    rng = np.random.default_rng(seed)
    checks = []
    for k in k_values:
        for m in m_values:
            spec = tube.TubeSpec(k, m, eps)
            checks.append(_structure_check(spec))

            q = tube.tube_dvdb(spec)
            worst = 0.0
            for a, b in _lacuna_points(spec, rng, points):
                exact = float(q.evaluate(a, b))
                worst = max(worst, abs(quad_dvdb(spec, a, b) - exact) / abs(exact))
            checks.append({"name": f"exact-vs-quadrature k={k} m={m}",
                           "status": "pass" if worst <= tol else "fail",
                           "max_rel_deviation": worst, "tolerance": tol, "points": points})

            body = spec.body()
            a, b = 0.1, 0.05
            vol = tube.tube_volumes(spec, tube.NormalForm(a, b))
            plane = tube.Hyperplane.from_normal_form(spec, a, b).functional()
            est = mc_cut_volume(body, plane, samples, seed, workers=workers)
            # x_1 - a y_1 - b < 0 at the origin, so the bigger part is side_minus
            checks.append(_mc_check(f"exact-vs-monte-carlo k={k} m={m} bigger",
                                    vol.bigger, est.side_minus, est.stderr_minus, samples))
            checks.append(_mc_check(f"exact-vs-monte-carlo k={k} m={m} smaller",
                                    vol.smaller, est.side_plus, est.stderr_plus, samples))

            half = tube.tube_volumes(spec, tube.NormalForm(0.3, 0.0))
            plane = tube.Hyperplane.from_normal_form(spec, 0.3, 0.0).functional()
            est = mc_cut_volume(body, plane, samples, (seed + 1) % 2 ** 64, workers=workers)
            checks.append(_mc_check(f"symmetry k={k} m={m}", half.total / 2,
                                    est.side_minus, est.stderr_minus, samples))
    failed = sum(c["status"] == "fail" for c in checks)
    return {"epsilon": format_rational(eps), "samples": samples, "seed": seed,
            "checks": checks, "failed": failed,
            "low_power": sum(c["status"] == "low-power" for c in checks),
            "passed": failed == 0}


def cmd_verify(args) -> int:
    # max defaults stay None in the parser so argparse sees "--k 1 --k-max 2" as a conflict
    ks = [args.k] if args.k else list(range(1, (args.k_max or 2) + 1))
    ms = [args.m] if args.m else list(range(1, (args.m_max or 2) + 1))
    report = run_verify(ks, ms, args.eps, args.points, args.samples, args.seed,
                        args.tol, args.workers)
    _emit(_json(report), args.output)
    return 0 if report["passed"] else 1


def _tube_samples(spec, grid) -> fitter.SampleSet:
    eps = float(spec.epsilon)
    bmax = math.sqrt(1 - eps)
    # square inside the lacuna: (a*eps + b) <= bmax when a <= bmax/(2 eps), b <= bmax/2
    a_grid = np.linspace(0, bmax / (2 * eps), grid)
    b_grid = np.linspace(0, bmax / 2, grid)
    cut = tube.tube_cut_poly(spec)
    return fitter.SampleSet.from_function(
        lambda a, b: np.array([float(cut.evaluate(x, y)) for x, y in zip(a, b)]),
        [a_grid, b_grid], ("a", "b"),
        f"tube P k={spec.k} m={spec.m} eps={format_rational(spec.epsilon)}")


def cmd_fit(args) -> int:
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            samples = fitter.SampleSet.from_csv(fh.read(), args.input)
    else:
        samples = _tube_samples(_spec(args), args.grid)
    if args.format == "csv":
        _emit(samples.to_csv(), args.output)
        return 0
    det = fitter.detect_degree(samples, args.dmax, args.tol)
    out = {"description": samples.description, "samples": len(samples), **det.to_json()}
    _emit(_json(out), args.output)
    return 0


def cmd_classical(args) -> int:
    N = args.N
    rows = []
    out: dict = {"body": args.body, "N": N}
    if args.body in ("ball", "hyperboloid"):
        if args.body == "ball":
            hs = np.linspace(-1, 1, args.grid)
            rows = [(float(h), classical.ball_cap(N, float(h))) for h in hs]
        if N % 2:
            poly = (classical.ball_cap_poly(N) if args.body == "ball"
                    else classical.hyperboloid_cap_poly(N))
            out.update(certificate=classical.Certificate.POLYNOMIAL.value,
                       polynomial=poly.to_json())
            if args.body == "hyperboloid":
                hs = np.linspace(1, 3, args.grid)
                rows = [(float(h), poly(float(h))) for h in hs]
        elif args.body == "hyperboloid":
            raise LacunaError("hyperboloid caps are tabulated for odd N only")
        else:
            out["certificate"] = classical.Certificate.TRANSCENDENTAL_SUSPECTED.value
    else:  # paraboloid
        cs = np.linspace(-1, 1, args.grid)
        ds = np.linspace(0, 1, args.grid)
        vol = fitter.SampleSet.from_function(
            lambda c, d: np.array([classical.paraboloid_cut(N, [x] + [0.0] * (N - 2), y).volume
                                   for x, y in zip(c, d)]),
            [cs, ds], ("c", "d"), f"paraboloid segment volume N={N}")
        cert = classical.paraboloid_cut(N, [0.0] * (N - 1), 1.0).certificate
        det_v = fitter.detect_degree(vol, args.dmax, args.tol)
        det_sq = fitter.detect_degree(vol.map_values(np.square, "squared volume"),
                                      max(args.dmax, N + 1), args.tol)
        out.update(certificate=cert.value,
                   volume_fit={"detected": det_v.to_json()["detected"],
                               "max_abs_residual": det_v.report.max_abs_residual},
                   square_fit={"detected": det_sq.to_json()["detected"],
                               "max_abs_residual": det_sq.report.max_abs_residual})
        rows = [tuple(x) + (v,) for x, v in vol.points]
    if args.format == "csv":
        header = ["c", "d", "value"] if args.body == "paraboloid" else ["h", "value"]
        _emit(_csv(header, rows), args.output)
    else:
        _emit(_json(out), args.output)
    return 0


def newton_detection(samples: int, dmax: int, tol: float) -> fitter.Detection:
    b = np.linspace(-0.95, 0.95, samples)
    s = fitter.SampleSet(b[:, None], fitter.disk_segment_area(b), ("b",),
                         "disk segment area")
    return fitter.detect_degree(s, dmax, tol)


def cmd_newton_demo(args) -> int:
    det = newton_detection(args.samples, args.dmax, args.tol)
    if args.format == "csv":
        _emit(_csv(["degree", "max_abs_residual", "rms_residual"],
                   [(r.degree, r.max_abs_residual, r.rms_residual) for r in det.history]),
              args.output)
    else:
        _emit(_json({"description": "disk segment area on [-0.95, 0.95]",
                     "samples": args.samples, **det.to_json()}), args.output)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lacuna", description=__doc__.splitlines()[0])
    p.add_argument("--backend", choices=sorted(_backend.BACKENDS), default=None,
                   help="Monte Carlo kernel (default: compiled when available)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=False):
        sp.add_argument("--output", "-o", default=None)
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("tube-poly", help="exact dV/db and cut polynomial P")
    sp.add_argument("--k", type=_positive_int, default=1)
    sp.add_argument("--m", type=_positive_int, default=1)
    sp.add_argument("--eps", type=_epsilon, default=Fraction(1, 2))
    common(sp)
    sp.set_defaults(func=cmd_tube_poly)

    sp = sub.add_parser("tube-cut", help="two cut volumes at a normal-form hyperplane")
    sp.add_argument("--k", type=_positive_int, default=1)
    sp.add_argument("--m", type=_positive_int, default=1)
    sp.add_argument("--eps", type=_epsilon, default=Fraction(1, 2))
    sp.add_argument("--a", type=float, default=0.0)
    sp.add_argument("--b", type=float, default=0.0)
    sp.add_argument("--tol", type=_positive_float, default=1e-12)
    sp.add_argument("--samples", type=int, default=0, help="Monte Carlo cross-check size")
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--workers", type=_positive_int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_tube_cut)

    sp = sub.add_parser("verify", help="exact vs quadrature vs Monte Carlo")
    kg = sp.add_mutually_exclusive_group()
    kg.add_argument("--k", type=_positive_int)
    kg.add_argument("--k-max", type=_positive_int, help="default 2")
    mg = sp.add_mutually_exclusive_group()
    mg.add_argument("--m", type=_positive_int)
    mg.add_argument("--m-max", type=_positive_int, help="default 2")
    sp.add_argument("--eps", type=_epsilon, default=Fraction(1, 2))
    sp.add_argument("--points", type=_positive_int, default=20)
    sp.add_argument("--samples", type=_positive_int, default=1_000_000)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--tol", type=_positive_float, default=1e-9)
    sp.add_argument("--workers", type=_positive_int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("fit", help="polynomial degree detection on samples")
    sp.add_argument("--input", help="CSV with header 'var..,value'; default: tube P samples")
    sp.add_argument("--k", type=_positive_int, default=2)
    sp.add_argument("--m", type=_positive_int, default=1)
    sp.add_argument("--eps", type=_epsilon, default=Fraction(1, 2))
    sp.add_argument("--grid", type=_positive_int, default=12)
    sp.add_argument("--dmax", type=int, default=8)
    sp.add_argument("--tol", type=_positive_float, default=1e-9)
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("classical", help="quadric cut volumes and certificates")
    sp.add_argument("--body", choices=("ball", "paraboloid", "hyperboloid"), required=True)
    sp.add_argument("--N", type=_positive_int, required=True)
    sp.add_argument("--grid", type=_positive_int, default=25)
    sp.add_argument("--dmax", type=int, default=10)
    sp.add_argument("--tol", type=_positive_float, default=1e-9)
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_classical)

    sp = sub.add_parser("newton-demo", help="residual floor of the disk segment area")
    sp.add_argument("--dmax", type=int, default=15)
    sp.add_argument("--tol", type=_positive_float, default=1e-6)
    sp.add_argument("--samples", type=_positive_int, default=200)
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_newton_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "classical" and args.body == "paraboloid" and args.N < 2:
        parser.error("paraboloid needs --N >= 2")
    if getattr(args, "dmax", 0) < 0:
        parser.error("--dmax must be non-negative")
    previous = _backend.DEFAULT
    if args.backend:
        _backend.DEFAULT = args.backend
    try:
        return args.func(args)
    except LacunaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        _backend.DEFAULT = previous


if __name__ == "__main__":
    sys.exit(main())
