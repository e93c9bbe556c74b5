"""Throughput of the Monte Carlo counting kernel, compiled vs numpy.

    python benchmarks/bench_mc.py [--samples 4000000] [--repeat 3]

Both backends must return identical hit counts; the script exits 1 otherwise.
"""

import argparse
import sys
import time

from lacuna.oracle import _backend
from lacuna.oracle.bodies import (AffineFunctional, ellipsoid_body, hyperboloid_body,
                                  paraboloid_body, tube_body)
from lacuna.oracle.montecarlo import mc_cut_volume

CASES = [
    ("tube k=1 m=1", tube_body(3, 1, 0.5), AffineFunctional((1, 0, 0, -0.1), 0.05)),
    ("tube k=3 m=3", tube_body(7, 3, 0.5), AffineFunctional((1, 0, 0, 0, 0, 0, 0, -0.2, 0, 0), 0.1)),
    ("ellipsoid N=5", ellipsoid_body([2, 1, 1, 0.5, 0.5]), AffineFunctional((1, 1, 0, 0, 0), 0.3)),
    ("paraboloid N=3", paraboloid_body(3, 2.0), AffineFunctional((-0.5, 0, 1), 0.7)),
    ("hyperboloid N=5", hyperboloid_body(5, 2.5), AffineFunctional((1, 0, 0, 0, 0), 1.7)),
]


def best_time(body, plane, samples, backend, repeat):
    best, est = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        est = mc_cut_volume(body, plane, samples, seed=1, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, est


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=4_000_000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    backends = sorted(_backend.BACKENDS)
    if "compiled" not in backends:
        print("compiled kernel not built; timing the numpy backend only")
    print(f"{'case':<18}" + "".join(f"{b + ' [Ms/s]':>18}" for b in backends) + f"{'speedup':>10}")
    mismatch = False
    for name, body, plane in CASES:
        rates, counts = {}, set()
        for b in backends:
            t, est = best_time(body, plane, args.samples, b, args.repeat)
            rates[b] = args.samples / t / 1e6
            counts.add((est.hits_minus, est.hits_plus))
        mismatch |= len(counts) > 1
        speedup = rates["compiled"] / rates["python"] if "compiled" in rates else float("nan")
        print(f"{name:<18}" + "".join(f"{rates[b]:>18.2f}" for b in backends) + f"{speedup:>9.1f}x"
              + ("  COUNTS DIFFER" if len(counts) > 1 else ""))
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
