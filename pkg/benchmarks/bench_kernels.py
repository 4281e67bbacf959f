"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--markdown results.md]

Times each kernel on fixed seeded inputs with both backends and prints a
table of best-of-``repeat`` wall times. The end-to-end row runs a full solve
in a subprocess with ``BILLIARD_GAUGE_PURE`` toggled.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from billiard_gauge import _pykernels as py
from billiard_gauge.body import build_disk_polygon
from billiard_gauge.solver import oracle_grid

try:
    from billiard_gauge import _ckernels as cy
except ImportError:  # pragma: no cover
    sys.exit("compiled extension not built; run `pip install --no-build-isolation -e .` first")


def _cases():
    rng = np.random.default_rng(0)
    pts100 = rng.normal(size=(100, 2))
    pts2000 = rng.normal(size=(2000, 2))
    C = rng.uniform(-0.45, 0.45, (6, 2))
    F = rng.uniform(-1, 1, (3, 2))
    D = build_disk_polygon(C, 1.0)
    arcs = D.chain.array
    phis = rng.uniform(0, 2 * np.pi, (1000, 3))
    phi, half = oracle_grid(D, 150)
    P, rad = py.boundary_points(arcs, phi)
    N = np.column_stack([np.cos(phi), np.sin(phi)])
    return [
        ("minidisk, 100 points", lambda k: k.minidisk(pts100), 200),
        ("minidisk, 2000 points", lambda k: k.minidisk(pts2000), 20),
        ("blocking_scale, 3 points x 6 centers", lambda k: k.blocking_scale(F, C, 1.0), 50),
        ("residual3, 1000 triples", lambda k: [k.residual3(arcs, t) for t in phis], 5),
        (f"oracle_triples, {len(P)}-point grid", lambda k: k.oracle_triples(P, N, rad, half, 1.5), 1),
    ]


SOLVE = ("import time;from billiard_gauge.body import build_disk_polygon;"
         "from billiard_gauge.solver import shortest_trajectory;"
         "D=build_disk_polygon([(0.9,0),(-0.45,0.779),(-0.45,-0.779)],1.0);"
         "t=time.perf_counter();shortest_trajectory(D);print(time.perf_counter()-t)")


def _solve_time(pure: bool, repeat: int) -> float:
    env = dict(os.environ, BILLIARD_GAUGE_PURE="1" if pure else "0")
    times = []
    for _ in range(repeat):
        out = subprocess.run([sys.executable, "-c", SOLVE], env=env, capture_output=True, text=True, check=True)
        times.append(float(out.stdout))
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--markdown", help="also write the table to this file")
    ap.add_argument("--json", help="write raw timings as JSON")
    args = ap.parse_args(argv)

    rows = []
    for name, fn, number in _cases():
        t = {}
        for label, mod in (("python", py), ("compiled", cy)):
            t[label] = min(timeit.repeat(lambda: fn(mod), number=number, repeat=args.repeat)) / number
        rows.append((name, t["python"], t["compiled"]))
    rows.append(("full solve, 3-center non-fat body", _solve_time(True, min(args.repeat, 3)),
                 _solve_time(False, min(args.repeat, 3))))

    head = "| case | python (ms) | compiled (ms) | speedup |\n|---|---:|---:|---:|"
    lines = [head] + [f"| {n} | {p * 1e3:.3f} | {c * 1e3:.3f} | {p / c:.1f}x |" for n, p, c in rows]
    table = "\n".join(lines)
    print(table)
    if args.markdown:
        with open(args.markdown, "w", encoding="utf-8") as fh:
            fh.write(table + "\n")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([{"case": n, "python_s": p, "compiled_s": c} for n, p, c in rows], fh, indent=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
