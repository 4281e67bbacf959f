"""Command-line entry point: ``billiard-gauge <verb> [options]``.

Exit status is 0 on success, 2 for bad input or domain errors (one line on
stderr starting with ``error:``), and 1 for anything unexpected.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional, Sequence

from . import io, verify
from .billiards import perimeter, shoot, validate_trajectory
from .body import DiskPolygon, inradius, rounded, width
from .geom import GeometryError, Tolerance, Vec
from .render import render_svg
from .solver import SolverConfig, brute_force_oracle, shortest_trajectory
from .translative import fits_in_translate


class UsageError(Exception):
    pass


def _pair(text: str) -> tuple[float, float]:
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    return x, y


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="billiard-gauge", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", "-o", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--eps-geom", type=float, default=1e-9)
    common.add_argument("--eps-angle", type=float, default=1e-7)
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, help_, body=True):
        sp = sub.add_parser(name, help=help_, parents=[common])
        if body:
            sp.add_argument("--body", "-b", required=True, help="body JSON file")
        return sp

    verb("build", "canonicalize a body file (prunes redundant centers)")
    sp = verb("fits", "translative fit of a point set")
    sp.add_argument("--points", required=True)
    verb("width", "minimal width and its chord")
    sp = verb("solve", "shortest trajectory of period 2 or 3")
    sp.add_argument("--n-starts", type=int, default=64)
    sp.add_argument("--cross-check", action="store_true", help="also run the blocking-polygon route")
    sp = verb("oracle", "brute-force grid oracle")
    sp.add_argument("--grid-n", type=int, default=200)
    sp = verb("validate", "check a trajectory file")
    sp.add_argument("--trajectory", "-t", required=True)
    sp = verb("shoot", "follow the reflection law")
    sp.add_argument("--start", type=_pair, required=True)
    sp.add_argument("--direction", type=_pair, required=True)
    sp.add_argument("--bounces", type=int, default=10)
    sp = verb("round", "rounded body file for a rounding radius")
    sp.add_argument("--eps", type=float, required=True)
    sp = verb("verify-g", "sample the Case B gap function", body=False)
    sp.add_argument("--lo", type=float, default=0.7)
    sp.add_argument("--hi", type=float, default=math.pi / 4 - 1e-9)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp = verb("trace", "replay the period-2 comparison chain on a billiard triangle")
    sp.add_argument("--trajectory", "-t", required=True)
    sp.add_argument("--allow-corners", action="store_true", help="use supporting disks at corner vertices")
    sp = verb("experiment", "seeded random experiments", body=False)
    sp.add_argument("--kind", choices=("theorem1", "theorem2", "sweep"), default="theorem1")
    sp.add_argument("--body", "-b", help="body file (theorem2 / sweep)")
    sp.add_argument("--n", type=int, default=200)
    sp.add_argument("--generator", choices=sorted(verify.GENERATORS), default="fat")
    sp.add_argument("--eps-fractions", default="0.01,0.05,0.1", help="eps as fractions of the inradius")
    sp.add_argument("--threads", type=int, default=None)
    sp = verb("render", "SVG drawing of a body and optional trajectory")
    sp.add_argument("--trajectory", "-t")
    return p


def _emit(args, records) -> None:
    text = io.dumps_lines(records)
    if args.out:
        io.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _disk_polygon(B) -> DiskPolygon:
    if not isinstance(B, DiskPolygon):
        raise UsageError("this verb needs an unrounded disk-polygon body")
    return B


def _run(args) -> None:
    tol = Tolerance(args.eps_geom, args.eps_angle)
    head = io.provenance(args.seed, tol, verb=args.verb)
    body_path = getattr(args, "body", None)
    B = io.load_body(body_path, tol) if body_path else None
    v = args.verb

    if v == "build":
        _emit(args, [io.body_to_dict(B)])
    elif v == "round":
        _emit(args, [io.body_to_dict(rounded(_disk_polygon(B), args.eps))])
    elif v == "fits":
        res = fits_in_translate(io.load_points(args.points), B, tol)
        _emit(args, [{**head, "result": res}])
    elif v == "width":
        w, u, (p, q) = width(B)
        _emit(args, [{**head, "width": w, "direction": u, "chord": [p, q]}])
    elif v == "solve":
        cfg = SolverConfig(n_starts=args.n_starts, seed=args.seed, cross_check=args.cross_check)
        rep = shortest_trajectory(B, cfg, tol)
        _emit(args, [{**head, "report": rep}])
    elif v == "oracle":
        res = brute_force_oracle(B, args.grid_n)
        _emit(args, [{**head, "grid_n": args.grid_n, "result": res}])
    elif v == "validate":
        T = io.load_trajectory(args.trajectory)
        rep = validate_trajectory(B, T, tol=tol)
        _emit(args, [{**head, "perimeter": perimeter(T), "report": rep}])
    elif v == "shoot":
        res = shoot(B, Vec(*args.start), Vec(*args.direction), args.bounces, tol=tol)
        _emit(args, [{**head, "result": res}])
    elif v == "verify-g":
        lo_min, dec = verify.check_g_bounds(args.lo, args.hi, args.samples)
        _emit(args, [{**head, "lo": args.lo, "hi": args.hi, "samples": args.samples,
                      "min": lo_min, "decreasing": dec, "above_0.4": lo_min > 0.4}])
    elif v == "trace":
        tr = verify.proof_trace(_disk_polygon(B), io.load_trajectory(args.trajectory),
                                require_smooth=not args.allow_corners, tol=tol)
        _emit(args, [{**head, "incenter": tr.incenter, "r_prime": tr.r_prime, "p_star": tr.p_star,
                      "virtual_vertices": tr.virtual_vertices,
                      "ledger": [{**io.to_jsonable(e), "slack": e.slack} for e in tr.ledger],
                      "all_hold": tr.all_hold}])
    elif v == "experiment":
        _experiment(args, head, B)
    elif v == "render":
        T = io.load_trajectory(args.trajectory) if args.trajectory else None
        svg = render_svg(B, T)
        if args.out:
            io.atomic_write(args.out, svg)
        else:
            sys.stdout.write(svg)


def _experiment(args, head, B) -> None:
    cfg = SolverConfig(seed=args.seed)
    if args.kind == "theorem1":
        st = verify.experiment_theorem1(args.n, args.seed, args.generator, cfg, args.threads)
        summary = {k: getattr(st, k) for k in ("n_bodies", "skipped", "period2_fraction",
                                               "max_violation", "trace_pass_rate")}
        _emit(args, [{**head, "kind": "theorem1", "generator": args.generator, **summary},
                     *({"body": r} for r in st.records)])
        return
    if B is None:
        raise UsageError(f"experiment --kind {args.kind} needs --body")
    D = _disk_polygon(B)
    if args.kind == "theorem2":
        rin = inradius(D)[0]
        try:
            fr = [float(t) for t in args.eps_fractions.split(",")]
        except ValueError:
            raise UsageError("--eps-fractions must be comma-separated numbers") from None
        if any(not 0 < f <= 1 for f in fr):
            raise UsageError("eps out of range: fractions must lie in (0, 1]")
        res = verify.experiment_theorem2(D, [f * rin for f in fr], cfg, args.threads)
    else:
        res = verify.conjecture_sweep(D, cfg=cfg, threads=args.threads)
    _emit(args, [{**head, "kind": args.kind, "inradius": res["inradius"],
                  "largest_eps_period2": res["largest_eps_period2"]},
                 *({"eps": r} for r in res["records"])])


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _run(args)
    except (GeometryError, UsageError, ValueError, OSError) as exc:
        reason = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {reason}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
