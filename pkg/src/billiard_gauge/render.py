"""Deterministic SVG drawings of bodies and trajectories."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .billiards import Trajectory
from .body import Body

TWO_PI = 2.0 * math.pi


def _f(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _pt(x: float, y: float) -> str:
    # SVG's y axis points down
    return f"{_f(x)} {_f(-y)}"


def _arc_path(cx: float, cy: float, R: float, a0: float, span: float) -> str:
    def at(t):
        return _pt(cx + R * math.cos(t), cy + R * math.sin(t))

    r = _f(R)
    if span >= TWO_PI - 1e-12:
        mid = a0 + math.pi
        return f"M {at(a0)} A {r} {r} 0 0 0 {at(mid)} A {r} {r} 0 0 0 {at(a0)} Z"
    large = 1 if span > math.pi else 0
    # counterclockwise in the plane is the negative sweep once y is flipped
    return f"M {at(a0)} A {r} {r} 0 {large} 0 {at(a0 + span)}"


def render_svg(B: Body, trajectory: Optional[Trajectory] = None) -> str:
    pts = B.chain.sample(720)
    if trajectory is not None:
        pts = np.vstack([pts, [[v.x, v.y] for v in trajectory.vertices]])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    size = float(max(hi - lo))
    pad = 0.1 * size
    x0, y0 = lo[0] - pad, -(hi[1] + pad)
    w, h = hi[0] - lo[0] + 2 * pad, hi[1] - lo[1] + 2 * pad
    stroke = _f(0.004 * size)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(x0)} {_f(y0)} {_f(w)} {_f(h)}">',
        f'<g class="body" fill="none" stroke="black" stroke-width="{stroke}">',
    ]
    for a in B.chain.arcs:
        lines.append(f'<path class="arc" d="{_arc_path(a.center.x, a.center.y, a.radius, a.start_angle, a.span)}"/>')
    lines.append("</g>")
    corners = B.chain.corners
    if corners:
        lines.append('<g class="corners" fill="black">')
        for c in corners:
            lines.append(f'<circle cx="{_f(c.x)}" cy="{_f(-c.y)}" r="{_f(0.01 * size)}"/>')
        lines.append("</g>")
    if trajectory is not None:
        coords = " ".join(_pt(v.x, v.y).replace(" ", ",") for v in trajectory.vertices)
        lines.append(f'<polygon class="trajectory" fill="none" stroke="red" stroke-width="{stroke}" points="{coords}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
