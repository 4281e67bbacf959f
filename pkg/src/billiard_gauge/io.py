"""JSON file formats and report serialization.

Body file:        {"centers": [[x, y], ...], "radius": r, "round_eps": e?}
Trajectory file:  {"vertices": [[x, y], ...]}
Point-set file:   {"points": [[x, y], ...]}  (a bare list of pairs is accepted too)

Reports are JSON lines with sorted keys, so identical inputs give identical bytes.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable

from . import __version__, kernels
from .billiards import Trajectory
from .body import Body, DiskPolygon, RoundedBody, build_disk_polygon, rounded
from .geom import GeometryError, Tolerance, Vec


def _pairs(obj: Any, what: str) -> list[tuple[float, float]]:
    if not isinstance(obj, list) or not obj:
        raise GeometryError(f"{what}: expected a non-empty list of [x, y] pairs")
    out = []
    for item in obj:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise GeometryError(f"{what}: malformed pair {item!r}")
        x, y = (float(v) for v in item)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GeometryError(f"{what}: non-finite coordinate")
        out.append((x, y))
    return out


def _read_json(path: str | os.PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def body_from_dict(d: dict, tol: Tolerance | None = None) -> Body:
    if not isinstance(d, dict) or "centers" not in d or "radius" not in d:
        raise GeometryError("body: need 'centers' and 'radius'")
    D = build_disk_polygon(_pairs(d["centers"], "centers"), float(d["radius"]), tol or Tolerance())
    if d.get("round_eps") is not None:
        return rounded(D, float(d["round_eps"]))
    return D


def body_to_dict(B: Body) -> dict:
    """Canonical form: surviving generators in boundary order."""
    D = B.base if isinstance(B, RoundedBody) else B
    out = {"centers": [[c.x, c.y] for c in D.centers], "radius": D.radius}
    if isinstance(B, RoundedBody):
        out["round_eps"] = B.eps
    return out


def load_body(path, tol: Tolerance | None = None) -> Body:
    return body_from_dict(_read_json(path), tol)


def load_trajectory(path) -> Trajectory:
    d = _read_json(path)
    if not isinstance(d, dict) or "vertices" not in d:
        raise GeometryError("trajectory: need 'vertices'")
    return Trajectory(tuple(Vec(x, y) for x, y in _pairs(d["vertices"], "vertices")))


def trajectory_to_dict(T: Trajectory) -> dict:
    return {"vertices": [[v.x, v.y] for v in T.vertices]}


def load_points(path) -> list[tuple[float, float]]:
    d = _read_json(path)
    if isinstance(d, dict):
        d = d.get("points", d.get("vertices"))
    return _pairs(d, "points")


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Vec):
        return [obj.x, obj.y]
    if isinstance(obj, Trajectory):
        return trajectory_to_dict(obj)
    if isinstance(obj, (DiskPolygon, RoundedBody)):
        return body_to_dict(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def provenance(seed: int | None, tol: Tolerance, **extra) -> dict:
    return {
        "version": __version__,
        "backend": kernels.BACKEND,
        "seed": seed,
        "tolerances": {"eps_geom": tol.eps_geom, "eps_angle": tol.eps_angle},
        **extra,
    }


def dumps_lines(records: Iterable[Any]) -> str:
    return "".join(json.dumps(to_jsonable(r), sort_keys=True, allow_nan=False) + "\n" for r in records)


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
