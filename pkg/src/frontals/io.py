"""Text export: curvature fields as CSV, meshes and frames as OBJ, reports as JSON.

All float formatting uses Python's shortest round-trip repr, so files are
bit-stable across runs on one platform and parse back to identical doubles.
Unbounded field entries appear as ``inf``/``-inf``/``nan`` tokens.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

FIELD_HEADER = "u,v,lambda,K,H,Gamma,GammaTilde,kappa1,kappa2"


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def write_field_csv(samples, path) -> None:
    lines = [FIELD_HEADER]
    for s in samples:
        lines.append(",".join(format_float(x) for x in s.row()))
    Path(path).write_text("\n".join(lines) + "\n")


def write_frame_csv(rows, path) -> None:
    header = "u,v,e1x,e1y,e1z,e2x,e2y,e2z"
    lines = [header]
    for (u, v, e1, e2) in rows:
        vals = [u, v, *e1, *e2]
        lines.append(",".join(format_float(float(x)) for x in vals))
    Path(path).write_text("\n".join(lines) + "\n")


def mesh_grid_obj(points: np.ndarray, nu: int, nv: int) -> str:
    """Triangulated OBJ text for an (nu x nv) grid of 3D points.

    Triangles wind consistently: each quad splits into (p, p+1, q+1) and
    (p, q+1, q) with q directly above p.
    """
    out = []
    for p in points.reshape(-1, 3):
        out.append(f"v {format_float(p[0])} {format_float(p[1])} {format_float(p[2])}")
    def vid(i, j):
        return i * nv + j + 1
    for i in range(nu - 1):
        for j in range(nv - 1):
            a, b = vid(i, j), vid(i, j + 1)
            c, d = vid(i + 1, j + 1), vid(i + 1, j)
            out.append(f"f {a} {b} {c}")
            out.append(f"f {a} {c} {d}")
    return "\n".join(out) + "\n"


def write_mesh_obj(points: np.ndarray, nu: int, nv: int, path) -> None:
    Path(path).write_text(mesh_grid_obj(points, nu, nv))


def frame_segments_obj(rows, scale: float = 0.05) -> str:
    """OBJ line segments visualizing a frame field: two short segments per
    sample, one along each frame vector."""
    verts: list[str] = []
    lines: list[str] = []
    idx = 1
    for (p, e1, e2) in rows:
        p = np.asarray(p, dtype=float)
        for e in (np.asarray(e1), np.asarray(e2)):
            q = p + scale * e
            verts.append(f"v {format_float(p[0])} {format_float(p[1])} {format_float(p[2])}")
            verts.append(f"v {format_float(q[0])} {format_float(q[1])} {format_float(q[2])}")
            lines.append(f"l {idx} {idx + 1}")
            idx += 2
    return "\n".join(verts + lines) + "\n"


def write_json_report(obj, path) -> None:
    if hasattr(obj, "to_json_dict"):
        obj = obj.to_json_dict()
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
