"""Command-line front end.

Subcommands: ``classify``, ``invariants``, ``field``, ``mesh``, ``frames``,
``ribaucour`` and ``verify``.  Inputs come from the built-in gallery or TOML
surface files; outputs are JSON (reports), CSV (fields, frames) and OBJ
(meshes).  Exit codes: 0 success, 1 numeric or verification failure,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import acceptance, io as io_mod
from .core import DEGENERATE, FrontalChart
from .curvature import curvature_sample, field_grid, limit_profile
from .frames import curvature_line_frame
from .invariants import edge_invariants, umbilic_analysis
from .jets import NumericPolicy
from .ribaucour import ProfileCurve, build_ribaucour_pair, verify_ribaucour
from .surfaces import gallery_names, gallery_surface, load_surface

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _policy(args) -> NumericPolicy:
    policy = NumericPolicy()
    scale = getattr(args, "tol_scale", 1.0) or 1.0
    return policy.scaled(scale) if scale != 1.0 else policy


def _chart_from_args(args) -> FrontalChart:
    order = getattr(args, "order", None) or 6
    if not 2 <= order <= 12:
        raise UsageError(f"--order must lie in [2, 12], got {order}")
    if args.gallery:
        definition = gallery_surface(args.gallery)
    elif args.surface:
        definition = load_surface(args.surface)
    else:
        raise UsageError("one of --gallery or --surface is required")
    return FrontalChart.from_def(definition, policy=_policy(args), order=order)


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nu, nv = text.lower().split("x")
        nu, nv = int(nu), int(nv)
    except ValueError:
        raise UsageError(f"--grid expects NUxNV, got {text!r}") from None
    if nu < 2 or nv < 2:
        raise UsageError(f"grid resolutions must be >= 2, got {nu}x{nv}")
    return nu, nv


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_classify(args) -> int:
    chart = _chart_from_args(args)
    u0s = [args.u0] if args.u0 is not None else list(chart.sample_us(args.samples))
    reports = [chart.classify_singular_point(float(u)) for u in u0s]
    payload = [r.to_json_dict() for r in reports]
    _emit(json.dumps(payload if len(payload) > 1 else payload[0],
                     indent=2, sort_keys=True), args.out)
    bad = [r for r in reports if r.verdict == DEGENERATE]
    if bad and not args.allow_degenerate:
        sys.stderr.write(
            f"degenerate singular points at u0 = "
            f"{[r.point[0] for r in bad]} (use --allow-degenerate to ignore)\n"
        )
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_invariants(args) -> int:
    chart = _chart_from_args(args)
    u0s = [args.u0] if args.u0 is not None else list(chart.sample_us(args.samples))
    rows = []
    for u0 in u0s:
        prof = edge_invariants(chart, float(u0))
        rows.append(prof.to_json_dict())
    if args.out:
        _emit(json.dumps(rows if len(rows) > 1 else rows[0], indent=2,
                         sort_keys=True), args.out)
    else:
        cols = ("u0", "kappa_nu", "kappa_c", "kappa_t", "r_b", "r_c")
        widths = {k: max(len(k), 12) for k in cols}
        print("  ".join(k.rjust(widths[k]) for k in cols))
        for row in rows:
            cells = []
            for k in cols:
                val = row[k]
                cells.append(("-" if val is None else f"{val:+.6f}").rjust(widths[k]))
            print("  ".join(cells))
    return EXIT_OK


def cmd_field(args) -> int:
    chart = _chart_from_args(args)
    nu_pts, nv_pts = _parse_grid(args.grid)
    jobs = max(1, args.jobs)
    if jobs == 1:
        samples = field_grid(chart, nu_pts, nv_pts)
    else:
        from concurrent.futures import ProcessPoolExecutor

        us = np.linspace(chart.u_range[0], chart.u_range[1], nu_pts)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = pool.map(_field_row, ((chart, float(u), nv_pts) for u in us))
            samples = [s for row in rows for s in row]
    io_mod.write_field_csv(samples, args.out or "field.csv")
    return EXIT_OK


def _field_row(job):
    chart, u, nv_pts = job
    vs = np.linspace(chart.v_range[0], chart.v_range[1], nv_pts)
    return [curvature_sample(chart, (u, float(v))) for v in vs]


def cmd_mesh(args) -> int:
    chart = _chart_from_args(args)
    nu_pts, nv_pts = _parse_grid(args.grid)
    us = np.linspace(chart.u_range[0], chart.u_range[1], nu_pts)
    vs = np.linspace(chart.v_range[0], chart.v_range[1], nv_pts)
    pts = np.empty((nu_pts, nv_pts, 3))
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            pts[i, j] = chart.f((float(u), float(v)), 0).value()
    io_mod.write_mesh_obj(pts, nu_pts, nv_pts, args.out or "mesh.obj")
    return EXIT_OK


def cmd_frames(args) -> int:
    chart = _chart_from_args(args)
    nu_pts, nv_pts = _parse_grid(args.grid)
    us = np.linspace(chart.u_range[0], chart.u_range[1], nu_pts)
    vs = np.linspace(chart.v_range[0], chart.v_range[1], nv_pts)
    csv_rows, obj_rows = [], []
    for u in us:
        for v in vs:
            try:
                fr = curvature_line_frame(chart, (float(u), float(v)), args.method)
            except Exception:
                continue
            csv_rows.append((u, v, fr.e1, fr.e2))
            obj_rows.append((chart.f((float(u), float(v)), 0).value(), fr.e1, fr.e2))
    out = args.out or "frames.csv"
    if out.endswith(".obj"):
        Path(out).write_text(io_mod.frame_segments_obj(obj_rows))
    else:
        io_mod.write_frame_csv(csv_rows, out)
    return EXIT_OK


def _load_ribaucour_config(path: str):
    import sys as _sys
    if _sys.version_info >= (3, 11):
        import tomllib as _toml
    else:
        import tomli as _toml
    doc = _toml.loads(Path(path).read_text())
    try:
        prof_tab = doc["profile"]
        rho_tab = doc["rho"]
        profile = ProfileCurve.from_formulas(
            prof_tab["l"], prof_tab["theta"],
            tuple(prof_tab["start"]), tuple(prof_tab["range"]),
        )
        return profile, rho_tab["expr"]
    except KeyError as exc:
        raise UsageError(f"ribaucour config misses key {exc}") from None


def cmd_ribaucour_impl(args) -> int:
    profile, rho = _load_ribaucour_config(args.config)
    pair = build_ribaucour_pair(profile, rho)
    nu_pts, nv_pts = _parse_grid(args.grid)
    report = verify_ribaucour(pair, grid=(nu_pts, nv_pts))
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    us = np.linspace(profile.domain[0] + 1e-6, profile.domain[1] - 1e-6, nu_pts)
    vs = np.linspace(0.0, 2 * math.pi, nv_pts)
    for chart, tag in ((pair.f, "surface"), (pair.f_tilde, "transform")):
        pts = np.empty((nu_pts, nv_pts, 3))
        for i, u in enumerate(us):
            for j, v in enumerate(vs):
                pts[i, j] = chart.f((float(u), float(v)), 0).value()
        io_mod.write_mesh_obj(pts, nu_pts, nv_pts, out_dir / f"{tag}.obj")
    pts = np.empty((nu_pts, nv_pts, 3))
    for i, u in enumerate(us):
        x, y = profile.gamma_value(float(u))
        for j, v in enumerate(vs):
            pts[i, j] = (x, y * math.cos(v), y * math.sin(v))
    io_mod.write_mesh_obj(pts, nu_pts, nv_pts, out_dir / "center.obj")
    io_mod.write_json_report(report, out_dir / "residuals.json")
    print(report.to_json())
    return EXIT_OK if report.max_residual() <= args.tol else EXIT_NUMERIC


def cmd_verify(args) -> int:
    results = acceptance.run_all(only=args.only, jobs=max(1, args.jobs))
    all_ok = True
    for res in results:
        print(res.line())
        if args.verbose:
            for d in res.details:
                print("       ", d)
        all_ok = all_ok and res.passed and res.within_time
    summary = {
        "passed": sum(1 for r in results if r.passed and r.within_time),
        "failed": sum(1 for r in results if not (r.passed and r.within_time)),
        "criteria": [r.to_json_dict() for r in results],
    }
    if args.out:
        Path(args.out).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"{summary['passed']} passed, {summary['failed']} failed")
    return EXIT_OK if all_ok else EXIT_NUMERIC


def _add_chart_args(p, with_grid=False):
    p.add_argument("--gallery", help=f"built-in surface ({', '.join(gallery_names())})")
    p.add_argument("--surface", help="TOML surface definition file")
    p.add_argument("--order", type=int, default=6, help="jet truncation order (2..12)")
    p.add_argument("--tol-scale", type=float, default=1.0,
                   help="scale factor applied to all numeric tolerances")
    p.add_argument("--out", help="output path (default: stdout or cwd)")
    if with_grid:
        p.add_argument("--grid", default="32x32", help="parameter grid NUxNV")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="frontals",
        description="Curvature, singular-point invariants and Ribaucour "
                    "transformations of frontal surfaces",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify singular points on the u-axis")
    _add_chart_args(p)
    p.add_argument("--u0", type=float, help="single axis point (default: sampled)")
    p.add_argument("--samples", type=int, default=9, help="number of axis samples")
    p.add_argument("--allow-degenerate", action="store_true")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("invariants", help="edge invariants along the singular curve")
    _add_chart_args(p)
    p.add_argument("--u0", type=float)
    p.add_argument("--samples", type=int, default=9)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("field", help="curvature field CSV on a parameter grid")
    _add_chart_args(p, with_grid=True)
    p.set_defaults(fn=cmd_field)

    p = sub.add_parser("mesh", help="triangulated OBJ mesh of the surface")
    _add_chart_args(p, with_grid=True)
    p.set_defaults(fn=cmd_mesh)

    p = sub.add_parser("frames", help="curvature-line frame field (CSV or OBJ)")
    _add_chart_args(p, with_grid=True)
    p.add_argument("--method", default="auto", choices=("auto", "principal", "axis"))
    p.set_defaults(fn=cmd_frames)

    p = sub.add_parser("ribaucour", help="build and verify a revolution pair")
    p.add_argument("--config", required=True, help="TOML with [profile] and [rho]")
    p.add_argument("--grid", default="64x64")
    p.add_argument("--out", help="output directory for meshes and report")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(fn=cmd_ribaucour_impl)

    p = sub.add_parser("verify", help="run the full verification suite")
    p.add_argument("--only", help=f"restrict to a group: {', '.join(acceptance.GROUPS)}")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write a JSON summary")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except KeyError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"numeric failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
