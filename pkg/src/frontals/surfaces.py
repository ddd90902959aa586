"""Surface definitions: TOML documents, validation, and the built-in gallery.

A surface is three formulas in (u, v), an optional explicit unit normal,
a rectangular parameter domain and an ``adapted`` flag asserting that the
singular set is the u-axis with null direction along v.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from . import expr
from .expr import Expr

__all__ = ["SurfaceDef", "load_surface", "loads_surface", "gallery_names", "gallery_surface",
           "ADAPTED_GALLERY"]


@dataclass(frozen=True)
class SurfaceDef:
    """A parametric surface given by formulas, plus domain metadata."""

    name: str
    components: tuple[Expr, Expr, Expr]
    gauss_components: tuple[Expr, Expr, Expr] | None
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    adapted: bool

    def __post_init__(self):
        for tree in self.components:
            vars_ = expr.variables_of(tree)
            if not vars_ <= {"u", "v"}:
                raise ValueError(
                    f"surface {self.name!r} uses variables {sorted(vars_ - {'u', 'v'})}"
                )
            if expr.uses_function(tree, "abs"):
                raise ValueError("abs is only allowed in curve formulas, not surfaces")
        if self.gauss_components is not None:
            for tree in self.gauss_components:
                if not expr.variables_of(tree) <= {"u", "v"}:
                    raise ValueError("normal components may only use u, v")
        if self.u_range[0] >= self.u_range[1] or self.v_range[0] >= self.v_range[1]:
            raise ValueError("parameter ranges must be nondegenerate intervals")


def _parse_surface_table(table: dict, fallback_name: str = "surface") -> SurfaceDef:
    comps = tuple(expr.parse(table[k]) for k in ("x", "y", "z"))
    gauss = None
    if "nu_x" in table or "nu_y" in table or "nu_z" in table:
        try:
            gauss = tuple(expr.parse(table[k]) for k in ("nu_x", "nu_y", "nu_z"))
        except KeyError as exc:
            raise ValueError("explicit normal requires all of nu_x, nu_y, nu_z") from exc
    return SurfaceDef(
        name=str(table.get("name", fallback_name)),
        components=comps,
        gauss_components=gauss,
        u_range=tuple(float(x) for x in table.get("u_range", (-1.0, 1.0))),
        v_range=tuple(float(x) for x in table.get("v_range", (-1.0, 1.0))),
        adapted=bool(table.get("adapted", False)),
    )


def loads_surface(text: str, fallback_name: str = "surface") -> SurfaceDef:
    doc = _toml.loads(text)
    if "surface" not in doc:
        raise ValueError("TOML document must contain a [surface] table")
    return _parse_surface_table(doc["surface"], fallback_name)


def load_surface(path: str | Path) -> SurfaceDef:
    p = Path(path)
    return loads_surface(p.read_text(), fallback_name=p.stem)


# -- built-in gallery ---------------------------------------------------------

def _gallery_dir():
    return resources.files("frontals") / "gallery"


def gallery_names() -> list[str]:
    return sorted(p.name[:-5] for p in _gallery_dir().iterdir() if p.name.endswith(".toml"))


def gallery_surface(name: str) -> SurfaceDef:
    res = _gallery_dir() / f"{name}.toml"
    try:
        text = res.read_text()
    except FileNotFoundError:
        raise KeyError(
            f"no gallery surface {name!r}; available: {', '.join(gallery_names())}"
        ) from None
    return loads_surface(text, fallback_name=name)


# Adapted frontal charts used by the sweeping property checks; the remaining
# gallery entries (plane, sphere patch, flat frontal) are point controls.
ADAPTED_GALLERY = (
    "cuspidal-edge",
    "cuspidal-cross-cap",
    "cuspidal-s1",
    "five-half",
    "f1",
    "f2",
    "f3",
    "pure-tilt",
    "pure-umbilic",
)
