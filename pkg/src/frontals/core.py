"""Frontal charts: the frame {f_u, h, nu}, area density and classification.

For an adapted chart the parameter velocity f_v vanishes on the u-axis and
factors as f_v = v h with h smooth; {f_u, h, nu} is then a frame along the
surface and every curvature quantity is built from it.  The unit normal is
either supplied explicitly by the surface definition or constructed as
(f_u x h)/|f_u x h|, which orients det(f_u, h, nu) > 0.

Classification of an axis point inspects the function

    psi(t) = det(c'(t), nu(c(t)), d_v nu(c(t))),    c(t) = (u0 + t, 0),

whose vanishing order along the singular curve separates fronts
(psi(0) != 0), k-th order non-fronts (psi vanishing to exact order k) and
the pure-frontal case (psi identically zero along the curve).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .jets import (
    DEFAULT_ORDER,
    DEFAULT_POLICY,
    DegenerateFrame,
    Jet2,
    JetVec3,
    NotDivisible,
    NumericPolicy,
    det3,
)
from . import expr as expr_mod
from .surfaces import SurfaceDef, gallery_surface, load_surface

__all__ = [
    "NotAdapted",
    "NotFirstKind",
    "FrontalChart",
    "SingularPointReport",
    "REGULAR",
    "FIRST_KIND_FRONT",
    "K_NON_FRONT",
    "PURE_FRONTAL",
    "DEGENERATE",
]

REGULAR = "Regular"
FIRST_KIND_FRONT = "FirstKindFront"
K_NON_FRONT = "KNonFront"
PURE_FRONTAL = "PureFrontal"
DEGENERATE = "Degenerate"


class NotAdapted(ValueError):
    """Operation requires an adapted chart (singular curve on the u-axis)."""


class NotFirstKind(ValueError):
    """The singular point fails the first-kind transversality condition."""


class ExprSurface:
    """Surface map backed by expression trees."""

    def __init__(self, definition: SurfaceDef):
        self.definition = definition

    @property
    def name(self) -> str:
        return self.definition.name

    @property
    def adapted(self) -> bool:
        return self.definition.adapted

    @property
    def u_range(self):
        return self.definition.u_range

    @property
    def v_range(self):
        return self.definition.v_range

    def _env(self, base, order):
        return {
            "u": Jet2.variable_u(base, order),
            "v": Jet2.variable_v(base, order),
        }

    def jet(self, base, order: int) -> JetVec3:
        env = self._env(base, order)
        x, y, z = (expr_mod.eval_jet(t, env) for t in self.definition.components)
        return JetVec3(x, y, z)

    def gauss_jet(self, base, order: int) -> JetVec3 | None:
        if self.definition.gauss_components is None:
            return None
        env = self._env(base, order)
        x, y, z = (expr_mod.eval_jet(t, env) for t in self.definition.gauss_components)
        return JetVec3(x, y, z)


@dataclass
class SingularPointReport:
    """Classification verdict at an axis point, with supporting numbers."""

    point: tuple[float, float]
    verdict: str
    k: int | None
    delta0: float
    psi_jet: list[float]
    kappa_c0: float
    nondegenerate: bool
    tol: float
    notes: str

    def to_json_dict(self) -> dict:
        d = {
            "point": list(self.point),
            "verdict": self.verdict,
            "delta0": self.delta0,
            "psi_jet": self.psi_jet,
            "kappa_c0": self.kappa_c0,
            "nondegenerate": self.nondegenerate,
            "tol": self.tol,
            "notes": self.notes,
        }
        if self.k is not None:
            d["k"] = self.k
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


class FrontalChart:
    """An evaluatable surface with cached jets of f and its Gauss map."""

    def __init__(self, surface, policy: NumericPolicy = DEFAULT_POLICY,
                 order: int = DEFAULT_ORDER):
        self.surface = surface
        self.policy = policy
        self.order = order
        self._f_cache: dict = {}
        self._nu_cache: dict = {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_def(cls, definition: SurfaceDef, policy: NumericPolicy = DEFAULT_POLICY,
                 order: int = DEFAULT_ORDER) -> "FrontalChart":
        return cls(ExprSurface(definition), policy, order)

    @classmethod
    def from_gallery(cls, name: str, policy: NumericPolicy = DEFAULT_POLICY,
                     order: int = DEFAULT_ORDER) -> "FrontalChart":
        return cls.from_def(gallery_surface(name), policy, order)

    @classmethod
    def from_toml(cls, path, policy: NumericPolicy = DEFAULT_POLICY,
                  order: int = DEFAULT_ORDER) -> "FrontalChart":
        return cls.from_def(load_surface(path), policy, order)

    # -- basic fields -------------------------------------------------------

    @property
    def name(self) -> str:
        return self.surface.name

    @property
    def adapted(self) -> bool:
        return self.surface.adapted

    @property
    def u_range(self):
        return self.surface.u_range

    @property
    def v_range(self):
        return self.surface.v_range

    def sample_us(self, n: int) -> np.ndarray:
        a, b = self.u_range
        pad = 0.02 * (b - a)
        return np.linspace(a + pad, b - pad, n)

    def f(self, base, order: int | None = None) -> JetVec3:
        order = self.order if order is None else order
        key = (round(base[0], 15), round(base[1], 15), order)
        hit = self._f_cache.get(key)
        if hit is None:
            hit = self.surface.jet((base[0], base[1]), order)
            self._f_cache[key] = hit
        return hit

    def _on_axis(self, base) -> bool:
        return abs(base[1]) <= 1e-13

    def h(self, base, order: int | None = None) -> JetVec3:
        """v-divided velocity: the smooth field with f_v = v h."""
        if not self.adapted:
            raise NotAdapted(f"chart {self.name!r} is not adapted; h undefined")
        order = self.order if order is None else order
        fv = self.f(base, order + 2).d_v()
        if self._on_axis(base):
            return fv.divide_by_v(self.policy)
        vjet = Jet2.variable_v(base, fv.order)
        return JetVec3(fv.x / vjet, fv.y / vjet, fv.z / vjet).truncated(order)

    def gauss(self, base, order: int | None = None) -> JetVec3:
        """Unit normal jet; constructed from the frame unless supplied."""
        order = self.order if order is None else order
        key = (round(base[0], 15), round(base[1], 15), order)
        hit = self._nu_cache.get(key)
        if hit is not None:
            return hit
        explicit = self.surface.gauss_jet((base[0], base[1]), order)
        if explicit is not None:
            nu = explicit
            self._validate_explicit_normal(base, nu)
        elif self.adapted:
            fu = self.f(base, order + 1).d_u()
            hh = self.h(base, order)
            raw = fu.cross(hh)
            if raw.norm().value < self.policy.frame_tol:
                raise DegenerateFrame(
                    f"|f_u x h| ~ 0 at {base}: frame degenerates"
                )
            nu = raw.normalized(self.policy)
        else:
            fj = self.f(base, order + 1)
            raw = fj.d_u().cross(fj.d_v())
            if raw.norm().value < self.policy.frame_tol:
                raise DegenerateFrame(
                    f"singular point of a non-adapted chart at {base}"
                )
            nu = raw.normalized(self.policy)
        self._nu_cache[key] = nu
        return nu

    def _validate_explicit_normal(self, base, nu: JetVec3) -> None:
        tol = 1e-8
        n0 = nu.value()
        if abs(np.dot(n0, n0) - 1.0) > tol:
            raise ValueError(f"explicit normal is not unit length at {base}")
        fj = self.f(base, nu.order + 1)
        for tangent in (fj.d_u(), fj.d_v()):
            if abs(float(np.dot(tangent.value(), n0))) > tol:
                raise ValueError(
                    f"explicit normal fails the tangency condition at {base}"
                )

    def area_density(self, base, order: int | None = None) -> Jet2:
        """Signed area density det(f_u, f_v, nu) as a jet."""
        order = self.order if order is None else order
        fj = self.f(base, order + 1)
        nu = self.gauss(base, order)
        return det3(fj.d_u(), fj.d_v(), nu)

    def frontal_residual(self, base, order: int | None = None) -> float:
        """max |<nu, f_u>|, |<nu, f_v>| at the point (frontal condition)."""
        order = self.order if order is None else order
        fj = self.f(base, order + 1)
        nu = self.gauss(base, order)
        r1 = abs(nu.dot(fj.d_u()).value)
        r2 = abs(nu.dot(fj.d_v()).value)
        return max(r1, r2)

    # -- edge geometry ------------------------------------------------------

    def cuspidal_curvature(self, u0: float) -> float:
        """Coordinate-free cuspidal curvature at (u0, 0):

            |c'|^{3/2} det(c', f_vv, f_vvv) / |c' x f_vv|^{5/2},

        with c the singular curve traced on the surface.  Vanishes exactly
        at non-front points.
        """
        fj = self.f((u0, 0.0), max(3, 3))
        cp = np.array([fj.x.partial(1, 0), fj.y.partial(1, 0), fj.z.partial(1, 0)])
        fvv = np.array([fj.x.partial(0, 2), fj.y.partial(0, 2), fj.z.partial(0, 2)])
        fvvv = np.array([fj.x.partial(0, 3), fj.y.partial(0, 3), fj.z.partial(0, 3)])
        cross = np.cross(cp, fvv)
        denom = np.linalg.norm(cross) ** 2.5
        if denom < self.policy.frame_tol:
            raise DegenerateFrame(f"|c' x f_vv| ~ 0 at u0={u0}")
        det = float(np.linalg.det(np.stack([cp, fvv, fvvv])))
        return float(np.linalg.norm(cp) ** 1.5 * det / denom)

    def psi_value(self, u0: float) -> float:
        """psi at a single axis point (used for pure-frontal sampling)."""
        base = (u0, 0.0)
        order = max(3, self.order - 2)
        fu = self.f(base, order + 1).d_u()
        nu = self.gauss(base, order + 1)
        nuv = nu.d_v()
        return det3(fu.truncated(nuv.order), nu.truncated(nuv.order), nuv).value

    def classify_singular_point(self, u0: float, order: int | None = None,
                                n_check: int = 17) -> SingularPointReport:
        """Classify the axis point (u0, 0) by the vanishing order of psi."""
        if not self.adapted:
            raise NotAdapted(
                f"classification needs an adapted chart; {self.name!r} is not"
            )
        order = self.order if order is None else order
        base = (u0, 0.0)
        fj = self.f(base, order)
        fu = fj.d_u()
        lam = self.area_density(base, order - 1)
        scale = max(1.0, lam.max_abs_coeff())
        if abs(lam.value) > 1e-8 * scale:
            return SingularPointReport(
                point=base, verdict=REGULAR, k=None, delta0=1.0, psi_jet=[],
                kappa_c0=float("nan"), nondegenerate=True, tol=0.0,
                notes=f"area density {lam.value:.3e} nonzero: regular point",
            )
        # delta(0) = det of the curve tangent and the null direction in
        # chart coordinates; both are coordinate fields here.
        delta0 = float(np.linalg.det(np.array([[1.0, 0.0], [0.0, 1.0]])))
        if abs(delta0) <= 1e-12:
            raise NotFirstKind(f"delta(0) = {delta0:.3e} at u0={u0}")
        lam_v = lam.partial(0, 1)
        nondeg = abs(lam_v) > 1e-10 * scale
        if not nondeg:
            return SingularPointReport(
                point=base, verdict=DEGENERATE, k=None, delta0=delta0, psi_jet=[],
                kappa_c0=float("nan"), nondegenerate=False, tol=0.0,
                notes=f"d_v(area density) = {lam_v:.3e}: degenerate singular point",
            )

        nu = self.gauss(base, order - 1)
        nuv = nu.d_v()
        m = nuv.order
        psi = det3(fu.truncated(m), nu.truncated(m), nuv)
        coeffs = [psi.coefficient(i, 0) for i in range(m + 1)]
        tol = self.policy.class_tol * (1.0 + max(abs(c) for c in coeffs))
        k = next((i for i, c in enumerate(coeffs) if abs(c) > tol), None)

        kappa_c0 = self.cuspidal_curvature(u0)
        if k == 0:
            verdict, notes = FIRST_KIND_FRONT, f"psi(0) = {coeffs[0]:.6g} nonzero"
            kk = None
        elif k is not None:
            verdict, kk = K_NON_FRONT, k
            notes = f"psi vanishes to exact order {k} (jet order {m})"
        else:
            samples = [abs(self.psi_value(us)) for us in self.sample_us(n_check)]
            worst = max(samples)
            if worst <= tol:
                verdict, kk = PURE_FRONTAL, None
                notes = (
                    f"all {m + 1} psi-jet coefficients below {tol:.3e} and "
                    f"max |psi| = {worst:.3e} over {n_check} axis samples: "
                    "numerical pure-frontal verdict"
                )
            else:
                verdict, kk = DEGENERATE, None
                notes = (
                    f"psi-jet vanishes to order > {m} at u0={u0} but "
                    f"max |psi| = {worst:.3e} along the curve: vanishing order "
                    "exceeds the jet order; raise the order to classify"
                )
        return SingularPointReport(
            point=base, verdict=verdict, k=kk, delta0=delta0,
            psi_jet=coeffs, kappa_c0=kappa_c0, nondegenerate=nondeg,
            tol=tol, notes=notes,
        )
