"""Ribaucour pairs of revolution surfaces from an envelope of circles.

A planar profile gamma with gamma' = l (cos theta, sin theta) and a radius
function rho define the circle family |X - gamma(u)|^2 = rho(u)^2.  With
k = rho'/l bounded, the envelope has the two branches

    X_(+-) = gamma - rho k e +- rho sqrt(1 - k^2) n        (|k| < 1)
    X_(+-) = gamma -+ rho e                                (|k| = 1 identically)

in the moving frame e = (cos theta, sin theta), n = (-sin theta, cos theta).
Revolving the branches and the profile about the first coordinate axis
yields two surfaces sharing the sphere congruence centered on the revolved
profile with radius rho; the pair is checked against the defining
center-map identity, the radius-derivative equations

    h_u = m1 (k1 + h l1),   h_v = m2 (k2 + h l2),  m_i = -b_i/(b_3 - 1),

and the transformation equations coupling the second surface's normal
derivatives to the first surface's frame.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import expr as expr_mod
from .core import FrontalChart
from .expr import Expr
from .jets import Jet2, JetVec3, jet_cos, jet_sin, jet_sqrt

__all__ = [
    "KUnbounded",
    "KBranchMixed",
    "AxisCrossing",
    "B3IsOne",
    "ProfileCurve",
    "EnvelopeData",
    "build_envelope",
    "RevolutionSurface",
    "revolve",
    "RibaucourPair",
    "build_ribaucour_pair",
    "ResidualReport",
    "verify_ribaucour",
]


class KUnbounded(ValueError):
    """rho'/l is unbounded on the domain (rho' does not vanish with l)."""


class KBranchMixed(ValueError):
    """|k| is neither < 1 throughout nor identically 1: no real two-branch
    envelope exists and the construction refuses to extrapolate."""


class AxisCrossing(ValueError):
    """The revolved curve touches or crosses the rotation axis (y <= 0)."""


class B3IsOne(ValueError):
    """The two normals coincide at a grid point: not a genuine pair."""


def _series_div(num: Jet2, den: Jet2, tol: float = 1e-11) -> Jet2:
    """Univariate jet division allowing a common zero of finite order."""
    n = den.order + 1
    dc = den.coeffs[:, 0]
    scale = max(1.0, float(np.max(np.abs(dc))))
    lead = next((i for i in range(n) if abs(dc[i]) > tol * scale), None)
    if lead is None:
        raise KUnbounded("denominator vanishes identically at this point")
    if lead == 0:
        return num / den
    nscale = max(1.0, num.max_abs_coeff())
    if any(abs(num.coeffs[i, 0]) > tol * nscale for i in range(lead)):
        raise KUnbounded(
            "numerator does not vanish to the order of the denominator's zero"
        )
    m = num.order - lead
    a = Jet2(num.base, m)
    b = Jet2(num.base, m)
    a.coeffs[: m + 1, 0] = num.coeffs[lead: lead + m + 1, 0]
    b.coeffs[: m + 1, 0] = den.coeffs[lead: lead + m + 1, 0]
    return a / b


@dataclass
class ProfileCurve:
    """A planar frontal curve given by speed and turning-angle formulas."""

    l: Expr
    theta: Expr
    start: tuple[float, float]
    domain: tuple[float, float]

    def __post_init__(self):
        for tree, label in ((self.l, "l"), (self.theta, "theta")):
            vars_ = expr_mod.variables_of(tree)
            if not vars_ <= {"t"}:
                raise ValueError(f"profile {label} may only use t, got {sorted(vars_)}")
        self._gamma_cache: dict[float, tuple[float, float]] = {}

    @classmethod
    def from_formulas(cls, l: str, theta: str, start, domain) -> "ProfileCurve":
        return cls(expr_mod.parse(l), expr_mod.parse(theta),
                   (float(start[0]), float(start[1])),
                   (float(domain[0]), float(domain[1])))

    def _t_jet(self, t0: float, order: int) -> Jet2:
        return Jet2.variable_u((t0, 0.0), order)

    def l_jet(self, t0: float, order: int) -> Jet2:
        return expr_mod.eval_jet(self.l, {"t": self._t_jet(t0, order)})

    def theta_jet(self, t0: float, order: int) -> Jet2:
        return expr_mod.eval_jet(self.theta, {"t": self._t_jet(t0, order)})

    def frame_jets(self, t0: float, order: int) -> tuple[Jet2, Jet2, Jet2, Jet2]:
        """(e_x, e_y, n_x, n_y) of the moving frame as t-jets."""
        th = self.theta_jet(t0, order)
        c, s = jet_cos(th), jet_sin(th)
        return c, s, -s, c

    def gamma_value(self, t: float) -> tuple[float, float]:
        key = round(float(t), 15)
        hit = self._gamma_cache.get(key)
        if hit is not None:
            return hit
        t_start = self.domain[0]

        def dx(s):
            env = {"t": s}
            return expr_mod.eval_scalar(self.l, env) * math.cos(
                expr_mod.eval_scalar(self.theta, env))

        def dy(s):
            env = {"t": s}
            return expr_mod.eval_scalar(self.l, env) * math.sin(
                expr_mod.eval_scalar(self.theta, env))

        ix = quad(dx, t_start, t, epsabs=1e-13, epsrel=1e-13, limit=500)[0]
        iy = quad(dy, t_start, t, epsabs=1e-13, epsrel=1e-13, limit=500)[0]
        val = (self.start[0] + ix, self.start[1] + iy)
        self._gamma_cache[key] = val
        return val

    def gamma_jet(self, t0: float, order: int) -> tuple[Jet2, Jet2]:
        """Jet of gamma at t0: quadrature for the value, the defining
        derivative l(cos theta, sin theta) for all higher coefficients."""
        x0, y0 = self.gamma_value(t0)
        ljet = self.l_jet(t0, order)
        ex, ey, _, _ = self.frame_jets(t0, order)
        gx_p, gy_p = ljet * ex, ljet * ey
        gx = Jet2.constant(x0, (t0, 0.0), order)
        gy = Jet2.constant(y0, (t0, 0.0), order)
        for i in range(order):
            gx.coeffs[i + 1, 0] = gx_p.coeffs[i, 0] / (i + 1)
            gy.coeffs[i + 1, 0] = gy_p.coeffs[i, 0] / (i + 1)
        return gx, gy


@dataclass
class EnvelopeData:
    """The two envelope branches of the circle family, as curve evaluators."""

    profile: ProfileCurve
    rho: Expr
    branch: str  # 'NotOne' | 'IdenticallyOne'
    k_sign: int  # sign of k on the IdenticallyOne branch (0 otherwise)

    def rho_jet(self, t0: float, order: int) -> Jet2:
        return expr_mod.eval_jet(self.rho, {"t": self.profile._t_jet(t0, order)})

    def k_jet(self, t0: float, order: int) -> Jet2:
        rho_p = self.rho_jet(t0, order + 1).d_u()
        ljet = self.profile.l_jet(t0, order)
        return _series_div(rho_p, ljet)

    def branch_jet(self, t0: float, order: int, sign: int) -> tuple[Jet2, Jet2]:
        """Planar jet of X_+ (sign=+1) or X_- (sign=-1) at t0."""
        gx, gy = self.profile.gamma_jet(t0, order)
        rho = self.rho_jet(t0, order)
        ex, ey, nx, ny = self.profile.frame_jets(t0, order)
        if self.branch == "IdenticallyOne":
            return gx - sign * rho * ex, gy - sign * rho * ey
        k = self.k_jet(t0, order)
        root = jet_sqrt(1.0 - k * k)
        xx = gx - rho * k * ex + sign * rho * root * nx
        yy = gy - rho * k * ey + sign * rho * root * ny
        return xx, yy

    def curve(self, sign: int):
        def jets(t0: float, order: int) -> tuple[Jet2, Jet2]:
            return self.branch_jet(t0, order, sign)
        return jets

    def residuals(self, n_samples: int = 64) -> dict:
        """Worst |(|X - gamma| - rho)| and tangency defect <X', X - gamma>
        per branch over the domain."""
        t0, t1 = self.profile.domain
        out = {}
        for sign, tag in ((+1, "plus"), (-1, "minus")):
            r_rad = r_env = 0.0
            for t in np.linspace(t0 + 1e-9, t1 - 1e-9, n_samples):
                xx, yy = self.branch_jet(float(t), 1, sign)
                gx, gy = self.profile.gamma_jet(float(t), 1)
                rho = self.rho_jet(float(t), 0).value
                dx, dy = xx.value - gx.value, yy.value - gy.value
                r_rad = max(r_rad, abs(math.hypot(dx, dy) - abs(rho)))
                xp = xx.partial(1, 0)
                yp = yy.partial(1, 0)
                r_env = max(r_env, abs(xp * dx + yp * dy))
            out[tag] = {"radius": r_rad, "tangency": r_env}
        return out


def build_envelope(profile: ProfileCurve, rho: Expr | str,
                   n_samples: int = 64, one_tol: float = 1e-9) -> EnvelopeData:
    """Select the envelope branch structure from the sampled values of k.

    Requires either |k| < 1 at every sample or |k| = 1 identically; a k
    crossing (or exceeding) 1 leaves no real two-branch envelope and raises
    KBranchMixed rather than extrapolating.
    """
    if isinstance(rho, str):
        rho = expr_mod.parse(rho)
    env = EnvelopeData(profile=profile, rho=rho, branch="NotOne", k_sign=0)
    t0, t1 = profile.domain
    ks = []
    for t in np.linspace(t0 + 1e-9, t1 - 1e-9, n_samples):
        ks.append(env.k_jet(float(t), 0).value)
    ks = np.array(ks)
    if np.all(np.abs(np.abs(ks) - 1.0) <= one_tol):
        sign = int(np.sign(ks[0]))
        if not np.all(np.sign(ks) == sign):
            raise KBranchMixed("k jumps between +1 and -1 on the domain")
        return EnvelopeData(profile=profile, rho=rho, branch="IdenticallyOne",
                            k_sign=sign)
    if np.all(np.abs(ks) < 1.0 - one_tol):
        return env
    raise KBranchMixed(
        f"|k| range [{np.min(np.abs(ks)):.6g}, {np.max(np.abs(ks)):.6g}] "
        "is neither uniformly < 1 nor identically 1"
    )


# -- revolution surfaces ---------------------------------------------------------


class RevolutionSurface:
    """Revolve a planar curve about the first coordinate axis.

    ``curve_jets(t, order) -> (Jet2 x, Jet2 y)`` supplies the profile;
    ``normal_jets`` (same signature) supplies its unit normal, so frontal
    profiles with cusps stay frontal after revolving.
    """

    def __init__(self, curve_jets, normal_jets, name: str, u_domain,
                 check_axis: bool = True):
        self.curve_jets = curve_jets
        self.normal_jets = normal_jets
        self.name = name
        self.adapted = False
        self.u_range = (float(u_domain[0]), float(u_domain[1]))
        self.v_range = (0.0, 2.0 * math.pi)
        if check_axis:
            for t in np.linspace(*self.u_range, 33):
                _, y = curve_jets(float(t), 0)
                if y.value <= 0.0:
                    raise AxisCrossing(f"profile y({t:.6g}) = {y.value:.6g} <= 0")

    def _lift(self, jet1: Jet2, base, order: int) -> Jet2:
        out = Jet2(base, order)
        m = min(order, jet1.order)
        out.coeffs[: m + 1, 0] = jet1.coeffs[: m + 1, 0]
        return out

    def jet(self, base, order: int) -> JetVec3:
        u0, v0 = base
        xj, yj = self.curve_jets(float(u0), order)
        x = self._lift(xj, base, order)
        y = self._lift(yj, base, order)
        vj = Jet2.variable_v(base, order)
        return JetVec3(x, y * jet_cos(vj), y * jet_sin(vj))

    def gauss_jet(self, base, order: int) -> JetVec3 | None:
        if self.normal_jets is None:
            return None
        u0, v0 = base
        nxj, nyj = self.normal_jets(float(u0), order)
        nx = self._lift(nxj, base, order)
        ny = self._lift(nyj, base, order)
        vj = Jet2.variable_v(base, order)
        return JetVec3(nx, ny * jet_cos(vj), ny * jet_sin(vj))


def revolve(curve_jets, normal_jets, name: str, u_domain,
            policy=None, order=None) -> FrontalChart:
    from .jets import DEFAULT_ORDER, DEFAULT_POLICY

    surf = RevolutionSurface(curve_jets, normal_jets, name, u_domain)
    return FrontalChart(surf, policy or DEFAULT_POLICY, order or DEFAULT_ORDER)


def revolve_profile(profile: ProfileCurve, name: str = "revolved-profile") -> FrontalChart:
    """Revolution surface of the profile itself, normal from the turning angle."""

    def normal(t0: float, order: int) -> tuple[Jet2, Jet2]:
        _, _, nx, ny = profile.frame_jets(t0, order)
        return nx, ny

    return revolve(profile.gamma_jet, normal, name, profile.domain)


# -- the pair and its verification ------------------------------------------------


@dataclass
class RibaucourPair:
    """Two revolution surfaces sharing the sphere congruence of radius rho
    centered on the revolved profile."""

    envelope: EnvelopeData
    f: FrontalChart          # T(X_-)
    f_tilde: FrontalChart    # T(X_+)
    center: RevolutionSurface

    def h_value(self, u: float) -> float:
        return self.envelope.rho_jet(u, 0).value

    def h_u_value(self, u: float) -> float:
        return self.envelope.rho_jet(u, 1).partial(1, 0)


def _center_pointing_normal(envelope: EnvelopeData, sign: int):
    """Unit vector from the branch toward the circle center, as t-jets.

    For a genuine envelope branch this is the curve's unit normal; the
    chart construction re-validates that tangency at evaluation time.
    """

    def jets(t0: float, order: int) -> tuple[Jet2, Jet2]:
        gx, gy = envelope.profile.gamma_jet(t0, order)
        xx, yy = envelope.branch_jet(t0, order, sign)
        rho = envelope.rho_jet(t0, order)
        return (gx - xx) / rho, (gy - yy) / rho

    return jets


def build_ribaucour_pair(profile: ProfileCurve, rho: Expr | str,
                         n_samples: int = 64) -> RibaucourPair:
    env = build_envelope(profile, rho, n_samples=n_samples)
    f_minus = revolve(env.curve(-1), _center_pointing_normal(env, -1),
                      "pair-minus", profile.domain)
    f_plus = revolve(env.curve(+1), _center_pointing_normal(env, +1),
                     "pair-plus", profile.domain)
    center = RevolutionSurface(profile.gamma_jet, None, "center-map",
                               profile.domain, check_axis=False)
    return RibaucourPair(envelope=env, f=f_minus, f_tilde=f_plus, center=center)


@dataclass
class ResidualReport:
    """Grid maxima of every defining identity of a Ribaucour pair."""

    grid: tuple[int, int]
    center_map: float
    frontal_condition: float
    b_norm: float
    h_u_equation: float
    h_v_equation: float
    ribaucour_eq_1: float
    ribaucour_eq_2: float
    cross_orthogonality: float
    generator_correspondence: float
    min_abs_b3_minus_1: float
    worst_point: tuple[float, float]

    def max_residual(self) -> float:
        return max(self.center_map, self.frontal_condition, self.b_norm,
                   self.h_u_equation, self.h_v_equation,
                   self.ribaucour_eq_1, self.ribaucour_eq_2,
                   self.cross_orthogonality, self.generator_correspondence)

    def to_json_dict(self) -> dict:
        d = self.__dict__.copy()
        d["grid"] = list(self.grid)
        d["worst_point"] = list(self.worst_point)
        d["max_residual"] = self.max_residual()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def verify_ribaucour(pair: RibaucourPair, grid: tuple[int, int] = (64, 64),
                     h_scale: float = 1.0, b3_tol: float = 1e-9) -> ResidualReport:
    """Evaluate all Ribaucour identities on a parameter grid and report the
    maximum residual of each.

    ``h_scale`` rescales the radius function; any value other than 1 breaks
    a genuine pair and serves as a fault-injection control.
    """
    nu_pts, nv_pts = grid
    t0, t1 = pair.envelope.profile.domain
    us = np.linspace(t0 + 1e-6, t1 - 1e-6, nu_pts)
    vs = np.linspace(0.0, 2.0 * math.pi, nv_pts, endpoint=False)

    worst = {k: 0.0 for k in ("center", "frontal", "bnorm", "hu", "hv",
                              "rib1", "rib2", "cross", "gen")}
    min_b3 = float("inf")
    worst_pt = (us[0], vs[0])

    for u in us:
        h = pair.h_value(float(u)) * h_scale
        h_u = pair.h_u_value(float(u)) * h_scale
        cx, cy = pair.envelope.profile.gamma_value(float(u))
        for v in vs:
            base = (float(u), float(v))
            fj = pair.f.f(base, 2)
            ftj = pair.f_tilde.f(base, 2)
            nu_j = pair.f.gauss(base, 1)
            nut_j = pair.f_tilde.gauss(base, 1)
            fu, fv = fj.d_u().value(), fj.d_v().value()
            ftu, ftv = ftj.d_u().value(), ftj.d_v().value()
            nuv_ = nu_j.value()
            nutv = nut_j.value()
            nu_u, nu_v = nu_j.d_u().value(), nu_j.d_v().value()
            nut_u, nut_v = nut_j.d_u().value(), nut_j.d_v().value()

            scale = max(1.0, np.linalg.norm(fu), np.linalg.norm(fv), abs(h))
            cvec = np.array([cx, cy * math.cos(v), cy * math.sin(v)])
            r_center = max(
                np.linalg.norm(fj.value() + h * nuv_ - cvec),
                np.linalg.norm(ftj.value() + h * nutv - cvec),
            ) / scale
            r_frontal = max(
                abs(np.dot(nuv_, fu)), abs(np.dot(nuv_, fv)),
                abs(np.dot(nutv, ftu)), abs(np.dot(nutv, ftv)),
            ) / scale

            e1 = fu / np.linalg.norm(fu)
            e2 = fv / np.linalg.norm(fv)
            k1, k2 = np.linalg.norm(fu), np.linalg.norm(fv)
            l1, l2 = float(np.dot(nu_u, e1)), float(np.dot(nu_v, e2))
            b1 = float(np.dot(nutv, e1))
            b2 = float(np.dot(nutv, e2))
            b3 = float(np.dot(nutv, nuv_))
            r_bnorm = abs(b1 * b1 + b2 * b2 + b3 * b3 - 1.0)
            min_b3 = min(min_b3, abs(b3 - 1.0))
            if abs(b3 - 1.0) < b3_tol:
                raise B3IsOne(f"normals coincide at (u, v) = {base}")
            m1 = -b1 / (b3 - 1.0)
            m2 = -b2 / (b3 - 1.0)
            r_hu = abs(h_u - m1 * (k1 + h * l1)) / scale
            r_hv = abs(0.0 - m2 * (k2 + h * l2)) / scale

            L21 = float(np.dot(nut_v, e1))
            L23 = float(np.dot(nut_v, nuv_))
            L12 = float(np.dot(nut_u, e2))
            L13 = float(np.dot(nut_u, nuv_))
            nscale = max(1.0, np.linalg.norm(nut_u), np.linalg.norm(nut_v))
            r_rib1 = abs(L21 + m1 * L23) / nscale
            r_rib2 = abs(L12 + m2 * L13) / nscale
            r_cross = max(abs(np.dot(ftu, nut_v)), abs(np.dot(ftv, nut_u))) / scale
            tscale = max(np.linalg.norm(ftu) * np.linalg.norm(nut_u), 1e-30)
            r_gen = max(
                np.linalg.norm(np.cross(nut_u, ftu)) / tscale,
                np.linalg.norm(np.cross(nut_v, ftv))
                / max(np.linalg.norm(ftv) * np.linalg.norm(nut_v), 1e-30)
                if np.linalg.norm(nut_v) > 1e-12 else 0.0,
            )

            vals = {"center": r_center, "frontal": r_frontal, "bnorm": r_bnorm,
                    "hu": r_hu, "hv": r_hv, "rib1": r_rib1, "rib2": r_rib2,
                    "cross": r_cross, "gen": r_gen}
            for key, val in vals.items():
                if val > worst[key]:
                    worst[key] = val
                    if val >= max(worst.values()):
                        worst_pt = base
    return ResidualReport(
        grid=grid, center_map=worst["center"], frontal_condition=worst["frontal"],
        b_norm=worst["bnorm"], h_u_equation=worst["hu"], h_v_equation=worst["hv"],
        ribaucour_eq_1=worst["rib1"], ribaucour_eq_2=worst["rib2"],
        cross_orthogonality=worst["cross"], generator_correspondence=worst["gen"],
        min_abs_b3_minus_1=min_b3, worst_point=worst_pt,
    )
