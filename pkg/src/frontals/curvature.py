"""Fundamental data, Gaussian/mean curvature and principal-curvature limits.

All second-order data of an adapted chart is carried by six functions built
from the frame {f_u, h, nu} (h is the v-divided velocity, f_v = v h):

    Et = <f_u, f_u>   Ft = <f_u, h>    Gt = <h, h>
    Lt = -<f_u, nu_u> Mt = -<h, nu_u>  Nt = -<h, nu_v>

The usual fundamental forms are E = Et, F = v Ft, G = v^2 Gt, L = Lt,
M = v Mt, N = v Nt away from the singular curve, so

    K = (Lt Nt - v Mt^2) / (v (Et Gt - Ft^2)),
    H = (Et Nt - 2 v Ft Mt + v Gt Lt) / (2 v (Et Gt - Ft^2)),

and the desingularized discriminant

    A = Et Nt - 2 v Ft Mt + v Gt Lt,
    B = sqrt(A^2 - 4 v (Et Gt - Ft^2)(Lt Nt - v Mt^2))

controls which principal-curvature branch stays bounded on the singular
curve.  GammaTilde = 4 lambda^2 (H^2 - K) = B^2/(Et Gt - Ft^2) is smooth
everywhere and vanishes exactly at umbilic points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import FrontalChart, NotAdapted, K_NON_FRONT
from .jets import Jet2, JetVec3, NotDivisible, det3

__all__ = [
    "PositivityViolation",
    "NotKNonFront",
    "NotBounded",
    "FundamentalData",
    "CurvatureSample",
    "fundamental_data",
    "curvature_sample",
    "field_grid",
    "BranchSweep",
    "LimitReport",
    "limit_profile",
    "BoundedGaussReport",
    "bounded_gauss_check",
    "discriminant_identity_residual",
    "form_relation_residual",
]

_AXIS_TOL = 1e-13


class PositivityViolation(ValueError):
    """Et*Gt - Ft^2 <= 0: the v-divided metric degenerated."""


class NotKNonFront(ValueError):
    """Operation requires a k-non-front singular point."""


class NotBounded(ValueError):
    """Gaussian curvature is not bounded near the requested point."""


@dataclass
class FundamentalData:
    """Jets of the six frame quantities at one base point."""

    base: tuple[float, float]
    order: int
    Et: Jet2
    Ft: Jet2
    Gt: Jet2
    Lt: Jet2
    Mt: Jet2
    Nt: Jet2
    weingarten_residual: float

    def metric_det(self) -> Jet2:
        return self.Et * self.Gt - self.Ft * self.Ft

    def v_jet(self) -> Jet2:
        return Jet2.variable_v(self.base, self.order)

    def A_jet(self) -> Jet2:
        v = self.v_jet()
        return self.Et * self.Nt - 2 * v * self.Ft * self.Mt + v * self.Gt * self.Lt

    def inner_numerator(self) -> Jet2:
        """Lt*Nt - v*Mt^2 (numerator of v*K*det)."""
        return self.Lt * self.Nt - self.v_jet() * self.Mt * self.Mt

    def discriminant(self) -> Jet2:
        A = self.A_jet()
        return A * A - 4 * self.v_jet() * self.metric_det() * self.inner_numerator()

    def gamma_tilde(self) -> Jet2:
        return self.discriminant() / self.metric_det()


def fundamental_data(chart: FrontalChart, base, order: int | None = None) -> FundamentalData:
    """Compute the six frame quantities as jets, with the derivative-of-normal
    decomposition checked against its closed form as an internal self-test."""
    if not chart.adapted:
        raise NotAdapted(f"chart {chart.name!r} is not adapted")
    order = (chart.order - 2) if order is None else order
    base = (float(base[0]), float(base[1]))
    fj = chart.f(base, order + 2)
    fu = fj.d_u()
    hh = chart.h(base, order + 1)
    nu = chart.gauss(base, order + 1)
    nuu = nu.d_u()
    nuv = nu.d_v()

    m = order
    fu_, hh_, nuu_, nuv_ = (x.truncated(m) for x in (fu, hh, nuu, nuv))
    Et = fu_.dot(fu_)
    Ft = fu_.dot(hh_)
    Gt = hh_.dot(hh_)
    Lt = -fu_.dot(nuu_)
    Mt = -hh_.dot(nuu_)
    Nt = -hh_.dot(nuv_)

    det = Et * Gt - Ft * Ft
    if det.value <= 0.0:
        raise PositivityViolation(
            f"Et*Gt - Ft^2 = {det.value:.3e} <= 0 at {base}"
        )

    # self-check: nu_u and nu_v must decompose on {f_u, h} with the
    # coefficients forced by the definitions above
    v = Jet2.variable_v(base, m)
    nuu_pred = fu_.scale((Ft * Mt - Gt * Lt) / det) + hh_.scale((Ft * Lt - Et * Mt) / det)
    nuv_pred = fu_.scale((Ft * Nt - v * Gt * Mt) / det) + hh_.scale(
        (v * Ft * Mt - Et * Nt) / det
    )
    resid = 0.0
    for got, want in ((nuu_, nuu_pred), (nuv_, nuv_pred)):
        diff = got - want
        resid = max(resid, diff.x.max_abs_coeff(), diff.y.max_abs_coeff(),
                    diff.z.max_abs_coeff())
    return FundamentalData(base=base, order=m, Et=Et, Ft=Ft, Gt=Gt,
                           Lt=Lt, Mt=Mt, Nt=Nt, weingarten_residual=resid)


@dataclass
class CurvatureSample:
    """Pointwise curvature data; unbounded entries are +-inf or nan."""

    u: float
    v: float
    lam: float
    K: float
    H: float
    Gamma: float
    GammaTilde: float
    kappa1: float
    kappa2: float
    A: float
    B: float
    flags: str = ""

    def row(self) -> list[float]:
        return [self.u, self.v, self.lam, self.K, self.H, self.Gamma,
                self.GammaTilde, self.kappa1, self.kappa2]


def _signed_inf(value: float) -> float:
    if abs(value) < 1e-300:
        return float("nan")
    return math.copysign(float("inf"), value)


def _regular_sample(chart: FrontalChart, base) -> CurvatureSample:
    # ordinary fundamental forms; works for any chart away from S(f)
    fj = chart.f(base, 3)
    nu = chart.gauss(base, 2)
    fu, fv = fj.d_u().truncated(1), fj.d_v().truncated(1)
    nuu, nuv = nu.d_u(), nu.d_v()
    E = fu.dot(fu).value
    F = fu.dot(fv).value
    G = fv.dot(fv).value
    L = -fu.dot(nuu).value
    M = -fu.dot(nuv).value
    N = -fv.dot(nuv).value
    det = E * G - F * F
    lam = det3(fu, fv, nu).value
    K = (L * N - M * M) / det
    H = (E * N - 2 * F * M + G * L) / (2 * det)
    Gamma = H * H - K
    k1 = H + math.sqrt(max(Gamma, 0.0))
    k2 = H - math.sqrt(max(Gamma, 0.0))
    return CurvatureSample(u=base[0], v=base[1], lam=lam, K=K, H=H, Gamma=Gamma,
                           GammaTilde=4 * lam * lam * Gamma, kappa1=k1, kappa2=k2,
                           A=float("nan"), B=float("nan"), flags="ordinary-forms")


def curvature_sample(chart: FrontalChart, point) -> CurvatureSample:
    """Curvature data at one parameter point.

    On the singular curve the v-divided forms are used whenever the needed
    divisibility holds; otherwise the diverging quantities are reported as
    +-inf (sign taken in the limit v -> 0+) or nan when the sign is not
    determined.  Unboundedness is data here, not an error.
    """
    u0, v0 = float(point[0]), float(point[1])
    if not chart.adapted:
        return _regular_sample(chart, (u0, v0))

    fd = fundamental_data(chart, (u0, v0))
    det = fd.metric_det()
    v = fd.v_jet()
    A = fd.A_jet()
    num2 = fd.inner_numerator()
    disc = fd.discriminant()
    lam = chart.area_density((u0, v0), fd.order).value
    Bval = math.sqrt(max(disc.value, 0.0))

    if abs(v0) > _AXIS_TOL:
        Kv = num2.value / (v0 * det.value)
        Hv = A.value / (2 * v0 * det.value)
        Gamma = Hv * Hv - Kv
        root = math.sqrt(max(Gamma, 0.0))
        return CurvatureSample(u=u0, v=v0, lam=lam, K=Kv, H=Hv, Gamma=Gamma,
                               GammaTilde=disc.value / det.value,
                               kappa1=Hv + root, kappa2=Hv - root,
                               A=A.value, B=Bval)

    flags = []
    try:
        Kv = (num2.divide_by_v(chart.policy) / det.truncated(fd.order - 1)).value
        k_bounded = True
    except NotDivisible:
        Kv = _signed_inf(num2.value)
        k_bounded = False
        flags.append("K-unbounded")
    try:
        Hv = (A.divide_by_v(chart.policy) / (2 * det.truncated(fd.order - 1))).value
        h_bounded = True
    except NotDivisible:
        Hv = _signed_inf(A.value)
        h_bounded = False
        flags.append("H-unbounded")

    gamma_tilde = disc.value / det.value
    if k_bounded and h_bounded:
        Gamma = Hv * Hv - Kv
        root = math.sqrt(max(Gamma, 0.0))
        k1, k2 = Hv + root, Hv - root
    else:
        Gamma = float("inf")
        k1 = k2 = float("nan")
        flags.append("principal-branches-via-limit_profile")
    return CurvatureSample(u=u0, v=v0, lam=lam, K=Kv, H=Hv, Gamma=Gamma,
                           GammaTilde=gamma_tilde, kappa1=k1, kappa2=k2,
                           A=A.value, B=Bval, flags=";".join(flags))


def field_grid(chart: FrontalChart, nu_pts: int, nv_pts: int) -> list[CurvatureSample]:
    us = np.linspace(chart.u_range[0], chart.u_range[1], nu_pts)
    vs = np.linspace(chart.v_range[0], chart.v_range[1], nv_pts)
    return [curvature_sample(chart, (u, v)) for u in us for v in vs]


# -- principal-branch limits toward the singular curve -------------------------


def _principal_pair_stable(A: float, B: float, num2: float, det: float,
                           v: float) -> tuple[float, float]:
    """(kappa1, kappa2) = H +- sqrt(H^2-K), computed without cancellation."""
    if A >= 0.0:
        dp = A + B
        dm = 4 * v * det * num2 / dp if dp != 0.0 else 0.0
    else:
        dm = A - B
        dp = 4 * v * det * num2 / dm if dm != 0.0 else 0.0
    k_plus = dp / (2 * v * det)
    k_minus = dm / (2 * v * det)
    if v > 0:
        return k_plus, k_minus
    return k_minus, k_plus


@dataclass
class BranchSweep:
    """One branch's samples along v -> 0 at a fixed u."""

    u: float
    v_sign: int
    branch: str  # 'kappa1' | 'kappa2'
    values: list[float]
    vs: list[float]
    verdict: str  # 'Converges' | 'Diverges' | 'Indeterminate'
    limit: float | None
    growth_exponent: float | None
    max_abs_below_1e3v: float

    def to_json_dict(self) -> dict:
        return {
            "u": self.u, "v_sign": self.v_sign, "branch": self.branch,
            "verdict": self.verdict, "limit": self.limit,
            "growth_exponent": self.growth_exponent,
            "max_abs_small_v": self.max_abs_below_1e3v,
        }


def _sweep_branch(vs: list[float], values: list[float], u: float, sign: int,
                  branch: str) -> BranchSweep:
    finite = [(v_, x) for v_, x in zip(vs, values) if math.isfinite(x)]
    max_small = max((abs(x) for v_, x in finite if abs(v_) < 1e-3), default=0.0)
    verdict, limit, slope = "Indeterminate", None, None
    if len(finite) >= 2:
        (va, xa), (vb, xb) = finite[-2], finite[-1]
        if abs(xb - xa) <= 1e-5 * (1.0 + abs(xb)):
            verdict, limit = "Converges", xb
        else:
            tail = [(math.log(abs(v_)), math.log(abs(x)))
                    for v_, x in finite[-8:] if abs(x) > 0]
            if len(tail) >= 4:
                lx = np.array([t[0] for t in tail])
                ly = np.array([t[1] for t in tail])
                sl, b0 = np.polyfit(lx, ly, 1)
                pred = sl * lx + b0
                ss_res = float(np.sum((ly - pred) ** 2))
                ss_tot = float(np.sum((ly - ly.mean()) ** 2))
                r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
                if sl <= -0.5 and r2 > 0.9:
                    verdict, slope = "Diverges", float(sl)
    return BranchSweep(u=u, v_sign=sign, branch=branch, values=values, vs=vs,
                       verdict=verdict, limit=limit, growth_exponent=slope,
                       max_abs_below_1e3v=max_small)


@dataclass
class LimitReport:
    """Branch behavior of the principal curvatures near a singular point."""

    u0: float
    k: int
    offsets: list[float]
    sweeps: list[BranchSweep]
    converging_branch: dict
    swap_detected: bool
    same_branch_both_sides: bool
    continuous_limits: dict

    def to_json_dict(self) -> dict:
        return {
            "u0": self.u0, "k": self.k, "offsets": self.offsets,
            "sweeps": [s.to_json_dict() for s in self.sweeps],
            "converging_branch": self.converging_branch,
            "swap_detected": self.swap_detected,
            "same_branch_both_sides": self.same_branch_both_sides,
            "continuous_limits": self.continuous_limits,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def limit_profile(chart: FrontalChart, u0: float, side: str = "both",
                  offsets=(0.1, 0.2), h0: float = 0.1,
                  n_steps: int = 20) -> LimitReport:
    """Sweep both principal-curvature branches along v = +-h0 2^-n at u
    offsets beside u0 and classify each as converging or diverging.

    For an even vanishing order the same branch converges on both sides of
    u0 (at fixed v-sign); for an odd order the converging branch label swaps
    across u0.  Branches are labeled by the sign in front of the square
    root; swaps of that label with the sign of v are reported, not hidden.
    """
    rep = chart.classify_singular_point(u0)
    if rep.verdict != K_NON_FRONT:
        raise NotKNonFront(
            f"limit_profile needs a k-non-front point; got {rep.verdict} at u0={u0}"
        )
    if side == "left":
        us = [u0 - d for d in offsets]
    elif side == "right":
        us = [u0 + d for d in offsets]
    else:
        us = [u0 - d for d in offsets] + [u0 + d for d in offsets]

    vs_pos = [h0 * 2.0 ** (-n) for n in range(1, n_steps + 1)]
    sweeps: list[BranchSweep] = []
    for u in us:
        for sign in (+1, -1):
            k1s, k2s, vlist = [], [], []
            for vv in vs_pos:
                v = sign * vv
                fd = fundamental_data(chart, (u, v), order=2)
                A = fd.A_jet().value
                num2 = fd.inner_numerator().value
                det = fd.metric_det().value
                B = math.sqrt(max(fd.discriminant().value, 0.0))
                k1, k2 = _principal_pair_stable(A, B, num2, det, v)
                k1s.append(k1)
                k2s.append(k2)
                vlist.append(v)
            sweeps.append(_sweep_branch(vlist, k1s, u, sign, "kappa1"))
            sweeps.append(_sweep_branch(vlist, k2s, u, sign, "kappa2"))

    # which +-sqrt label converges, per (u side, v sign)
    conv: dict = {}
    for s in sweeps:
        key = ("right" if s.u > u0 else "left", s.v_sign)
        if s.verdict == "Converges":
            conv.setdefault(key, set()).add(s.branch)
    def _only(key):
        labels = conv.get(key, set())
        return sorted(labels)[0] if len(labels) == 1 else None
    per_side = {f"{side_}|v{'+' if sg > 0 else '-'}": _only((side_, sg))
                for side_ in ("left", "right") for sg in (+1, -1)}
    swap = (per_side["left|v+"] is not None and per_side["right|v+"] is not None
            and per_side["left|v+"] != per_side["right|v+"])
    same = (per_side["left|v+"] is not None
            and per_side["left|v+"] == per_side["right|v+"])

    # continuous extension value per u: limits agree between v-signs
    cont: dict = {}
    for u in us:
        lims = [s.limit for s in sweeps
                if s.u == u and s.verdict == "Converges" and s.limit is not None]
        if len(lims) >= 2:
            cont[f"{u:.6g}"] = {
                "value": lims[-1],
                "max_disagreement": max(lims) - min(lims),
            }
    return LimitReport(u0=u0, k=rep.k, offsets=list(offsets), sweeps=sweeps,
                       converging_branch=per_side, swap_detected=swap,
                       same_branch_both_sides=same, continuous_limits=cont)


# -- bounded Gaussian curvature at non-front points -----------------------------


def limiting_normal_curvature_raw(chart: FrontalChart, u0: float) -> float:
    """kappa_nu at (u0,0) from the reparametrization-invariant ratio
    <c'', nu>/|c'|^2 of the traced singular curve."""
    fj = chart.f((u0, 0.0), 2)
    nu0 = chart.gauss((u0, 0.0), 0).value()
    fu = np.array([fj.x.partial(1, 0), fj.y.partial(1, 0), fj.z.partial(1, 0)])
    fuu = np.array([fj.x.partial(2, 0), fj.y.partial(2, 0), fj.z.partial(2, 0)])
    return float(np.dot(fuu, nu0) / np.dot(fu, fu))


@dataclass
class BoundedGaussReport:
    u0: float
    K_at_point: float
    kappa_t: float
    K_nonpositive: bool
    zero_iff_torsion_zero: bool
    max_kappa_nu_sampled: float

    def to_json_dict(self) -> dict:
        return self.__dict__.copy()


def bounded_gauss_check(chart: FrontalChart, u0: float, tol: float = 1e-8,
                        n_check: int = 17) -> BoundedGaussReport:
    """Check boundedness of K near (u0, 0) and the sign law K = -kappa_t^2.

    Boundedness is detected by the limiting normal curvature vanishing along
    the sampled singular curve; K at the point is then computed through the
    v-divided form and must be nonpositive, vanishing exactly when the
    cuspidal torsion does.
    """
    kn = [abs(limiting_normal_curvature_raw(chart, us))
          for us in chart.sample_us(n_check)]
    worst = max(kn)
    if worst > tol:
        raise NotBounded(
            f"limiting normal curvature up to {worst:.3e} along the axis: "
            "K is unbounded"
        )
    fd = fundamental_data(chart, (u0, 0.0))
    L1 = fd.Lt.divide_by_v(chart.policy)
    m = L1.order
    K_pt = ((L1 * fd.Nt.truncated(m) - fd.Mt.truncated(m) * fd.Mt.truncated(m))
            / fd.metric_det().truncated(m)).value

    from .invariants import edge_invariants  # deferred: avoids an import cycle

    prof = edge_invariants(chart, u0)
    k_t = prof.kappa_t
    K_ok = K_pt <= tol
    equiv = (abs(K_pt) <= tol) == (abs(k_t) <= math.sqrt(tol))
    return BoundedGaussReport(u0=u0, K_at_point=K_pt, kappa_t=k_t,
                              K_nonpositive=K_ok, zero_iff_torsion_zero=equiv,
                              max_kappa_nu_sampled=worst)


# -- algebraic self-checks -------------------------------------------------------


def discriminant_identity_residual(chart: FrontalChart, point) -> float:
    """Relative disagreement of two expansions of the scaled discriminant
    4 v^2 (Et Gt - Ft^2)^2 (H^2 - K) at a regular point.

    The second expansion is the sum of squares
        4 v^2 (Et Gt - Ft^2) (Et Mt - Ft Lt)^2 / Et^2
      + ((Et Nt - v Gt Lt) - (2 v Ft / Et)(Et Mt - Ft Lt))^2,
    which also exhibits H^2 - K >= 0.
    """
    u0, v0 = float(point[0]), float(point[1])
    fd = fundamental_data(chart, (u0, v0), order=0)
    E, F, G = fd.Et.value, fd.Ft.value, fd.Gt.value
    L, M, N = fd.Lt.value, fd.Mt.value, fd.Nt.value
    v = v0
    det = E * G - F * F
    A = E * N - 2 * v * F * M + v * G * L
    lhs = A * A - 4 * v * det * (L * N - v * M * M)
    q = E * M - F * L
    rhs = 4 * v * v * det * q * q / (E * E) + ((E * N - v * G * L) - 2 * v * F / E * q) ** 2
    scale = max(abs(lhs), abs(rhs), 1e-30)
    return abs(lhs - rhs) / scale


def form_relation_residual(chart: FrontalChart, point) -> float:
    """Largest relative error in E = Et, F = v Ft, G = v^2 Gt, L = Lt,
    M = v Mt, N = v Nt against the directly computed fundamental forms."""
    u0, v0 = float(point[0]), float(point[1])
    if abs(v0) <= _AXIS_TOL:
        raise ValueError("relation check needs a regular point (v != 0)")
    fd = fundamental_data(chart, (u0, v0), order=0)
    fj = chart.f((u0, v0), 3)
    nu = chart.gauss((u0, v0), 2)
    fu, fv = fj.d_u().truncated(1), fj.d_v().truncated(1)
    nuu, nuv = nu.d_u(), nu.d_v()
    direct = {
        "E": fu.dot(fu).value,
        "F": fu.dot(fv).value,
        "G": fv.dot(fv).value,
        "L": -fu.dot(nuu).value,
        "M": -fu.dot(nuv).value,
        "N": -fv.dot(nuv).value,
    }
    scaled = {
        "E": fd.Et.value,
        "F": v0 * fd.Ft.value,
        "G": v0 * v0 * fd.Gt.value,
        "L": fd.Lt.value,
        "M": v0 * fd.Mt.value,
        "N": v0 * fd.Nt.value,
    }
    worst = 0.0
    for key, want in direct.items():
        scale = max(abs(want), abs(scaled[key]), 1.0)
        worst = max(worst, abs(want - scaled[key]) / scale)
    return worst
