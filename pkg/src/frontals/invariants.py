"""Edge invariants in orthogonal adapted coordinates.

Every first-kind singular curve admits coordinates in which it is traced at
unit speed, the v-divided acceleration f_ww has unit length on the axis and
is orthogonal to the curve tangent there.  The normalization is built in
three explicit stages anchored at one axis point:

    (i)   u = phi(s), the arc-length reparametrization of the curve,
          integrated as phi' = 1/|f_u(phi, 0)| (classical RK4);
    (ii)  a shear u -> u + c(u) w^2 with c = -<f_u, f_vv>/(2|f_u|^2) on the
          axis, killing <f_s, f_ww>;
    (iii) a scale w -> e(u) w with e = |f_ww|^(-1/2), normalizing |f_ww|.

In the resulting chart the edge invariants are plain frame coefficients:

    kappa_nu = Lt,  kappa_c = 2 Nt,  kappa_t = Mt        (on the axis)
    r_b = 3 d_v Nt,  r_c = 12 (d_v^2 Nt - 4 d_v Ft Mt - 2 d_v Gt d_v Nt)

at non-front points.  An independent route computes r_b and r_c from
iterated directional derivatives along the tilted null field
eta = -v^2 Ft_v(p) d_u + d_v; agreement of the two routes is the module's
core correctness check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEGENERATE,
    FIRST_KIND_FRONT,
    FrontalChart,
    K_NON_FRONT,
    NotAdapted,
    PURE_FRONTAL,
)
from .curvature import FundamentalData, fundamental_data
from .jets import (
    DEFAULT_POLICY,
    Jet2,
    JetVec3,
    NumericPolicy,
    compose,
    det3,
    jet_sqrt,
)

__all__ = [
    "DegenerateEdge",
    "NotPureFrontal",
    "NotSingular",
    "OrthogonalAdaptedChart",
    "normalize_orthogonal_adapted",
    "InvariantProfile",
    "edge_invariants",
    "rb_rc_direct",
    "ExtensionReport",
    "extension_test",
    "UmbilicReport",
    "umbilic_analysis",
]


class DegenerateEdge(ValueError):
    """|f_vv| vanishes on the axis: the point is not of the first kind."""


class InsufficientOrder(ValueError):
    """The chart's jet order is too low for the requested derivative data."""


class NotPureFrontal(ValueError):
    """Operation requires a pure-frontal singular curve."""


class NotSingular(ValueError):
    """Operation requires a singular point."""


# -- univariate jet helpers (functions of the curve parameter only) -----------


def _rebase_urow(jet: Jet2, base) -> Jet2:
    """Reinterpret a u-only jet at a new base with the same u-coefficients."""
    out = Jet2(base, jet.order)
    out.coeffs[:, 0] = jet.coeffs[:, 0]
    return out


def _jet1_compose(outer: Jet2, inner: Jet2) -> Jet2:
    """outer(inner(s)) for u-only jets."""
    zero_v = Jet2.constant(0.0, inner.base, inner.order)
    return compose(outer, inner, zero_v)


def _jet1_integrate(jet: Jet2) -> Jet2:
    """Antiderivative in u with zero constant term, order raised by one."""
    n = jet.order + 2
    out = Jet2(jet.base, jet.order + 1)
    for i in range(jet.order + 1):
        out.coeffs[i + 1, 0] = jet.coeffs[i, 0] / (i + 1)
    return out


def _ode_taylor(q_of_u, u_star: float, s_base: float, order: int) -> Jet2:
    """Taylor jet (in s, at s_base) of the solution of phi' = q(phi) with
    phi(s_base) = u_star.  ``q_of_u(u0, order)`` must return q's u-only jet.
    """
    phi = Jet2.constant(u_star, (s_base, 0.0), order)
    for _ in range(order):
        q_jet = q_of_u(u_star, order)  # based at (u_star, 0)
        rhs = _jet1_compose(q_jet, phi)
        nxt = _jet1_integrate(rhs.truncated(order - 1) if order >= 1 else rhs)
        phi = Jet2.constant(u_star, (s_base, 0.0), order) + nxt.truncated(order)
    return phi


# -- the normalized chart ------------------------------------------------------


class _NormalizedSurface:
    """Surface map of the orthogonal adapted chart anchored at one axis point."""

    def __init__(self, chart: FrontalChart, u0: float, rk_step: float):
        self.chart = chart
        self.u0 = float(u0)
        self.rk_step = rk_step
        self.name = f"{chart.name}|orthogonal-adapted@{u0:g}"
        self.adapted = True
        self._phi_cache: dict[float, float] = {0.0: self.u0}

    @property
    def u_range(self):
        return (-1.0, 1.0)  # s-coordinates near the anchor

    @property
    def v_range(self):
        return self.chart.v_range

    # arc-length speed q(u) = 1/|f_u(u, 0)| as a u-only jet
    def _q_jet(self, u_star: float, order: int) -> Jet2:
        fu = self.chart.f((u_star, 0.0), order + 1).d_u()
        speed2 = fu.dot(fu)
        # restrict to the axis: keep only the u-row
        axis = Jet2((u_star, 0.0), order)
        axis.coeffs[:, 0] = speed2.coeffs[: order + 1, 0]
        return 1.0 / jet_sqrt(axis)

    def _q_value(self, u: float) -> float:
        fu = self.chart.f((u, 0.0), 1).d_u()
        return 1.0 / float(np.linalg.norm(fu.value()))

    def phi_value(self, s: float) -> float:
        """phi(s) by classical RK4 from the anchor."""
        key = round(s, 15)
        hit = self._phi_cache.get(key)
        if hit is not None:
            return hit
        n = max(1, int(math.ceil(abs(s) / self.rk_step)))
        h = s / n
        u = self.u0
        for _ in range(n):
            k1 = self._q_value(u)
            k2 = self._q_value(u + 0.5 * h * k1)
            k3 = self._q_value(u + 0.5 * h * k2)
            k4 = self._q_value(u + h * k3)
            u += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        self._phi_cache[key] = u
        return u

    def _axis_data(self, s0: float, order: int):
        """u-only jets of phi (order+1), c and e (order) at s0."""
        u_star = self.phi_value(s0)
        phi = _ode_taylor(self._q_jet, u_star, s0, order + 1)
        f_of_phi = self.chart.f((u_star, 0.0), order + 1)
        g_s = JetVec3(*(_jet1_compose(c, phi) for c in f_of_phi.components())).d_u()
        h_of_phi = self.chart.h((u_star, 0.0), order)
        h_g = JetVec3(*(_jet1_compose(c, phi) for c in h_of_phi.components()))
        m = min(g_s.order, h_g.order)
        g_s, h_g = g_s.truncated(m), h_g.truncated(m)
        c_jet = g_s.dot(h_g) * (-0.5)
        g2_ww = g_s.scale(2 * c_jet) + h_g
        norm2 = g2_ww.dot(g2_ww)
        if norm2.value < 1e-20:
            raise DegenerateEdge(
                f"|f_vv| ~ 0 on the axis near u={u_star:g}: not first kind"
            )
        e_jet = 1.0 / jet_sqrt(jet_sqrt(norm2))
        return phi, c_jet, e_jet

    def change_jets(self, base, order: int) -> tuple[Jet2, Jet2]:
        """(u(s,w), v(s,w)) of the composite change at the given base."""
        s0, w0 = float(base[0]), float(base[1])
        phi1, c1, e1 = self._axis_data(s0, order)
        b = (s0, w0)
        c_j = _rebase_urow(c1, b)
        e_j = _rebase_urow(e1, b)
        S = Jet2.variable_u(b, order)
        W = Jet2.variable_v(b, order)
        inner = S + c_j * e_j * e_j * W * W
        inner_val = inner.value
        u_star2 = self.phi_value(inner_val) if abs(inner_val - s0) > 0 else self.phi_value(s0)
        phi_at_inner = _ode_taylor(self._q_jet, u_star2, inner_val, order)
        U = compose(phi_at_inner, inner, Jet2.constant(0.0, b, order))
        V = e_j * W
        return U, V

    def jet(self, base, order: int) -> JetVec3:
        U, V = self.change_jets(base, order)
        f_at = self.chart.f((U.value, V.value), order)
        return f_at.compose(U, V)

    def gauss_jet(self, base, order: int) -> JetVec3 | None:
        explicit = self.chart.surface.gauss_jet((0.0, 0.0), 0)
        if explicit is None:
            return None
        U, V = self.change_jets(base, order)
        nu_at = self.chart.gauss((U.value, V.value), order)
        return nu_at.compose(U, V)


@dataclass
class OrthogonalAdaptedChart:
    """An anchored orthogonal adapted chart plus its normalization data."""

    original: FrontalChart
    u0: float
    chart: FrontalChart           # evaluate in (s, w) coordinates
    scale_at_anchor: float        # e(0)
    shear_at_anchor: float        # c(0)
    speed_at_anchor: float        # phi'(0)

    def axis_residuals(self, s_samples=(0.0,)) -> dict[str, float]:
        """Worst |f_s|-1, |f_ww|-1 and <f_s, f_ww> over axis samples."""
        worst = {"speed": 0.0, "accel_norm": 0.0, "orthogonality": 0.0}
        for s in s_samples:
            fj = self.chart.f((float(s), 0.0), 3)
            fs = fj.d_u()
            fww = JetVec3(
                *(Jet2.constant(c.partial(0, 2), fj.base, 0) for c in fj.components())
            )
            fs0 = fs.value()
            fww0 = fww.value()
            worst["speed"] = max(worst["speed"], abs(np.linalg.norm(fs0) - 1.0))
            worst["accel_norm"] = max(worst["accel_norm"], abs(np.linalg.norm(fww0) - 1.0))
            worst["orthogonality"] = max(worst["orthogonality"], abs(float(np.dot(fs0, fww0))))
        return worst


def normalize_orthogonal_adapted(chart: FrontalChart, u0: float,
                                 rk_step: float | None = None) -> OrthogonalAdaptedChart:
    """Construct the orthogonal adapted chart anchored at (u0, 0)."""
    if not chart.adapted:
        raise NotAdapted(f"chart {chart.name!r} is not adapted")
    if rk_step is None:
        rk_step = 1e-3 * (chart.u_range[1] - chart.u_range[0])
    surf = _NormalizedSurface(chart, u0, rk_step)
    phi1, c1, e1 = surf._axis_data(0.0, max(2, chart.order - 1))
    inner = FrontalChart(surf, policy=chart.policy, order=chart.order)
    return OrthogonalAdaptedChart(
        original=chart, u0=u0, chart=inner,
        scale_at_anchor=e1.value, shear_at_anchor=c1.value,
        speed_at_anchor=phi1.coefficient(1, 0),
    )


# -- invariants ----------------------------------------------------------------


@dataclass
class InvariantProfile:
    """First- and second-order edge invariants at one singular point."""

    u0: float
    kappa_nu: float
    kappa_c: float
    kappa_t: float
    r_b: float | None
    r_c: float | None
    l_coeff: float
    extension_ok: bool | None
    H_edge: float | None
    Gamma_edge: float | None

    def to_json_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _is_zero(x: float, tol: float) -> bool:
    return abs(x) <= tol


def edge_invariants(chart: FrontalChart, u0: float, zero_tol: float = 1e-9,
                    _oc: OrthogonalAdaptedChart | None = None) -> InvariantProfile:
    """Evaluate the edge invariants in the normalized chart at (u0, 0).

    The bias r_b and secondary cuspidal curvature r_c are reported only at
    non-front points (kappa_c = 0), where they are defined; elsewhere they
    are absent rather than zero.
    """
    oc = _oc if _oc is not None else normalize_orthogonal_adapted(chart, u0)
    fd = fundamental_data(oc.chart, (0.0, 0.0))
    if fd.order < 2:
        raise InsufficientOrder(
            f"second v-derivatives of the frame data need jet order >= 4; "
            f"chart order {oc.chart.order} leaves only order {fd.order}"
        )
    kappa_nu = fd.Lt.value
    kappa_c = 2.0 * fd.Nt.value
    kappa_t = fd.Mt.value
    l_coeff = fd.Gt.partial(0, 1)
    scale = 1.0 + max(abs(kappa_nu), abs(kappa_t), fd.Nt.max_abs_coeff())
    if _is_zero(kappa_c, zero_tol * scale):
        r_b = 3.0 * fd.Nt.partial(0, 1)
        r_c = 12.0 * (
            fd.Nt.partial(0, 2)
            - 4.0 * fd.Ft.partial(0, 1) * fd.Mt.value
            - 2.0 * fd.Gt.partial(0, 1) * fd.Nt.partial(0, 1)
        )
        gap = (r_b / 3.0 - kappa_nu) ** 2 + 4.0 * kappa_t**2
        extension_ok = gap > zero_tol * scale**2
        H_edge = kappa_nu / 2.0 + r_b / 6.0
        Gamma_edge = 0.25 * (r_b / 3.0 - kappa_nu) ** 2 + kappa_t**2
    else:
        r_b = r_c = None
        extension_ok = None
        H_edge = Gamma_edge = None
    return InvariantProfile(
        u0=u0, kappa_nu=kappa_nu, kappa_c=kappa_c, kappa_t=kappa_t,
        r_b=r_b, r_c=r_c, l_coeff=l_coeff, extension_ok=extension_ok,
        H_edge=H_edge, Gamma_edge=Gamma_edge,
    )


def _eta_apply(a_field: Jet2, g: JetVec3) -> JetVec3:
    """Directional derivative a d_u g + d_v g (order drops by one)."""
    m = g.order - 1
    gu = g.d_u()
    gv = g.d_v()
    return gu.scale(a_field.truncated(m)) + gv


def rb_rc_direct(chart: FrontalChart, u0: float,
                 _oc: OrthogonalAdaptedChart | None = None) -> dict:
    """r_b and r_c from iterated derivatives along the tilted null field.

    Independent of the frame-coefficient route: only f's jet in the
    normalized chart and the field eta = -v^2 Ft_v(p) d_u + d_v enter.
    Also verifies the third derivative is proportional to the second and
    the on-axis identity h_v(p) = Ft_v(p) f_u(p) + (Gt_v(p)/2) h(p).
    """
    oc = _oc if _oc is not None else normalize_orthogonal_adapted(chart, u0)
    nchart = oc.chart
    base = (0.0, 0.0)
    order = nchart.order
    if order < 5:
        raise InsufficientOrder(
            f"five derivatives along the null field need jet order >= 5; "
            f"chart order is {order}"
        )
    fj = nchart.f(base, order)
    fd = fundamental_data(nchart, base)
    ft_v = fd.Ft.partial(0, 1)
    gt_v = fd.Gt.partial(0, 1)

    a_field = Jet2.variable_v(base, order) ** 2 * (-ft_v)
    derivs = [fj]
    for _ in range(5):
        derivs.append(_eta_apply(a_field, derivs[-1]))
    xi_f = fj.d_u().value()
    eta2, eta3, eta4, eta5 = (derivs[k].value() for k in (2, 3, 4, 5))

    n2 = float(np.dot(eta2, eta2))
    l_from_ratio = float(np.dot(eta3, eta2)) / n2
    l_residual = float(np.linalg.norm(eta3 - l_from_ratio * eta2))
    cross = np.cross(xi_f, eta2)
    denom = float(np.linalg.norm(cross))
    speed2 = float(np.dot(xi_f, xi_f))
    r_b = speed2 * float(np.linalg.det(np.stack([xi_f, eta2, eta4]))) / denom**3
    arg = 3.0 * eta5 - 10.0 * l_from_ratio * eta4
    r_c = (speed2 ** 1.25
           * float(np.linalg.det(np.stack([xi_f, eta2, arg]))) / denom**3.5)

    # h_v(p) decomposition on the frame {f_u, h}
    hh = nchart.h(base, order - 1)
    h_v0 = hh.d_v().value()
    resid_hv = float(np.linalg.norm(
        h_v0 - ft_v * fj.d_u().value() - 0.5 * gt_v * hh.value()
    ))
    return {
        "r_b": r_b,
        "r_c": r_c,
        "l": l_from_ratio,
        "l_vs_Gt_v": abs(l_from_ratio - gt_v),
        "eta3_parallel_residual": l_residual,
        "h_v_decomposition_residual": resid_hv,
        "tangential_residuals": (
            abs(float(np.dot(xi_f, eta2))),
            abs(float(np.dot(xi_f, eta3))),
        ),
    }


# -- extension of principal curvatures across a pure-frontal edge ---------------


@dataclass
class ExtensionReport:
    u0s: list[float]
    extension_ok: list[bool]
    edge_kappas: list[tuple[float, float] | None]
    sweep_kappas: list[tuple[float, float] | None]
    max_mismatch: float

    def to_json_dict(self) -> dict:
        return {
            "u0s": self.u0s,
            "extension_ok": self.extension_ok,
            "edge_kappas": self.edge_kappas,
            "sweep_kappas": self.sweep_kappas,
            "max_mismatch": self.max_mismatch,
        }


def extension_test(chart: FrontalChart, u0s, sweep_h0: float = 0.05,
                   sweep_n: int = 18) -> ExtensionReport:
    """At pure-frontal points compare the edge values H +- sqrt(Gamma),
    built from the invariants, with the v -> 0 limits of the regular-region
    principal curvatures."""
    from .curvature import curvature_sample

    rep0 = chart.classify_singular_point(float(u0s[0]))
    if rep0.verdict != PURE_FRONTAL:
        raise NotPureFrontal(
            f"extension test needs a pure-frontal curve; got {rep0.verdict}"
        )
    oks: list[bool] = []
    edge_vals: list[tuple[float, float] | None] = []
    sweep_vals: list[tuple[float, float] | None] = []
    worst = 0.0
    for u0 in u0s:
        prof = edge_invariants(chart, float(u0))
        ok = bool(prof.extension_ok)
        oks.append(ok)
        if not ok:
            edge_vals.append(None)
            sweep_vals.append(None)
            continue
        root = math.sqrt(max(prof.Gamma_edge, 0.0))
        edge = (prof.H_edge + root, prof.H_edge - root)
        # normalized chart: sweep w -> 0 at s = 0
        oc = normalize_orthogonal_adapted(chart, float(u0))
        last = None
        for n in range(1, sweep_n + 1):
            w = sweep_h0 * 2.0 ** (-n)
            s = curvature_sample(oc.chart, (0.0, w))
            last = (s.kappa1, s.kappa2)
        edge_vals.append(edge)
        sweep_vals.append(last)
        worst = max(worst,
                    abs(edge[0] - last[0]), abs(edge[1] - last[1]))
    return ExtensionReport(u0s=[float(u) for u in u0s], extension_ok=oks,
                           edge_kappas=edge_vals, sweep_kappas=sweep_vals,
                           max_mismatch=worst)


# -- umbilic analysis ------------------------------------------------------------


@dataclass
class UmbilicReport:
    u0: float
    branch: str                  # 'Gamma' (pure-frontal) | 'GammaTilde' (k-non-front)
    umbilic: bool
    verdict: str                 # 'IsolatedUmbilic' | 'NonMorse' | 'NotUmbilic'
    gradient_closed: tuple[float, float]
    gradient_fd: tuple[float, float]
    hessian_closed: tuple[float, float, float]   # (xx, xy, yy)
    hessian_fd: tuple[float, float, float]
    det_closed: float
    det_fd: float
    morse_index: int | None
    hypothesis: dict

    def to_json_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in self.__dict__.items()}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _invariant_derivative(chart: FrontalChart, u0: float, pick, du: float = 1e-3) -> float:
    """d/ds of an invariant along the arc-length parametrized edge."""
    lo = pick(edge_invariants(chart, u0 - du))
    hi = pick(edge_invariants(chart, u0 + du))
    fu = chart.f((u0, 0.0), 1).d_u().value()
    speed = float(np.linalg.norm(fu))
    return (hi - lo) / (2.0 * du) / speed


def _gamma_value_pure(nchart: FrontalChart, base) -> float:
    """H^2 - K at a point of a pure-frontal normalized chart."""
    fd = fundamental_data(nchart, base, order=2)
    det = fd.metric_det()
    if abs(base[1]) > 1e-13:
        v0 = base[1]
        K = fd.inner_numerator().value / (v0 * det.value)
        H = fd.A_jet().value / (2 * v0 * det.value)
        return H * H - K
    N1 = fd.Nt.divide_by_v(nchart.policy)
    m = N1.order
    K = ((fd.Lt.truncated(m) * N1 - fd.Mt.truncated(m) ** 2) / det.truncated(m)).value
    H = ((fd.Et.truncated(m) * N1 - 2 * fd.Ft.truncated(m) * fd.Mt.truncated(m)
          + fd.Gt.truncated(m) * fd.Lt.truncated(m)) / (2 * det.truncated(m))).value
    return H * H - K


def _gamma_tilde_value(nchart: FrontalChart, base) -> float:
    fd = fundamental_data(nchart, base, order=2)
    return fd.discriminant().value / fd.metric_det().value


def _fd_grad_hess(value_fn, delta: float) -> tuple[tuple[float, float], tuple[float, float, float]]:
    f = {}
    for i in (-2, -1, 0, 1, 2):
        for j in (-2, -1, 0, 1, 2):
            if abs(i) + abs(j) <= 2 or (abs(i) == 2 and j == 0) or (i == 0 and abs(j) == 2):
                f[(i, j)] = value_fn(i * delta, j * delta)
    gx = (f[(1, 0)] - f[(-1, 0)]) / (2 * delta)
    gy = (f[(0, 1)] - f[(0, -1)]) / (2 * delta)
    hxx = (f[(1, 0)] - 2 * f[(0, 0)] + f[(-1, 0)]) / delta**2
    hyy = (f[(0, 1)] - 2 * f[(0, 0)] + f[(0, -1)]) / delta**2
    hxy = (f[(1, 1)] - f[(1, -1)] - f[(-1, 1)] + f[(-1, -1)]) / (4 * delta**2)
    return (gx, gy), (hxx, hxy, hyy)


def umbilic_analysis(chart: FrontalChart, u0: float, zero_tol: float = 1e-8,
                     fd_delta: float = 1e-3) -> UmbilicReport:
    """Gradient/Hessian of the umbilicity function at a singular point by two
    routes: closed forms in the invariants, and central finite differences
    of the field in the normalized chart.

    Pure-frontal points use Gamma = H^2 - K directly; k-non-front points use
    the desingularized GammaTilde = 4 lambda^2 Gamma.
    """
    rep = chart.classify_singular_point(u0)
    if rep.verdict not in (PURE_FRONTAL, K_NON_FRONT, FIRST_KIND_FRONT):
        raise NotSingular(f"cannot analyze verdict {rep.verdict} at u0={u0}")

    oc = normalize_orthogonal_adapted(chart, u0)
    nchart = oc.chart
    fd = fundamental_data(nchart, (0.0, 0.0))

    if rep.verdict == PURE_FRONTAL:
        prof = edge_invariants(chart, u0, _oc=oc)
        umbilic = abs(prof.Gamma_edge) <= zero_tol
        knp = _invariant_derivative(chart, u0, lambda p: p.kappa_nu)
        rbp = _invariant_derivative(chart, u0, lambda p: p.r_b)
        ktp = _invariant_derivative(chart, u0, lambda p: p.kappa_t)
        rcv = prof.r_c
        a = knp - rbp / 3.0
        grad_closed = (
            0.5 * (prof.kappa_nu - prof.r_b / 3.0) * a + 2 * prof.kappa_t * ktp,
            (rcv / 48.0) * (prof.r_b / 3.0 - prof.kappa_nu),
        )
        hess_closed = (
            0.5 * a * a + 2.0 * ktp * ktp,
            (rcv / 48.0) * (rbp / 3.0 - knp),
            (rcv / 24.0) ** 2 / 2.0,
        )
        det_closed = (rcv / 24.0) ** 2 * ktp * ktp
        (grad_fd, hess_fd) = _fd_grad_hess(
            lambda ds, dw: _gamma_value_pure(nchart, (ds, dw)), fd_delta
        )
        hypothesis = {
            "r_c_nonzero": abs(rcv) > zero_tol,
            "transversal_derivatives": abs(3 * knp - rbp) > zero_tol or abs(ktp) > zero_tol,
        }
        morse = umbilic and abs(det_closed) > zero_tol
        branch = "Gamma"
    else:
        # GammaTilde branch; at front points it simply reports non-umbilicity
        Nt, Lt, Mt = fd.Nt, fd.Lt, fd.Mt
        n_u = Nt.partial(1, 0)
        n_v = Nt.partial(0, 1)
        gt_jet = fd.gamma_tilde()
        umbilic = abs(gt_jet.value) <= zero_tol
        grad_closed = (0.0, 0.0) if umbilic else (gt_jet.partial(1, 0), gt_jet.partial(0, 1))
        hess_closed = (
            2.0 * n_u**2,
            2.0 * n_u * (n_v - Lt.value),
            8.0 * Mt.value**2 + 2.0 * (n_v - Lt.value) ** 2,
        )
        det_closed = 16.0 * Mt.value**2 * n_u**2
        (grad_fd, hess_fd) = _fd_grad_hess(
            lambda ds, dw: _gamma_tilde_value(nchart, (ds, dw)), fd_delta
        )
        hypothesis = {
            "kappa_t_nonzero": abs(Mt.value) > zero_tol,
            "kappa_c_prime_nonzero": abs(n_u) > zero_tol,
        }
        morse = umbilic and abs(det_closed) > zero_tol
        branch = "GammaTilde"

    if not umbilic:
        verdict = "NotUmbilic"
        index = None
    elif morse:
        verdict = "IsolatedUmbilic"
        tr = hess_fd[0] + hess_fd[2]
        index = 0 if tr > 0 else 2
    else:
        verdict = "NonMorse"
        index = None
    return UmbilicReport(
        u0=u0, branch=branch, umbilic=umbilic, verdict=verdict,
        gradient_closed=grad_closed, gradient_fd=grad_fd,
        hessian_closed=hess_closed, hessian_fd=hess_fd,
        det_closed=det_closed,
        det_fd=hess_fd[0] * hess_fd[2] - hess_fd[1] ** 2,
        morse_index=index, hypothesis=hypothesis,
    )
