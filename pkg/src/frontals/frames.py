"""Principal vectors, curvature-line frames and the moving-frame equations.

At a regular non-umbilic point the coordinate pair

    V_j = (-v (Mt - kappa_j Ft), Lt - kappa_j Et)

spans the principal direction of kappa_j; its image satisfies

    df(V_j) = v (-(Mt - kappa_j Ft) f_u + (Lt - kappa_j Et) h),

so e_j = df(V_j)/|df(V_j)| extends across the singular curve wherever the
principal curvatures do.  On a pure-frontal edge with nonzero cuspidal
torsion both V_j collapse onto the null direction; when the torsion
vanishes identically an independent pair is produced from the v-divided
second column of the shape operator.

The frame {e1, e2, nu} obeys a Frenet-type system along two generators;
its six coefficients satisfy one Gauss and two Codazzi integrability
equations that are checked numerically as residuals.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import FrontalChart, PURE_FRONTAL
from .curvature import FundamentalData, fundamental_data
from .jets import DegenerateFrame, Jet2, JetVec3, NotDivisible, jet_sqrt

__all__ = [
    "UmbilicPoint",
    "NotApplicable",
    "PrincipalData",
    "principal_vectors",
    "curvature_line_frame",
    "FrameSample",
    "FrenetCoefficients",
    "frenet_coefficients",
]

_AXIS_TOL = 1e-13


class UmbilicPoint(ValueError):
    """Principal directions are undefined where H^2 - K vanishes."""


class NotApplicable(ValueError):
    """Requested construction is not defined at this point."""


def _kappas_at(chart: FrontalChart, fd: FundamentalData, base,
               umbilic_tol: float) -> tuple[float, float]:
    det = fd.metric_det()
    v0 = base[1]
    if abs(v0) > _AXIS_TOL:
        K = fd.inner_numerator().value / (v0 * det.value)
        H = fd.A_jet().value / (2 * v0 * det.value)
    else:
        try:
            N1 = fd.Nt.divide_by_v(chart.policy)
        except NotDivisible:
            raise NotApplicable(
                "principal curvatures do not extend to this singular point"
            ) from None
        m = N1.order
        K = ((fd.Lt.truncated(m) * N1 - fd.Mt.truncated(m) ** 2)
             / det.truncated(m)).value
        H = ((fd.Et.truncated(m) * N1 - 2 * fd.Ft.truncated(m) * fd.Mt.truncated(m)
              + fd.Gt.truncated(m) * fd.Lt.truncated(m))
             / (2 * det.truncated(m))).value
    gamma = H * H - K
    if gamma <= umbilic_tol:
        raise UmbilicPoint(f"H^2 - K = {gamma:.3e} at {tuple(base)}")
    root = math.sqrt(gamma)
    return H + root, H - root


@dataclass
class PrincipalData:
    """Principal vectors, the orthonormal pair they induce, and residuals."""

    point: tuple[float, float]
    kappa1: float
    kappa2: float
    V1: tuple[float, float]
    V2: tuple[float, float]
    e1: np.ndarray
    e2: np.ndarray
    W1: tuple[float, float] | None
    W2: tuple[float, float] | None
    eigen_residual: float
    orthogonality: float

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point),
            "kappa1": self.kappa1, "kappa2": self.kappa2,
            "V1": list(self.V1), "V2": list(self.V2),
            "e1": self.e1.tolist(), "e2": self.e2.tolist(),
            "W1": None if self.W1 is None else list(self.W1),
            "W2": None if self.W2 is None else list(self.W2),
            "eigen_residual": self.eigen_residual,
            "orthogonality": self.orthogonality,
        }


def _shape_matrix(fd: FundamentalData, kappa: float, v0: float) -> np.ndarray:
    """The v-divided eigen-system matrix whose kernel holds V for kappa."""
    E, F, G = fd.Et.value, fd.Ft.value, fd.Gt.value
    L, M, N = fd.Lt.value, fd.Mt.value, fd.Nt.value
    return np.array([
        [L - kappa * E, v0 * (M - kappa * F)],
        [M - kappa * F, N - kappa * v0 * G],
    ])


def principal_vectors(chart: FrontalChart, point, umbilic_tol: float = 1e-12,
                      kappa_t_zero_tol: float = 1e-9) -> PrincipalData:
    """Principal vectors at a regular point or along a pure-frontal edge.

    Raises UmbilicPoint where the directions are undefined and
    NotApplicable at singular points whose curvatures do not extend.
    """
    u0, v0 = float(point[0]), float(point[1])
    if not chart.adapted:
        return _principal_vectors_ordinary(chart, (u0, v0), umbilic_tol)
    fd = fundamental_data(chart, (u0, v0))
    k1, k2 = _kappas_at(chart, fd, (u0, v0), umbilic_tol)
    E, F, G = fd.Et.value, fd.Ft.value, fd.Gt.value
    L, M, N = fd.Lt.value, fd.Mt.value, fd.Nt.value
    V = []
    row_used = []
    for kappa in (k1, k2):
        mat = _shape_matrix(fd, kappa, v0)
        row1 = (-v0 * (M - kappa * F), L - kappa * E)
        scale = max(1.0, float(np.max(np.abs(mat))))
        if np.hypot(*row1) > 1e-10 * scale:
            V.append(row1)
            row_used.append(1)
        else:
            # the first row of the eigen-system degenerated (diagonal shape
            # operator); fall back to the kernel vector of the second row
            V.append((-(N - kappa * v0 * G), M - kappa * F))
            row_used.append(2)
    W1 = W2 = None
    if abs(v0) <= _AXIS_TOL and abs(M) <= kappa_t_zero_tol:
        # vanishing cuspidal torsion on the edge: independent v-divided pair
        try:
            N1 = fd.Nt.divide_by_v(chart.policy)
            F1 = fd.Ft.divide_by_v(chart.policy)
            M1 = fd.Mt.divide_by_v(chart.policy)
            m = N1.order
            G_ = fd.Gt.truncated(m)
            if abs(L - k1 * E) > abs(L - k2 * E):
                keep, kw = 0, k2
            else:
                keep, kw = 1, k1
            Wt = (-(N1.value - kw * G_.value), M1.value - kw * F1.value)
            if keep == 0:
                W1, W2 = V[0], Wt
            else:
                W1, W2 = Wt, V[1]
        except NotDivisible:
            pass

    fj = chart.f((u0, v0), 2)
    fu = fj.d_u().value()
    fv = fj.d_v().value()
    hh = chart.h((u0, v0), 1).value()
    es = []
    for kappa, vec, row in zip((k1, k2), V, row_used):
        if row == 1:
            # v-divided image of the row-1 kernel vector; smooth across v=0
            w = -(M - kappa * F) * fu + (L - kappa * E) * hh
        else:
            w = vec[0] * fu + vec[1] * fv
            if np.linalg.norm(w) < chart.policy.frame_tol and abs(v0) <= _AXIS_TOL:
                w = vec[1] * hh  # image direction of the null component
        n = np.linalg.norm(w)
        if n < chart.policy.frame_tol:
            raise DegenerateFrame(f"frame vector vanished at {(u0, v0)}")
        es.append(w / n)
    resid = 0.0
    for kappa, vec in zip((k1, k2), V):
        mat = _shape_matrix(fd, kappa, v0)
        scale = max(1.0, float(np.max(np.abs(mat))), float(np.max(np.abs(vec))))
        resid = max(resid, float(np.linalg.norm(mat @ np.array(vec))) / scale**2)
    return PrincipalData(
        point=(u0, v0), kappa1=k1, kappa2=k2, V1=tuple(V[0]), V2=tuple(V[1]),
        e1=es[0], e2=es[1], W1=W1, W2=W2, eigen_residual=resid,
        orthogonality=abs(float(np.dot(es[0], es[1]))),
    )


def _principal_vectors_ordinary(chart: FrontalChart, point, umbilic_tol: float) -> PrincipalData:
    # regular-surface route for non-adapted charts
    u0, v0 = point
    fj = chart.f((u0, v0), 3)
    nu = chart.gauss((u0, v0), 2)
    fu, fv = fj.d_u().truncated(1), fj.d_v().truncated(1)
    nuu, nuv = nu.d_u(), nu.d_v()
    E, F, G = fu.dot(fu).value, fu.dot(fv).value, fv.dot(fv).value
    L, M, N = -fu.dot(nuu).value, -fu.dot(nuv).value, -fv.dot(nuv).value
    det = E * G - F * F
    K = (L * N - M * M) / det
    H = (E * N - 2 * F * M + G * L) / (2 * det)
    gamma = H * H - K
    if gamma <= umbilic_tol:
        raise UmbilicPoint(f"H^2 - K = {gamma:.3e} at {tuple(point)}")
    root = math.sqrt(gamma)
    k1, k2 = H + root, H - root
    out_V, out_e = [], []
    for kappa in (k1, k2):
        a, b = L - kappa * E, M - kappa * F
        c, d = M - kappa * F, N - kappa * G
        vec = (-b, a) if max(abs(a), abs(b)) >= max(abs(c), abs(d)) else (-d, c)
        out_V.append(vec)
        w = vec[0] * fu.value() + vec[1] * fv.value()
        out_e.append(w / np.linalg.norm(w))
    resid = 0.0
    for kappa, vec in zip((k1, k2), out_V):
        mat = np.array([[L - kappa * E, M - kappa * F], [M - kappa * F, N - kappa * G]])
        scale = max(1.0, float(np.max(np.abs(mat))), float(np.max(np.abs(vec))))
        resid = max(resid, float(np.linalg.norm(mat @ np.array(vec))) / scale**2)
    return PrincipalData(point=(float(u0), float(v0)), kappa1=k1, kappa2=k2,
                         V1=tuple(out_V[0]), V2=tuple(out_V[1]),
                         e1=out_e[0], e2=out_e[1], W1=None, W2=None,
                         eigen_residual=resid,
                         orthogonality=abs(float(np.dot(out_e[0], out_e[1]))))


def df_of_vector(chart: FrontalChart, point, vec) -> np.ndarray:
    """df(V) for a coordinate vector V at a point."""
    fj = chart.f((float(point[0]), float(point[1])), 1)
    fu = fj.d_u().value()
    fv_full = chart.f((float(point[0]), float(point[1])), 2).d_v().value()
    return vec[0] * fu + vec[1] * fv_full


# -- curvature line frames ------------------------------------------------------


@dataclass
class FrameSample:
    """A curvature-line frame at one point plus its defining residuals."""

    point: tuple[float, float]
    e1: np.ndarray
    e2: np.ndarray
    nu: np.ndarray
    method: str
    orthonormality: float
    dependency_residuals: dict

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point), "method": self.method,
            "e1": self.e1.tolist(), "e2": self.e2.tolist(), "nu": self.nu.tolist(),
            "orthonormality": self.orthonormality,
            "dependency_residuals": self.dependency_residuals,
        }


def _unit(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x)


def _dependency(a: np.ndarray, b: np.ndarray) -> float:
    """Scaled |a x b|; zero iff the pair is linearly dependent."""
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < 1e-15 or nb < 1e-15:
        return 0.0
    return float(np.linalg.norm(np.cross(a, b)) / (na * nb))


def curvature_line_frame(chart: FrontalChart, point, method: str = "auto") -> FrameSample:
    """Orthonormal pair {e1, e2} spanning the tangent plane along principal
    directions.

    method 'principal' builds the frame from the principal-vector images
    (needs a non-umbilic point whose curvatures extend); method 'axis'
    takes e1 along f_u and e2 along the v-divided velocity, which is a
    curvature-line frame exactly when the chart's coordinate lines follow
    the curvature lines (surfaces of revolution, standard cuspidal-edge
    charts).  'auto' tries 'principal' and falls back to 'axis' on the
    singular curve of a front.
    """
    u0, v0 = float(point[0]), float(point[1])
    nu0 = chart.gauss((u0, v0), 1)
    if method == "auto":
        try:
            return curvature_line_frame(chart, point, "principal")
        except (NotApplicable, NotDivisible):
            return curvature_line_frame(chart, point, "axis")
    if method == "principal":
        pd = principal_vectors(chart, (u0, v0))
        e1, e2 = pd.e1, pd.e2
        dep = {
            "df_V1_vs_e1": _dependency(df_of_vector(chart, point, pd.V1), e1)
            if abs(v0) > _AXIS_TOL else 0.0,
            "df_V2_vs_e2": _dependency(df_of_vector(chart, point, pd.V2), e2)
            if abs(v0) > _AXIS_TOL else 0.0,
        }
    elif method == "axis":
        fj = chart.f((u0, v0), 2)
        fu = fj.d_u().value()
        if chart.adapted:
            omega = chart.h((u0, v0), 1).value()
        else:
            omega = fj.d_v().value()
        if np.linalg.norm(np.cross(fu, omega)) < chart.policy.frame_tol:
            raise DegenerateFrame(f"f_u and omega dependent at {(u0, v0)}")
        e1 = _unit(fu)
        # orthogonalize omega against e1; exact curvature-line charts have
        # <f_u, omega> = 0 already, the residual is reported below
        e2 = _unit(omega - np.dot(omega, e1) * e1)
        nuu = nu0.d_u().value()
        nuv = nu0.d_v().value()
        dep = {
            "generator_orthogonality": abs(float(np.dot(fu, omega)))
            / max(1.0, np.linalg.norm(fu) * np.linalg.norm(omega)),
            "nu_u_vs_e1": _dependency(nuu, e1),
            "nu_v_vs_e2": _dependency(nuv, e2),
        }
    else:
        raise ValueError(f"unknown method {method!r}")
    orth = max(
        abs(float(np.dot(e1, e2))),
        abs(float(np.dot(e1, e1)) - 1.0),
        abs(float(np.dot(e2, e2)) - 1.0),
        abs(float(np.dot(e1, nu0.value()))),
        abs(float(np.dot(e2, nu0.value()))),
    )
    return FrameSample(point=(u0, v0), e1=e1, e2=e2, nu=nu0.value(),
                       method=method, orthonormality=orth,
                       dependency_residuals=dep)


# -- Frenet system ----------------------------------------------------------------


def _frame_jets(chart: FrontalChart, base, order: int, method: str):
    """(e1, e2, nu) as jet-valued fields around a point."""
    fj = chart.f(base, order + 2)
    nu = chart.gauss(base, order + 1)
    fu = fj.d_u()
    if method == "axis":
        if chart.adapted:
            omega = chart.h(base, order + 1)
        else:
            omega = fj.d_v()
        e1 = fu.normalized(chart.policy)
        proj = omega.dot(e1)
        e2 = (omega - e1.scale(proj)).normalized(chart.policy)
        return e1, e2, nu
    if method == "principal":
        fd = fundamental_data(chart, base, order + 1)
        det = fd.metric_det()
        v = fd.v_jet()
        if abs(base[1]) > _AXIS_TOL:
            K = fd.inner_numerator() / (v * det)
            H = fd.A_jet() / (2 * v * det)
        else:
            N1 = fd.Nt.divide_by_v(chart.policy)
            m = N1.order
            K = (fd.Lt.truncated(m) * N1 - fd.Mt.truncated(m) ** 2) / det.truncated(m)
            H = (fd.Et.truncated(m) * N1
                 - 2 * fd.Ft.truncated(m) * fd.Mt.truncated(m)
                 + fd.Gt.truncated(m) * fd.Lt.truncated(m)) / (2 * det.truncated(m))
        gamma = H * H - K
        if gamma.value <= 1e-12:
            raise UmbilicPoint(f"H^2 - K = {gamma.value:.3e} at {base}")
        root = jet_sqrt(gamma)
        hh = chart.h(base, order + 1)
        frames = []
        for sign in (+1.0, -1.0):
            kappa = H + root * sign
            m2 = min(kappa.order, fu.order, hh.order, fd.Mt.order)
            w = (fu.truncated(m2).scale(-(fd.Mt.truncated(m2) - kappa.truncated(m2) * fd.Ft.truncated(m2)))
                 + hh.truncated(m2).scale(fd.Lt.truncated(m2) - kappa.truncated(m2) * fd.Et.truncated(m2)))
            frames.append(w.normalized(chart.policy))
        return frames[0], frames[1], nu
    raise ValueError(f"unknown method {method!r}")


@dataclass
class FrenetCoefficients:
    """Connection coefficients of the frame along two generators."""

    point: tuple[float, float]
    generators: tuple[tuple[float, float], tuple[float, float]]
    x1: float
    x2: float
    x3: float
    y1: float
    y2: float
    y3: float
    integrability_residuals: tuple[float, float, float]

    def forced_zero_residual(self) -> float:
        return max(abs(self.x3), abs(self.y2))

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point),
            "generators": [list(g) for g in self.generators],
            "x": [self.x1, self.x2, self.x3],
            "y": [self.y1, self.y2, self.y3],
            "integrability_residuals": list(self.integrability_residuals),
            "forced_zero_residual": self.forced_zero_residual(),
        }


def _coefficients_at(chart: FrontalChart, base, gens, method: str) -> tuple[float, ...]:
    e1, e2, nu = _frame_jets(chart, base, 2, method)
    out = []
    for (a, b) in gens:
        m = e1.order - 1
        de1 = (e1.d_u().scale(a) + e1.d_v().scale(b)).truncated(m)
        de2 = (e2.d_u().scale(a) + e2.d_v().scale(b)).truncated(m)
        out.extend([
            de1.dot(e2.truncated(m)).value,
            de1.dot(nu.truncated(m)).value,
            de2.dot(nu.truncated(m)).value,
        ])
    return tuple(out)


def frenet_coefficients(chart: FrontalChart, point, generators=((1.0, 0.0), (0.0, 1.0)),
                        method: str = "axis", fd_step: float = 1e-2) -> FrenetCoefficients:
    """Frenet coefficients of the frame at a point, with the Gauss and
    Codazzi residuals evaluated by finite differences of the coefficient
    fields along the (constant, hence commuting) generators."""
    u0, v0 = float(point[0]), float(point[1])
    g1, g2 = (tuple(map(float, g)) for g in generators)
    x1, x2, x3, y1, y2, y3 = _coefficients_at(chart, (u0, v0), (g1, g2), method)

    def coeffs(du, dv):
        return _coefficients_at(chart, (u0 + du, v0 + dv), (g1, g2), method)

    def d_along(g, idx):
        h = fd_step
        p2 = coeffs(2 * h * g[0], 2 * h * g[1])[idx]
        p1 = coeffs(h * g[0], h * g[1])[idx]
        m1 = coeffs(-h * g[0], -h * g[1])[idx]
        m2 = coeffs(-2 * h * g[0], -2 * h * g[1])[idx]
        return (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h)

    # indices in the coefficient tuple: x1,x2,x3,y1,y2,y3.
    # Zero-curvature of the connection forms: the bracket term enters the
    # third equation with the opposite sign to the derivative.
    r1 = -x2 * y3 + d_along(g2, 0) - d_along(g1, 3)
    r2 = x1 * y3 + d_along(g2, 1)
    r3 = x2 * y1 - d_along(g1, 5)
    return FrenetCoefficients(
        point=(u0, v0), generators=(g1, g2),
        x1=x1, x2=x2, x3=x3, y1=y1, y2=y2, y3=y3,
        integrability_residuals=(r1, r2, r3),
    )
