"""Truncated bivariate Taylor-jet arithmetic.

A ``Jet2`` stores the Taylor coefficients of a smooth function of two
variables at a base point, up to a fixed total degree.  All arithmetic is
exact at the coefficient level up to the truncation order, so jets act as
an exact forward-mode differentiation engine: every partial derivative a
computation needs is read off a coefficient instead of approximated.

``JetVec3`` bundles three jets sharing base point and order and provides
the vector operations (dot, cross, norm, normalization) used to build
surface frames and normals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NumericPolicy",
    "JetError",
    "DivisionByZeroConstant",
    "DomainError",
    "NotDivisible",
    "BasePointMismatch",
    "DegenerateFrame",
    "Jet2",
    "JetVec3",
]


class JetError(ValueError):
    """Base class for jet arithmetic failures."""


class DivisionByZeroConstant(JetError):
    """Division by a jet whose constant term is (numerically) zero."""


class DomainError(JetError):
    """Elementary function applied outside its domain (e.g. sqrt of <= 0)."""


class NotDivisible(JetError):
    """Formal division by v requested on a jet not divisible by v."""


class BasePointMismatch(JetError):
    """Operands disagree on the expansion base point."""


class DegenerateFrame(JetError):
    """A frame vector that must be nonzero has (numerically) zero length."""


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances threaded through every numeric decision.

    eps_div    : relative threshold under which coefficients count as zero
                 when checking divisibility by v.
    eps_den    : absolute threshold on a denominator's constant term below
                 which division is reported as a pole.
    class_tol  : relative threshold for deciding vanishing of classification
                 data (coefficients of the singular-identifier expansion).
    frame_tol  : threshold for degenerate-frame detection.
    """

    eps_div: float = 1e-12
    eps_den: float = 1e-300
    class_tol: float = 1e-9
    frame_tol: float = 1e-12

    def scaled(self, factor: float) -> "NumericPolicy":
        return NumericPolicy(
            eps_div=self.eps_div * factor,
            eps_den=self.eps_den,
            class_tol=self.class_tol * factor,
            frame_tol=self.frame_tol * factor,
        )


DEFAULT_POLICY = NumericPolicy()

# Default truncation order.  Second-order edge data (the secondary cuspidal
# curvature) consumes five derivatives of the surface; one extra order is
# kept as margin for the normalizing coordinate changes.
DEFAULT_ORDER = 6


def _mul_tables(order: int):
    # index pairs (i, j) with i + j <= order, graded-lexicographic
    return [(i, j) for d in range(order + 1) for i in range(d + 1) for j in [d - i]]


class Jet2:
    """Taylor polynomial sum c[i,j] (u-u0)^i (v-v0)^j, i+j <= order.

    Coefficients live in a dense (order+1) x (order+1) array whose strict
    lower-right triangle (i + j > order) is kept at zero; no operation ever
    reads past the truncation degree.
    """

    __slots__ = ("base", "order", "coeffs")

    def __init__(self, base, order: int, coeffs: np.ndarray | None = None):
        if order < 0:
            raise ValueError("jet order must be >= 0")
        self.base = (float(base[0]), float(base[1]))
        self.order = int(order)
        n = self.order + 1
        if coeffs is None:
            self.coeffs = np.zeros((n, n))
        else:
            c = np.asarray(coeffs, dtype=float)
            if c.shape != (n, n):
                raise ValueError(f"coefficient array must be {n}x{n}")
            self.coeffs = c.copy()
            self._clear_overflow()

    def _clear_overflow(self) -> None:
        n = self.order + 1
        for i in range(n):
            self.coeffs[i, n - i:] = 0.0

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value: float, base, order: int) -> "Jet2":
        j = cls(base, order)
        j.coeffs[0, 0] = float(value)
        return j

    @classmethod
    def variable_u(cls, base, order: int) -> "Jet2":
        j = cls(base, order)
        j.coeffs[0, 0] = base[0]
        if order >= 1:
            j.coeffs[1, 0] = 1.0
        return j

    @classmethod
    def variable_v(cls, base, order: int) -> "Jet2":
        j = cls(base, order)
        j.coeffs[0, 0] = base[1]
        if order >= 1:
            j.coeffs[0, 1] = 1.0
        return j

    # -- basic queries ------------------------------------------------------

    @property
    def value(self) -> float:
        return float(self.coeffs[0, 0])

    def coefficient(self, i: int, j: int) -> float:
        if i + j > self.order:
            raise IndexError("total degree exceeds jet order")
        return float(self.coeffs[i, j])

    def partial(self, i: int, j: int) -> float:
        """Value of d^{i+j} f / du^i dv^j at the base point."""
        return self.coefficient(i, j) * math.factorial(i) * math.factorial(j)

    def coefficients_graded(self) -> list[float]:
        """Packed coefficients in graded-lexicographic order."""
        return [float(self.coeffs[i, j]) for i, j in _mul_tables(self.order)]

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def truncated(self, order: int) -> "Jet2":
        if order > self.order:
            raise ValueError("cannot raise truncation order")
        if order == self.order:
            return self
        n = order + 1
        return Jet2(self.base, order, self.coeffs[:n, :n])

    def evaluate(self, du: float, dv: float) -> float:
        """Evaluate the truncated polynomial at base + (du, dv)."""
        upow = du ** np.arange(self.order + 1)
        vpow = dv ** np.arange(self.order + 1)
        return float(upow @ self.coeffs @ vpow)

    # -- ring operations ----------------------------------------------------

    def _check_base(self, other: "Jet2") -> int:
        if self.base != other.base:
            raise BasePointMismatch(
                f"base points differ: {self.base} vs {other.base}"
            )
        return min(self.order, other.order)

    def _coerce(self, other) -> "Jet2 | None":
        if isinstance(other, Jet2):
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet2.constant(float(other), self.base, self.order)
        return None

    def __add__(self, other) -> "Jet2":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._check_base(o)
        n = d + 1
        return Jet2(self.base, d, self.coeffs[:n, :n] + o.coeffs[:n, :n])

    __radd__ = __add__

    def __neg__(self) -> "Jet2":
        return Jet2(self.base, self.order, -self.coeffs)

    def __sub__(self, other) -> "Jet2":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Jet2":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "Jet2":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._check_base(o)
        n = d + 1
        a, b = self.coeffs, o.coeffs
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(n - i):
                aij = a[i, j]
                if aij != 0.0:
                    out[i:, j:] += aij * b[: n - i, : n - j]
        res = Jet2(self.base, d, out)
        return res

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet2":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._check_base(o)
        return _jet_div(self.truncated(d), o.truncated(d))

    def __rtruediv__(self, other) -> "Jet2":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "Jet2":
        if not isinstance(n, (int, np.integer)):
            raise TypeError("jet exponent must be an integer")
        n = int(n)
        if n < 0:
            return Jet2.constant(1.0, self.base, self.order) / self ** (-n)
        result = Jet2.constant(1.0, self.base, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus -----------------------------------------------------------

    def d_u(self) -> "Jet2":
        """Partial derivative in u; truncation order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        n = self.order
        out = np.zeros((n, n))
        for i in range(1, n + 1):
            out[i - 1, : n - (i - 1)] = i * self.coeffs[i, : n - (i - 1)]
        return Jet2(self.base, n - 1, out)

    def d_v(self) -> "Jet2":
        """Partial derivative in v; truncation order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        n = self.order
        out = np.zeros((n, n))
        for j in range(1, n + 1):
            out[: n - (j - 1), j - 1] = j * self.coeffs[: n - (j - 1), j]
        return Jet2(self.base, n - 1, out)

    def divide_by_v(self, policy: NumericPolicy = DEFAULT_POLICY) -> "Jet2":
        """Formal division by (v - v0); requires all v-degree-0 coefficients
        to vanish.  The result has order reduced by one."""
        scale = max(self.max_abs_coeff(), 1.0)
        tol = policy.eps_div * scale
        bad = np.max(np.abs(self.coeffs[:, 0]))
        if bad > tol:
            raise NotDivisible(
                f"jet has v-free coefficients up to {bad:.3e} (tol {tol:.3e})"
            )
        if self.order == 0:
            raise NotDivisible("order-0 jet cannot be divided by v")
        n = self.order
        out = np.zeros((n, n))
        out[:, :] = self.coeffs[:n, 1: n + 1]
        return Jet2(self.base, n - 1, out)

    def shifted_base(self) -> "Jet2":
        return self

    def __repr__(self) -> str:
        terms = []
        for i, j in _mul_tables(self.order):
            c = self.coeffs[i, j]
            if abs(c) > 1e-14:
                terms.append(f"{c:+.6g}*du^{i}*dv^{j}")
        body = " ".join(terms) if terms else "0"
        return f"Jet2(base={self.base}, order={self.order}, {body})"


def _jet_div(a: Jet2, b: Jet2, policy: NumericPolicy = DEFAULT_POLICY) -> Jet2:
    b0 = b.coeffs[0, 0]
    if abs(b0) < policy.eps_den:
        raise DivisionByZeroConstant(
            f"denominator constant term {b0:.3e} below pole threshold"
        )
    n = a.order + 1
    out = np.zeros((n, n))
    # triangular solve order by order in total degree: (out * b) = a
    for d in range(n):
        for i in range(d + 1):
            j = d - i
            acc = a.coeffs[i, j]
            for p in range(i + 1):
                for q in range(j + 1):
                    if p == i and q == j:
                        continue
                    acc -= out[p, q] * b.coeffs[i - p, j - q]
            out[i, j] = acc / b0
    return Jet2(a.base, a.order, out)


# -- elementary functions ----------------------------------------------------


def _compose_series(a: Jet2, derivs: list[float]) -> Jet2:
    """Sum_k derivs[k]/k! * (a - a0)^k, Horner style (derivs at a's value)."""
    x = a - a.value
    result = Jet2.constant(derivs[-1] / math.factorial(len(derivs) - 1), a.base, a.order)
    for k in range(len(derivs) - 2, -1, -1):
        result = result * x + derivs[k] / math.factorial(k)
    return result


def jet_sqrt(a: Jet2) -> Jet2:
    a0 = a.value
    if a0 <= 0.0:
        raise DomainError(f"sqrt of jet with constant term {a0:.3e}")
    r = math.sqrt(a0)
    derivs = [r]
    # d^k sqrt(x) = r * prod_{m<k}(1/2 - m) / a0^k
    coef = 1.0
    for k in range(1, a.order + 1):
        coef *= 0.5 - (k - 1)
        derivs.append(r * coef / a0**k)
    return _compose_series(a, derivs)


def jet_exp(a: Jet2) -> Jet2:
    e = math.exp(a.value)
    return _compose_series(a, [e] * (a.order + 1))


def jet_sin(a: Jet2) -> Jet2:
    s, c = math.sin(a.value), math.cos(a.value)
    cycle = [s, c, -s, -c]
    return _compose_series(a, [cycle[k % 4] for k in range(a.order + 1)])


def jet_cos(a: Jet2) -> Jet2:
    s, c = math.sin(a.value), math.cos(a.value)
    cycle = [c, -s, -c, s]
    return _compose_series(a, [cycle[k % 4] for k in range(a.order + 1)])


def jet_abs(a: Jet2, policy: NumericPolicy = DEFAULT_POLICY) -> Jet2:
    a0 = a.value
    if abs(a0) <= policy.frame_tol * max(1.0, a.max_abs_coeff()):
        raise DomainError("abs of a jet vanishing at the base point is not smooth")
    return a if a0 > 0 else -a


ELEMENTARY = {
    "sqrt": jet_sqrt,
    "exp": jet_exp,
    "sin": jet_sin,
    "cos": jet_cos,
    "abs": jet_abs,
}


def jet_elementary(a: Jet2, fn: str) -> Jet2:
    try:
        f = ELEMENTARY[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    return f(a)


def compose(f: Jet2, u_change: Jet2, v_change: Jet2) -> Jet2:
    """Jet of f(u(s,w), v(s,w)) at the change's base point.

    The change jets must take f's base point as their value.
    """
    if u_change.base != v_change.base:
        raise BasePointMismatch("change components disagree on base point")
    tol = 1e-9 * max(1.0, abs(f.base[0]), abs(f.base[1]))
    if abs(u_change.value - f.base[0]) > tol or abs(v_change.value - f.base[1]) > tol:
        raise BasePointMismatch(
            f"change value {(u_change.value, v_change.value)} does not match "
            f"base point {f.base}"
        )
    order = min(f.order, u_change.order, v_change.order)
    du = (u_change - u_change.value).truncated(order)
    dv = (v_change - v_change.value).truncated(order)
    upow = [Jet2.constant(1.0, du.base, order)]
    vpow = [Jet2.constant(1.0, du.base, order)]
    for _ in range(order):
        upow.append(upow[-1] * du)
        vpow.append(vpow[-1] * dv)
    out = Jet2(du.base, order)
    for i in range(order + 1):
        for j in range(order + 1 - i):
            c = f.coeffs[i, j] if i <= f.order and j <= f.order else 0.0
            if c != 0.0:
                out = out + c * (upow[i] * vpow[j])
    return out


# -- 3-vectors of jets --------------------------------------------------------


@dataclass
class JetVec3:
    """A vector in R^3 whose components are jets at a shared base point."""

    x: Jet2
    y: Jet2
    z: Jet2

    def __post_init__(self):
        if not (self.x.base == self.y.base == self.z.base):
            raise BasePointMismatch("JetVec3 components must share a base point")

    @property
    def base(self):
        return self.x.base

    @property
    def order(self) -> int:
        return min(self.x.order, self.y.order, self.z.order)

    @classmethod
    def constant(cls, vec, base, order: int) -> "JetVec3":
        return cls(
            Jet2.constant(vec[0], base, order),
            Jet2.constant(vec[1], base, order),
            Jet2.constant(vec[2], base, order),
        )

    def components(self) -> tuple[Jet2, Jet2, Jet2]:
        return (self.x, self.y, self.z)

    def value(self) -> np.ndarray:
        return np.array([self.x.value, self.y.value, self.z.value])

    def evaluate(self, du: float, dv: float) -> np.ndarray:
        return np.array(
            [self.x.evaluate(du, dv), self.y.evaluate(du, dv), self.z.evaluate(du, dv)]
        )

    def __add__(self, other: "JetVec3") -> "JetVec3":
        return JetVec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "JetVec3") -> "JetVec3":
        return JetVec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "JetVec3":
        return JetVec3(-self.x, -self.y, -self.z)

    def scale(self, s) -> "JetVec3":
        return JetVec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "JetVec3") -> Jet2:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "JetVec3") -> "JetVec3":
        return JetVec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> Jet2:
        return jet_sqrt(self.dot(self))

    def normalized(self, policy: NumericPolicy = DEFAULT_POLICY) -> "JetVec3":
        n2 = self.dot(self)
        if n2.value <= policy.frame_tol**2:
            raise DegenerateFrame("cannot normalize a (numerically) zero vector")
        n = jet_sqrt(n2)
        return JetVec3(self.x / n, self.y / n, self.z / n)

    def d_u(self) -> "JetVec3":
        return JetVec3(self.x.d_u(), self.y.d_u(), self.z.d_u())

    def d_v(self) -> "JetVec3":
        return JetVec3(self.x.d_v(), self.y.d_v(), self.z.d_v())

    def divide_by_v(self, policy: NumericPolicy = DEFAULT_POLICY) -> "JetVec3":
        return JetVec3(
            self.x.divide_by_v(policy),
            self.y.divide_by_v(policy),
            self.z.divide_by_v(policy),
        )

    def truncated(self, order: int) -> "JetVec3":
        return JetVec3(
            self.x.truncated(order), self.y.truncated(order), self.z.truncated(order)
        )

    def compose(self, u_change: Jet2, v_change: Jet2) -> "JetVec3":
        return JetVec3(
            compose(self.x, u_change, v_change),
            compose(self.y, u_change, v_change),
            compose(self.z, u_change, v_change),
        )


def det3(a: JetVec3, b: JetVec3, c: JetVec3) -> Jet2:
    """Scalar triple product det(a, b, c) as a jet."""
    return a.dot(b.cross(c))
