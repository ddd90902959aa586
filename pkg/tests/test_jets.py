import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontals.jets import (BasePointMismatch, DivisionByZeroConstant, DomainError,
                           Jet2, JetVec3, NotDivisible, compose, det3,
                           jet_cos, jet_exp, jet_sin, jet_sqrt)


def j_u(base=(0.0, 0.0), order=4):
    return Jet2.variable_u(base, order)


def j_v(base=(0.0, 0.0), order=4):
    return Jet2.variable_v(base, order)


def test_coefficient_count_matches_order():
    for order in range(7):
        jet = Jet2.constant(1.0, (0.0, 0.0), order)
        assert len(jet.coefficients_graded()) == (order + 1) * (order + 2) // 2


def test_product_of_binomials():
    u, v = j_u(order=3), j_v(order=3)
    p = (1 + u) * (1 + v)
    assert p.coefficient(0, 0) == 1.0
    assert p.coefficient(1, 0) == 1.0
    assert p.coefficient(0, 1) == 1.0
    assert p.coefficient(1, 1) == 1.0
    assert p.coefficient(2, 0) == 0.0


def test_sqrt_of_perfect_square():
    u = j_u(order=4)
    q = jet_sqrt(1 + 2 * u + u * u)
    want = [1.0, 1.0, 0.0, 0.0, 0.0]
    got = [q.coefficient(i, 0) for i in range(5)]
    assert got == pytest.approx(want, abs=1e-14)


def test_geometric_series_from_division():
    v = j_v(order=3)
    g = 1 / (1 - v)
    assert [g.coefficient(0, k) for k in range(4)] == pytest.approx([1, 1, 1, 1])


def test_division_by_zero_constant_raises():
    v = j_v(order=3)
    with pytest.raises(DivisionByZeroConstant):
        _ = 1 / v


def test_sin_maclaurin():
    u = j_u(order=3)
    s = jet_sin(u)
    assert s.coefficient(1, 0) == pytest.approx(1.0)
    assert s.coefficient(3, 0) == pytest.approx(-1 / 6)
    assert s.coefficient(0, 0) == 0.0


def test_sqrt_example_in_v():
    v = j_v(order=3)
    r = jet_sqrt(9 + 6 * v + v * v)
    assert r.coefficient(0, 0) == pytest.approx(3.0)
    assert r.coefficient(0, 1) == pytest.approx(1.0)
    assert r.coefficient(0, 2) == pytest.approx(0.0, abs=1e-14)


def test_sqrt_domain_error():
    with pytest.raises(DomainError):
        jet_sqrt(Jet2.constant(-1.0, (0, 0), 3))


def test_exp_coefficients_vs_finite_differences():
    base = (0.0, 0.0)
    u, v = j_u(base, 2), j_v(base, 2)
    e = jet_exp(u + v)
    f = lambda a, b: math.exp(a + b)
    h = 1e-5
    checks = {
        (0, 0): f(0, 0),
        (1, 0): (f(h, 0) - f(-h, 0)) / (2 * h),
        (0, 1): (f(0, h) - f(0, -h)) / (2 * h),
        (2, 0): (f(h, 0) - 2 * f(0, 0) + f(-h, 0)) / h**2 / 2,
        (1, 1): (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h),
        (0, 2): (f(0, h) - 2 * f(0, 0) + f(0, -h)) / h**2 / 2,
    }
    for (i, k), want in checks.items():
        got = e.coefficient(i, k)
        assert abs(got - want) <= 1e-7 * max(1.0, abs(want))


def test_divide_by_v_examples():
    u, v = j_u(order=4), j_v(order=4)
    d = (v + u * v * v).divide_by_v()
    assert d.coefficient(0, 0) == 1.0
    assert d.coefficient(1, 1) == 1.0

    d2 = (2 * v + 3 * u * v * v).divide_by_v()
    assert d2.coefficient(0, 0) == 2.0
    assert d2.coefficient(1, 1) == 3.0

    with pytest.raises(NotDivisible):
        (u + v).divide_by_v()


def test_compose_identity_and_expansion():
    f = j_u(order=4) ** 2
    s, w = j_u(order=4), j_v(order=4)
    ident = compose(f, s, w)
    assert np.allclose(ident.coeffs, f.coeffs)

    comp = compose(f, s + w * w, Jet2.constant(0.0, (0, 0), 4))
    assert comp.coefficient(2, 0) == pytest.approx(1.0)
    assert comp.coefficient(1, 2) == pytest.approx(2.0)
    assert comp.coefficient(0, 4) == pytest.approx(1.0)


def test_compose_base_point_mismatch():
    f = Jet2.variable_u((1.0, 0.0), 3)
    s = j_u((0.0, 0.0), 3)
    with pytest.raises(BasePointMismatch):
        compose(f, s, Jet2.constant(0.5, (0.0, 0.0), 3))


def test_compose_against_finite_differences():
    # random cubic composed with (u, v) = (s + 0.3 w^2, w)
    rng = np.random.default_rng(3)
    coeffs = rng.normal(size=10)

    def poly(a, b):
        mons = [1, a, b, a * a, a * b, b * b, a**3, a * a * b, a * b * b, b**3]
        return float(np.dot(coeffs, mons))

    base = (0.2, -0.1)
    s = Jet2.variable_u(base, 3)
    w = Jet2.variable_v(base, 3)
    inner_u = s + 0.3 * w * w
    f_at = Jet2(base, 3)
    # build the cubic as a jet at the change's value
    uj = Jet2.variable_u((inner_u.value, base[1]), 3)
    vj = Jet2.variable_v((inner_u.value, base[1]), 3)
    mons = [Jet2.constant(1.0, uj.base, 3), uj, vj, uj * uj, uj * vj, vj * vj,
            uj**3, uj * uj * vj, uj * vj * vj, vj**3]
    fj = Jet2(uj.base, 3)
    for cf, m in zip(coeffs, mons):
        fj = fj + cf * m
    comp = compose(fj, inner_u, w)

    g = lambda a, b: poly(a + 0.3 * b * b, b)
    h = 1e-5
    fd_u = (g(base[0] + h, base[1]) - g(base[0] - h, base[1])) / (2 * h)
    fd_v = (g(base[0], base[1] + h) - g(base[0], base[1] - h)) / (2 * h)
    assert abs(comp.partial(1, 0) - fd_u) <= 1e-7 * max(1.0, abs(fd_u))
    assert abs(comp.partial(0, 1) - fd_v) <= 1e-7 * max(1.0, abs(fd_v))


small = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)


def jets(order=3):
    return st.lists(small, min_size=10, max_size=10).map(
        lambda cs: _jet_from_list(cs, order)
    )


def _jet_from_list(cs, order):
    jet = Jet2((0.0, 0.0), order)
    idx = 0
    for d in range(order + 1):
        for i in range(d + 1):
            if idx < len(cs):
                jet.coeffs[i, d - i] = cs[idx]
                idx += 1
    return jet


@given(jets(), jets(), jets())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    lhs = (a * b) * c
    rhs = a * (b * c)
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-9)
    lhs = a * (b + c)
    rhs = a * b + a * c
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-9)


@given(jets())
@settings(max_examples=40, deadline=None)
def test_mul_then_divide_by_v_roundtrip(a):
    v = Jet2.variable_v((0.0, 0.0), a.order)
    prod = a * v
    back = prod.divide_by_v()
    assert np.allclose(back.coeffs, a.truncated(a.order - 1).coeffs, atol=1e-10)


@given(jets(order=4))
@settings(max_examples=30, deadline=None)
def test_compose_associativity(f):
    base = (0.0, 0.0)
    s, w = Jet2.variable_u(base, 4), Jet2.variable_v(base, 4)
    g_u, g_v = s + 0.1 * w * w, w
    h_u, h_v = s * 1.0, w + 0.2 * s * s
    # (f o g) o h versus f o (g o h)
    fg = compose(f, g_u, g_v)
    lhs = compose(fg, h_u, h_v)
    gh_u = compose(g_u, h_u, h_v)
    gh_v = compose(g_v, h_u, h_v)
    rhs = compose(f, gh_u, gh_v)
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-9)


def test_vector_identities():
    base = (0.1, 0.2)
    u, v = Jet2.variable_u(base, 3), Jet2.variable_v(base, 3)
    a = JetVec3(u, v, u * v)
    b = JetVec3(v, u, u + v)
    c = JetVec3(u + 1, v - 2, u)
    # Lagrange identity |a x b|^2 = |a|^2 |b|^2 - <a,b>^2
    lhs = a.cross(b).dot(a.cross(b))
    rhs = a.dot(a) * b.dot(b) - a.dot(b) ** 2
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-10)
    # scalar triple product alternates sign
    assert np.allclose(det3(a, b, c).coeffs, (-det3(b, a, c)).coeffs, atol=1e-12)


def test_partials_of_gallery_surfaces_vs_finite_differences():
    from frontals.core import FrontalChart

    h = 1e-2
    for name in ("f1", "f2", "five-half"):
        chart = FrontalChart.from_gallery(name)
        fj = chart.f((0.3, 0.2), 3)

        def val(du, dv, comp):
            return chart.f((0.3 + du, 0.2 + dv), 0).components()[comp].value

        for comp in range(3):
            jet_du = fj.components()[comp].partial(1, 0)
            fd = (-val(2 * h, 0, comp) + 8 * val(h, 0, comp)
                  - 8 * val(-h, 0, comp) + val(-2 * h, 0, comp)) / (12 * h)
            assert abs(jet_du - fd) <= 1e-6 * max(1.0, abs(fd))
            jet_dvv = fj.components()[comp].partial(0, 2)
            fd2 = (-val(0, 2 * h, comp) / 12 + 4 / 3 * val(0, h, comp)
                   - 2.5 * val(0, 0, comp) + 4 / 3 * val(0, -h, comp)
                   - val(0, -2 * h, comp) / 12) / h**2
            assert abs(jet_dvv - fd2) <= 1e-6 * max(1.0, abs(fd2))
