import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontals import expr as E
from frontals.jets import DomainError, Jet2


def test_parse_power():
    tree = E.parse("v^2")
    assert tree == E.Pow(E.Var("v"), 2)


def test_parse_precedence():
    tree = E.parse("u^2 + u*v^3")
    assert tree == E.BinOp("+", E.Pow(E.Var("u"), 2),
                           E.BinOp("*", E.Var("u"), E.Pow(E.Var("v"), 3)))


def test_parse_unary_minus_binds_below_power():
    # -u^2 must parse as -(u^2)
    tree = E.parse("-u^2")
    assert tree == E.Neg(E.Pow(E.Var("u"), 2))


def test_parse_left_associativity():
    tree = E.parse("1 - 2 - 3")
    assert tree == E.BinOp("-", E.BinOp("-", E.Num(1.0), E.Num(2.0)), E.Num(3.0))


def test_parse_error_offset_and_expected():
    with pytest.raises(E.ParseError) as err:
        E.parse("sin(u")
    assert err.value.offset == 5
    assert "')'" in err.value.expected


def test_parse_error_unknown_function():
    with pytest.raises(E.ParseError):
        E.parse("tan(u)")


def test_parse_error_noninteger_exponent():
    with pytest.raises(E.ParseError):
        E.parse("u^v")
    with pytest.raises(E.ParseError):
        E.parse("u^2.5")


def test_constant_pi():
    assert E.eval_scalar(E.parse("2*pi"), {}) == pytest.approx(2 * math.pi)


def test_eval_jet_examples():
    tree = E.parse("u")
    jet = E.eval_jet(tree, {"u": Jet2.variable_u((2.0, 0.0), 2),
                            "v": Jet2.variable_v((2.0, 0.0), 2)})
    assert jet.value == 2.0
    assert jet.coefficient(1, 0) == 1.0

    tree = E.parse("v^2")
    jet = E.eval_jet(tree, {"u": Jet2.variable_u((0.0, 0.0), 3),
                            "v": Jet2.variable_v((0.0, 0.0), 3)})
    assert jet.coefficient(0, 2) == 1.0
    assert jet.value == 0.0


def test_eval_jet_matches_finite_differences():
    tree = E.parse("u^2 + u*v^3")
    base = (0.5, 0.2)
    jet = E.eval_jet(tree, {"u": Jet2.variable_u(base, 3),
                            "v": Jet2.variable_v(base, 3)})
    f = lambda a, b: a * a + a * b**3
    h = 1e-6
    assert jet.value == pytest.approx(f(*base), rel=1e-12)
    fd_u = (f(base[0] + h, base[1]) - f(base[0] - h, base[1])) / (2 * h)
    fd_v = (f(base[0], base[1] + h) - f(base[0], base[1] - h)) / (2 * h)
    assert abs(jet.partial(1, 0) - fd_u) <= 1e-8 * max(1.0, abs(fd_u))
    assert abs(jet.partial(0, 1) - fd_v) <= 1e-8 * max(1.0, abs(fd_v))


def test_eval_jet_order_zero_equals_scalar():
    tree = E.parse("sin(u) * exp(v) - u/(2 + v)")
    env0 = {"u": Jet2.variable_u((0.4, -0.3), 0), "v": Jet2.variable_v((0.4, -0.3), 0)}
    jet = E.eval_jet(tree, env0)
    want = E.eval_scalar(tree, {"u": 0.4, "v": -0.3})
    assert jet.value == pytest.approx(want, rel=1e-14)


def test_abs_rejected_at_zero():
    tree = E.parse("abs(t)")
    with pytest.raises(DomainError):
        E.eval_jet(tree, {"t": Jet2.variable_u((0.0, 0.0), 2)})
    jet = E.eval_jet(tree, {"t": Jet2.variable_u((-0.5, 0.0), 2)})
    assert jet.value == pytest.approx(0.5)


# round-trip property: print then parse gives an equal tree

_names = st.sampled_from(["u", "v"])


def exprs(depth=0):
    leaves = st.one_of(
        st.floats(min_value=0.0, max_value=9.0, allow_nan=False).map(E.Num),
        _names.map(E.Var),
        st.just(E.Const("pi")),
    )
    if depth >= 3:
        return leaves
    sub = st.deferred(lambda: exprs(depth + 1))
    return st.one_of(
        leaves,
        st.tuples(st.sampled_from("+-*/"), sub, sub).map(lambda t: E.BinOp(*t)),
        sub.map(E.Neg),
        st.tuples(sub, st.integers(min_value=0, max_value=4)).map(lambda t: E.Pow(*t)),
        st.tuples(st.sampled_from(["sin", "cos", "exp"]), sub).map(lambda t: E.Call(*t)),
    )


@given(exprs())
@settings(max_examples=150, deadline=None)
def test_print_parse_roundtrip(tree):
    assert E.parse(E.to_source(tree)) == tree


def test_surface_rejects_abs_and_foreign_variables():
    from frontals.surfaces import loads_surface

    with pytest.raises(ValueError):
        loads_surface('[surface]\nname="bad"\nx="abs(u)"\ny="v"\nz="0"\n')
    with pytest.raises(ValueError):
        loads_surface('[surface]\nname="bad"\nx="t"\ny="v"\nz="0"\n')


def test_gallery_loads_and_lists():
    from frontals.surfaces import gallery_names, gallery_surface

    names = gallery_names()
    assert "f1" in names and "cuspidal-edge" in names
    sd = gallery_surface("f1")
    assert sd.adapted
    assert E.to_source(sd.components[0]) == "u"
    with pytest.raises(KeyError):
        gallery_surface("missing-surface")
