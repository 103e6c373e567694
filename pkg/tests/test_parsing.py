import random

import pytest

from dertool.algebra import dual_numbers, rationals, upper_triangular
from dertool.errors import ParseError, UnknownBasisName
from dertool.io import load_algebra, parse_operator
from dertool.parsing import format_element, parse_element
from dertool.polyext import PolyExtAlgebra

T2 = upper_triangular(2)
T2T = PolyExtAlgebra(T2)
QT = PolyExtAlgebra(rationals())


def test_mixed_degrees():
    x = parse_element("E11*t + 3/2*E12", T2T)
    assert x.coeff(1) == T2.basis_element("E11")
    assert x.coeff(0) == T2.basis_element("E12") * parse_element("3/2", T2)
    assert format_element(x) == "3/2*E12 + E11*t"


def test_expansion():
    assert format_element(parse_element("t^2 - (t+1)^2", QT)) == "-1 - 2*t"


def test_order_is_preserved():
    assert parse_element("E12*E11", T2).is_zero()
    assert parse_element("E11*E12", T2) == T2.basis_element("E12")


def test_unary_minus_and_scalars():
    A = dual_numbers()
    assert parse_element("-(1 - x)*2", A) == A.element([-2, 2])
    assert parse_element("1/2*x*4", A) == A.element([0, 2])


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_element("E11 + * t", T2T)
    assert info.value.position == 6


def test_unknown_basis_name():
    with pytest.raises(UnknownBasisName):
        parse_element("E33", T2)


def test_t_not_allowed_in_finite_algebra():
    with pytest.raises((UnknownBasisName, ParseError)):
        parse_element("t", T2)


def test_format_roundtrip_random():
    rng = random.Random(4)
    for A in [T2T, QT, PolyExtAlgebra(dual_numbers())]:
        for _ in range(50):
            x = A.random_element(rng, 5)
            assert parse_element(format_element(x), A) == x
    for _ in range(30):
        x = T2.random_element(rng)
        assert parse_element(format_element(x), T2) == x


def test_operator_language():
    P = load_algebra("Q[t]")
    t2 = parse_element("t^2", P)
    assert parse_operator("d/dt", P)(t2) == parse_element("2*t", P)
    assert parse_operator("3*d/dt", P)(t2) == parse_element("6*t", P)
    assert parse_operator("I-shift(1)", P)(t2) == parse_element("-2*t-1", P)
    assert parse_operator("shift(-1)", P)(t2) == parse_element("(t-1)^2", P)
    assert parse_operator("xi(d/dt)", P)(t2) == parse_element("-2*t-1", P)
    assert parse_operator("log(I-shift(1))", P)(t2) == parse_element("2*t", P)
    T = load_algebra("T2")
    assert parse_operator("ad(E12)", T)(T.basis_element("E11")) == -T.basis_element("E12")
