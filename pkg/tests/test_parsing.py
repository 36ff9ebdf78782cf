from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superqrt.divisor import BASIS, RANK, DivisorClass, format_class, parse_class
from superqrt.exact import MultiPoly
from superqrt.parsing import ParseError, parse_fraction, parse_poly, parse_rational

VARS = ("x0", "x1", "x2", "x3", "h")


def test_parse_rational_evaluates():
    f = parse_rational("(x2 - x0)/(1 - x2)^2 + h*x3", VARS)
    pt = {"x0": Fraction(1, 2), "x1": 0, "x2": Fraction(3), "x3": Fraction(-1, 5), "h": Fraction(2, 7)}
    assert f.evaluate(pt) == (3 - Fraction(1, 2)) / 4 + Fraction(2, 7) * Fraction(-1, 5)


@pytest.mark.parametrize("bad", ["x0 +", "y0", "(x1", "x1 x2 )"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_rational(bad, VARS)


def test_parse_poly_rejects_quotients():
    with pytest.raises(ParseError):
        parse_poly("1/x1", VARS)
    assert parse_poly("2*x1/4", VARS) == MultiPoly.var(VARS, "x1") * Fraction(1, 2)


def test_parse_fraction():
    assert parse_fraction("-3/9") == Fraction(-1, 3)
    with pytest.raises(ParseError):
        parse_fraction("1/0")
    with pytest.raises(ParseError):
        parse_fraction("pi")


def test_parse_class_forms():
    c = parse_class("Ha+3Hb-2E1-3E11-E_{6,7,9,10,12,13,14}")
    assert c.h_part == (1, 3)
    assert c.coefficient("E1") == -2 and c.coefficient("E11") == -3
    assert [c.coefficient(f"E{i}") for i in (6, 7, 9, 10, 12, 13, 14)] == [-1] * 7
    assert c.coefficient("E2") == 0
    assert parse_class("0") == DivisorClass()
    with pytest.raises(ValueError):
        parse_class("Ha-E18")
    with pytest.raises(ValueError):
        parse_class("Hc")


classes = st.lists(st.integers(-9, 9), min_size=RANK, max_size=RANK).map(DivisorClass)


@given(classes)
def test_format_parse_round_trip(c):
    assert parse_class(format_class(c)) == c


@given(classes, classes)
def test_lattice_arithmetic(a, b):
    assert (a + b) - b == a
    assert a * 2 == a + a
    assert -a + a == DivisorClass()


def test_basis_order():
    assert BASIS[:3] == ("Ha", "Hb", "E1") and BASIS[-1] == "E17"
    with pytest.raises(ValueError):
        DivisorClass([1, 2, 3])
