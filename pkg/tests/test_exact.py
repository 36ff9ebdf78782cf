"""Exact algebra, checked against sympy as an independent oracle."""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from superqrt.exact import (
    INFINITE_ORDER,
    QQ,
    FunctionField,
    MultiPoly,
    RationalFunction,
    UniRatFunc,
    UPoly,
    UndefinedGcdError,
    divide_exact,
    ord_epsilon,
    poly_op,
    substitute,
    uni_gcd,
)
from superqrt.parsing import parse_poly

VARS = ("x0", "x1", "x2", "x3", "h")
E = sp.Symbol("e")
H = sp.Symbol("h")
HF = FunctionField("h")

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
coeff_lists = st.lists(small_q, min_size=1, max_size=7)


def to_sympy_upoly(p: UPoly, var=E):
    return sum(sp.Rational(c.numerator, c.denominator) * var ** k for k, c in enumerate(p.coeffs))


def upoly(cs):
    return UPoly(QQ, cs)


def sym(p: MultiPoly):
    syms = sp.symbols(p.vars)
    return sum(sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s ** k for s, k in zip(syms, e)]) for e, c in p.terms.items())


monomial = st.tuples(*[st.integers(0, 2)] * 5)
multipolys = st.dictionaries(monomial, small_q, max_size=6).map(lambda d: MultiPoly(VARS, d))


# -- polynomial ring axioms and sympy agreement ------------------------------


@given(multipolys, multipolys)
def test_mul_matches_sympy(p, q):
    assert sp.expand(sym(poly_op("mul", p, q)) - sym(p) * sym(q)) == 0


@given(multipolys, multipolys, multipolys)
def test_distributive(p, q, r):
    assert p * (q + r) == p * q + p * r


@given(multipolys)
def test_additive_inverse(p):
    assert poly_op("add", p, poly_op("neg", p)).is_zero()


def test_distributivity_example():
    x2 = MultiPoly.var(VARS, "x2")
    assert poly_op("mul", x2, 1 - x2) == x2 - x2 ** 2


def test_expand_first_invariant_has_six_terms():
    x0, x1, x2, x3, h = MultiPoly.gens(VARS)
    i1 = h * x0 * x2 * (x0 + x2 + h) - h * (x0 ** 2 + x0 * x2 + x2 ** 2)
    assert len(i1) == 6
    assert i1 == parse_poly("-h*x0^2 - h*x0*x2 + h^2*x0*x2 + h*x0^2*x2 - h*x2^2 + h*x0*x2^2", VARS)


@given(multipolys, multipolys)
def test_divide_exact_recovers_factor(p, q):
    if q.is_zero():
        return
    assert divide_exact(p * q, q) == p


@given(multipolys, st.sampled_from(VARS))
def test_derivative_matches_sympy(p, v):
    assert sp.expand(sym(p.derivative(v)) - sp.diff(sym(p), sp.Symbol(v))) == 0


# -- substitution -------------------------------------------------------------


def test_substitute_affine_shift():
    vs = ("x2", "e")
    x2 = MultiPoly.var(vs, "x2")
    e = MultiPoly.var(vs, "e")
    n, d = substitute(x2, {"x2": RationalFunction(1 + e)}, vs)
    assert n == 1 + e and d == 1


def test_substitute_chart_change():
    vs = ("z2", "z3")
    z2, z3 = MultiPoly.gens(vs)
    x2 = MultiPoly.var(("x2",), "x2")
    n, d = substitute(x2, {"x2": RationalFunction(z2, z3)}, vs)
    assert n == z2 and d == z3


def test_substitute_pole_numerator():
    vs = ("e", "h")
    e, h = MultiPoly.gens(vs)
    f = RationalFunction(parse_poly("h*x2", ("x2", "h")), parse_poly("1-x2", ("x2", "h")))
    bind = {"x2": RationalFunction(1 + e)}
    n, _ = substitute(f.num, bind, vs)
    d, _ = substitute(f.den, bind, vs)
    assert n == h * (1 + e)
    assert d == -e


@given(multipolys, small_q, small_q)
def test_substitute_then_evaluate(p, a, b):
    vs = ("s", "h")
    s = MultiPoly.var(vs, "s")
    h = MultiPoly.var(vs, "h")
    bind = {v: RationalFunction(s * (k + 1) + a) for k, v in enumerate(VARS[:4])}
    bind["h"] = RationalFunction(h)
    n, d = substitute(p, bind, vs)
    pt = {"s": b, "h": Fraction(3, 7)}
    direct = p.evaluate({**{v: b * (k + 1) + a for k, v in enumerate(VARS[:4])}, "h": Fraction(3, 7)})
    assert n.evaluate(pt) == direct * d.evaluate(pt)


# -- univariate gcd -----------------------------------------------------------


def test_gcd_examples():
    e = UPoly.gen(QQ)
    assert uni_gcd(e * e - e, e) == e
    assert uni_gcd(e + 1, e) == UPoly.one(QQ)
    with pytest.raises(UndefinedGcdError):
        uni_gcd(UPoly.zero(QQ), UPoly.zero(QQ))


def test_gcd_over_function_field_example():
    e = UPoly.gen(HF)
    h = UPoly.const(HF, HF.gen)
    one = UPoly.one(HF)
    a = (e - one) * (e - one) * (e + h)
    b = (e - one) * (e - h)
    assert uni_gcd(a, b) == e - one


@given(coeff_lists, coeff_lists, coeff_lists)
def test_gcd_matches_sympy(a, b, g):
    pa, pb, pg = upoly(a) * upoly(g), upoly(b) * upoly(g), None
    if pa.is_zero() and pb.is_zero():
        return
    got = uni_gcd(pa, pb)
    want = sp.Poly(sp.gcd(to_sympy_upoly(pa), to_sympy_upoly(pb)), E)
    want = want.monic() if not want.is_zero else want
    assert sp.expand(to_sympy_upoly(got) - want.as_expr()) == 0


@given(coeff_lists, coeff_lists)
def test_gcd_divides_both(a, b):
    pa, pb = upoly(a), upoly(b)
    if pa.is_zero() and pb.is_zero():
        return
    g = uni_gcd(pa, pb)
    assert pa.divmod(g)[1].is_zero() and pb.divmod(g)[1].is_zero()


hcoeff = st.lists(st.integers(-6, 6), min_size=1, max_size=3).map(lambda c: HF.from_poly([Fraction(x) for x in c]))
hpolys = st.lists(hcoeff, min_size=1, max_size=4).map(lambda cs: UPoly(HF, cs))


@given(hpolys, hpolys, hpolys)
def test_function_field_gcd_matches_sympy(a, b, g):
    pa, pb = a * g, b * g
    if pa.is_zero() or pb.is_zero():
        return
    got = uni_gcd(pa, pb)

    def to_sym(p):
        return sum((c.num.to_sympy(H) if hasattr(c.num, "to_sympy") else to_sympy_upoly(c.num, H)) / to_sympy_upoly(c.den, H) * E ** k for k, c in enumerate(p.coeffs))

    want = sp.Poly(sp.gcd(sp.Poly(to_sym(pa), E, domain="QQ(h)"), sp.Poly(to_sym(pb), E, domain="QQ(h)")), E, domain="QQ(h)").monic()
    assert sp.simplify(to_sym(got) - want.as_expr()) == 0


# -- germs ----------------------------------------------------------------------


def test_order_examples():
    e = UniRatFunc.gen(HF)
    h = UniRatFunc.const(HF, HF.gen)
    c = Fraction(5, 3)
    assert ord_epsilon(-h / e) == -1
    assert ord_epsilon((1 + h * c) / (e * e)) == -2
    assert ord_epsilon(UniRatFunc.const(QQ, 5)) == 0
    assert ord_epsilon(UniRatFunc.const(QQ, 0)) == INFINITE_ORDER


@given(coeff_lists, coeff_lists, coeff_lists, coeff_lists)
def test_order_is_additive(a, b, c, d):
    f = UniRatFunc(upoly(a), upoly(b)) if upoly(b).degree() >= 0 and not upoly(b).is_zero() else None
    g = UniRatFunc(upoly(c), upoly(d)) if not upoly(d).is_zero() else None
    if f is None or g is None or f.is_zero() or g.is_zero():
        return
    assert ord_epsilon(f * g) == ord_epsilon(f) + ord_epsilon(g)


@given(coeff_lists, coeff_lists, small_q)
def test_reduced_germ_evaluates_like_original(a, b, x):
    num, den = upoly(a), upoly(b)
    if den.is_zero() or den(x) == 0:
        return
    f = UniRatFunc(num, den)
    assert f.num(x) / f.den(x) == num(x) / den(x)
