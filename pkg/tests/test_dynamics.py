"""The map, its inverse, psi and the invariants, with a sympy cross-check."""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from superqrt.dynamics import (
    I1,
    I2,
    PHI,
    PHI_INV,
    PSI,
    AffinePoint4,
    PoleError,
    RationalMapDef,
    apply_phi,
    apply_phi_inverse,
    apply_psi,
    check_inverse_identity,
    check_invariant_identity,
    eval_invariants,
    orbit,
)
from superqrt.exact import MultiPoly

q = st.fractions(min_value=-10, max_value=10, max_denominator=9)
points = st.tuples(q, q, q, q, q).map(lambda t: AffinePoint4(t[:4], t[4]))

x0, x1, x2, x3, h = sp.symbols("x0 x1 x2 x3 h")


def sympy_phi():
    return (
        x2,
        x3,
        ((-x2 - x0) * (1 - x2) + h * x2) / (1 - x2),
        ((-x1 - x3) * (1 - x2) ** 2 + 2 - x2 + h * x3) / (1 - x2) ** 2,
    )


def sympy_poly(p: MultiPoly):
    syms = sp.symbols(p.vars)
    return sum(sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s ** k for s, k in zip(syms, e)]) for e, c in p.terms.items())


@pytest.mark.parametrize("inv", [I1, I2], ids=["I1", "I2"])
def test_invariants_exact(inv):
    assert check_invariant_identity(PHI, inv)
    assert check_invariant_identity(PHI_INV, inv)


@pytest.mark.parametrize("inv", [I1, I2], ids=["I1", "I2"])
def test_invariants_sympy_oracle(inv):
    f = sympy_poly(inv)
    img = dict(zip((x0, x1, x2, x3), sympy_phi()))
    assert sp.simplify(f.subs(img, simultaneous=True) - f) == 0


def test_inverse_identities():
    assert check_inverse_identity(PHI, PHI_INV)
    assert check_inverse_identity(PHI_INV, PHI)


def test_non_invariant_detected():
    assert not check_invariant_identity(PHI, MultiPoly.var(PHI.vars, "x0"))


def test_documented_orbit_values():
    p = AffinePoint4((0, 0, 2, 0), 1)
    assert eval_invariants(p) == (-4, 8)
    assert apply_phi(p).coords == (2, 0, -4, 0)
    with pytest.raises(PoleError) as exc:
        orbit(AffinePoint4((0, 0, 1, 0), 1), 3)
    assert exc.value.step == 1 and exc.value.coordinate == "x2"


@given(points)
def test_orbit_conserves_invariants(p):
    try:
        pts = orbit(p, 4)
    except PoleError:
        assume(False)
    vals = {eval_invariants(x) for x in pts}
    assert len(vals) == 1


@given(points)
def test_round_trip(p):
    try:
        back = apply_phi_inverse(apply_phi(p))
    except PoleError:
        assume(False)
    assert back == p


@given(points)
def test_matches_sympy_numerically(p):
    assume(p.coords[2] != 1)
    got = apply_phi(p).coords
    vals = dict(zip((x0, x1, x2, x3, h), [sp.Rational(v.numerator, v.denominator) for v in p.coords + (p.h,)]))
    want = tuple(sp.Rational(e.subs(vals)) for e in sympy_phi())
    assert tuple(sp.Rational(g.numerator, g.denominator) for g in got) == want


@given(points)
def test_psi_is_phi_on_level_set(p):
    assume(p.coords[2] != 1)
    c = eval_invariants(p)[1]
    try:
        r = apply_psi(p.coords[:3], c, p.h)
    except PoleError:
        assume(False)
    assert r == apply_phi(p).coords[:3]


def test_psi_pole_message():
    with pytest.raises(PoleError):
        apply_psi((0, 0, 0), 1, Fraction(1, 3))


def test_map_text_round_trip():
    again = RationalMapDef.from_text(PHI.to_text())
    for a, b in zip(again.components, PHI.components):
        assert (a.num * b.den - b.num * a.den).is_zero()
    assert PSI.ambient == "A3"
