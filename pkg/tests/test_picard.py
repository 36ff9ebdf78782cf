from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from superqrt.divisor import BASIS, RANK, DivisorClass, parse_class
from superqrt.picard import (
    I1_CLASS,
    I2_CLASS,
    REFERENCE_JORDAN,
    build_action_matrix,
    charpoly,
    cyclotomic,
    fixed_classes,
    growth_class,
    in_span,
    is_fixed,
    jordan_sizes,
    mat_mul,
    mat_pow,
    predicted_degrees,
    rank,
    tabulated_images,
)


@pytest.fixture(scope="module")
def tab():
    return build_action_matrix(compute=False)


def sympy_matrix(m):
    return sp.Matrix([[int(x) for x in row] for row in m])


def test_charpoly_matches_sympy(tab):
    t = sp.Symbol("t")
    ours = sum(int(c) * t ** k for k, c in enumerate(charpoly(tab.matrix)))
    assert sp.expand(ours - sympy_matrix(tab.matrix).charpoly(t).as_expr()) == 0
    want = t ** 5 * (t - 1) ** 7 * (t + 1) * (t ** 2 + t + 1) ** 3
    assert sp.expand(ours - want) == 0


def test_matrix_is_singular(tab):
    # phi is not regular, so its pull-back is not invertible
    assert sympy_matrix(tab.matrix).det() == 0
    assert rank(tab.matrix) < RANK


def test_jordan_matches_sympy(tab):
    J = sympy_matrix(tab.matrix).jordan_form(calc_transform=False)
    sizes = {}
    i = 0
    n = J.shape[0]
    while i < n:
        j = i
        while j + 1 < n and J[j, j + 1] == 1:
            j += 1
        sizes.setdefault(sp.nsimplify(J[i, i]), []).append(j - i + 1)
        i = j + 1
    g = growth_class(tab)
    assert sorted(sizes[0]) == sorted(g.jordan["t"])
    assert sorted(sizes[1]) == sorted(g.jordan["Phi1"])
    assert sorted(sizes[-1]) == sorted(g.jordan["Phi2"])


def test_growth_report(tab):
    g = growth_class(tab)
    assert g.spectral_radius_one
    assert g.max_unit_block == 3
    assert g.growth == "polynomial degree 2"
    assert g.total_block_size() == 19
    assert g.jordan_multiset() == REFERENCE_JORDAN


def test_growth_on_toy_matrices():
    hyperbolic = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert growth_class(hyperbolic).growth == "exponential"
    unipotent = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]]
    assert growth_class(unipotent).growth == "polynomial degree 1"
    rotation = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(-1)]]
    assert growth_class(rotation).growth == "bounded"


def test_cyclotomic():
    assert cyclotomic(1) == [-1, 1]
    assert cyclotomic(3) == [1, 1, 1]
    assert cyclotomic(6) == [1, -1, 1]


def test_named_rows(tab):
    assert tab.images["Hb"] == parse_class("Ha+3Hb-2E1-3E11-E_{6,7,9,10,12,13,14}")
    assert tab.images["E1"] == parse_class("Hb-E1-E10-E11")
    assert tab.images["Ha"] == DivisorClass.basis("Hb")


def test_invariant_classes_fixed(tab):
    assert is_fixed(tab, I1_CLASS)
    assert is_fixed(tab, I2_CLASS)
    fixed = fixed_classes(tab)
    assert in_span(fixed, I1_CLASS) and in_span(fixed, I2_CLASS)


def test_predicted_degrees_start(tab):
    pred = predicted_degrees(tab, 3)
    assert pred["Ha"][:2] == [(1, 0), (0, 1)]
    assert pred["Hb"][:2] == [(0, 1), (1, 3)]


@given(st.integers(0, 6), st.integers(0, 6))
def test_mat_pow_is_additive(a, b):
    m = build_action_matrix(compute=False).matrix
    assert mat_mul(mat_pow(m, a), mat_pow(m, b)) == mat_pow(m, a + b)


def test_computed_rows_agree_with_table(action_matrix):
    table = tabulated_images()
    bad = {b: str(action_matrix.images[b]) for b in BASIS if action_matrix.images[b] != table[b]}
    assert not bad
    assert set(action_matrix.provenance.values()) == {"both-agree"}


def test_json_shape(tab):
    j = tab.to_json()
    assert j["basis"] == list(BASIS)
    assert len(j["matrix"]) == RANK and all(len(r) == RANK for r in j["matrix"])
