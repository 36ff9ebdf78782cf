from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superqrt.dynamics import I1, I2, PHI, check_invariant_identity
from superqrt.exact import FunctionField, MultiPoly
from superqrt.invariants import (
    ALL_VARS,
    Ansatz,
    ClassConstraint,
    clear_denominators,
    find_invariants,
    kernel_dimension_at,
    kernel_is_invariant,
    literal_reading_audit,
    match_invariants,
    sampled_system,
    solve_kernel,
    vanishing_system,
)
from superqrt.picard import I1_CLASS, I2_CLASS
from superqrt.tower import TABULATED_MULTIPLICITIES

HF = FunctionField("h")
h = HF.gen


@pytest.fixture(scope="module")
def found():
    return {
        "I1": find_invariants(I1_CLASS, ("1", "I1")),
        "I2": find_invariants(I2_CLASS, ("1", "I1", "I2")),
    }


def test_constraint_reproduces_table():
    c = ClassConstraint.from_class(I1_CLASS)
    assert c.multiplicities == TABULATED_MULTIPLICITIES["I1-member"]
    assert c.bidegree == (2, 2)
    assert ClassConstraint.from_multiplicities(c.multiplicities).target == I1_CLASS


def test_constraint_for_second_class():
    c = ClassConstraint.from_class(I2_CLASS)
    assert c.multiplicities == (1, 2, 2, 3, 4, 1, 2, 2, 3, 4, 3, 1, 2, 6, 6, 7, 8)


def test_negative_multiplicities_rejected():
    from superqrt.divisor import parse_class

    with pytest.raises(ValueError):
        ClassConstraint.from_class(parse_class("2Ha+2Hb+E3"))


def test_ansatz_sizes():
    assert len(Ansatz.of_bidegree(2, 2)) == 36
    assert len(Ansatz.total_degree(2)) == 15


@given(st.lists(st.integers(-5, 5), min_size=36, max_size=36))
def test_ansatz_round_trip(coeffs):
    a = Ansatz.of_bidegree(2, 2)
    p = a.polynomial([Fraction(c) for c in coeffs])
    assert [v == HF(Fraction(c)) for v, c in zip(a.vector_of(p), coeffs)] == [True] * 36


def test_vector_of_rejects_outside_monomials():
    with pytest.raises(ValueError):
        Ansatz.total_degree(2).vector_of(I1)


def test_clear_denominators():
    vec = [HF(Fraction(1, 2)), h / (h + HF.one), HF.zero]
    out = clear_denominators(vec)
    assert all(c.degree() >= -1 for c in out)
    ratio = [HF.from_poly(c.coeffs) / HF.from_poly(out[0].coeffs) if not c.is_zero() else HF.zero for c in out]
    assert ratio[1] == vec[1] / vec[0]


def test_first_class_kernel(found):
    c, system, kernel, report = found["I1"]
    assert len(system.rows) > 0 and kernel.dimension == 2
    assert report.matched
    # kernel = {1, I1/h}: exact coefficients over Q(h)
    assert report.coefficients == [[HF.one, HF.zero], [HF.zero, HF.one / h]]


def test_second_class_kernel(found):
    _, _, kernel, report = found["I2"]
    assert kernel.dimension == 3 and report.matched
    assert report.coefficients == [
        [HF.one, HF.zero, HF.zero],
        [HF.zero, HF.zero, HF.one / h],
        [HF.zero, HF.one / h, HF.zero],
    ]


@pytest.mark.parametrize("name", ["I1", "I2"])
def test_kernels_are_invariant(found, name):
    assert kernel_is_invariant(found[name][2], PHI)


def test_mismatched_references(found):
    report = match_invariants(found["I2"][2], ("1", "I1"))
    assert not report.matched and "dimension" in report.message


def test_raised_constraint_kills_kernel():
    c = ClassConstraint.from_class(I1_CLASS).raised(1)
    assert solve_kernel(vanishing_system(c)).dimension == 0


def test_literal_ansatz_only_constants():
    audit = literal_reading_audit(I1_CLASS)
    assert audit["monomials"] == 15 and audit["kernel_dimension"] == 1


def test_sampled_system_agrees():
    c = ClassConstraint.from_class(I1_CLASS)
    rows = sampled_system(c, Fraction(2, 7), seed=1)
    assert kernel_dimension_at(rows, 36) == 2
