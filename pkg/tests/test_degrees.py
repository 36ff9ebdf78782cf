import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from superqrt.degrees import (
    InsufficientDataError,
    _line,
    component_degree,
    differences,
    iterate_on_line,
    phi_bidegrees,
    projective_degree,
    psi_degree_sequence,
    quadratic_fit,
    quasi_quadratic_fit,
)
from superqrt.dynamics import PHI
from superqrt.exact import QQ, UniRatFunc, UPoly

H = Fraction(1, 3)
S = sp.Symbol("s")


def sympy_degrees_on_line(vals, n):
    """Degrees of phi^k along the line, k = 0..n, by sympy cancellation."""
    x = [sp.Rational(v[0]) * S + sp.Rational(v[1]) for v in vals]
    h = sp.Rational(H.numerator, H.denominator)
    out = []
    for k in range(n + 1):
        out.append(max(max(sp.degree(sp.numer(e), S), sp.degree(sp.denom(e), S)) for e in x))
        x0, x1, x2, x3 = x
        x = [
            x2,
            x3,
            sp.cancel(((-x2 - x0) * (1 - x2) + h * x2) / (1 - x2)),
            sp.cancel(((-x1 - x3) * (1 - x2) ** 2 + 2 - x2 + h * x3) / (1 - x2) ** 2),
        ]
    return out


def test_line_degrees_match_sympy():
    rng = random.Random(5)
    vals = [(Fraction(rng.randint(1, 30), rng.randint(1, 30)), Fraction(rng.randint(-30, 30), rng.randint(1, 30))) for _ in range(4)]
    s = UniRatFunc.gen(QQ)
    start = {v: s * a + b for v, (a, b) in zip(PHI.source_vars, vals)}
    trace = iterate_on_line(PHI, start, {"h": H}, 3, (PHI.source_vars,))
    ours = [max(row) for row in trace.component]
    assert ours == sympy_degrees_on_line(vals, 3)


def test_small_bidegrees():
    run = phi_bidegrees(3, H, trials=2, seed=1)
    assert run.degrees[0] == (1, 0, 0, 1)
    assert run.degrees[1] == (0, 1, 1, 3)
    assert not run.disagreements


def test_degree_helpers():
    s = UniRatFunc.gen(QQ)
    f = (s * s + 1) / (s + 2)
    assert component_degree(f) == 2
    # common denominator (s+2)(s+3): the curve has degree 3
    assert projective_degree([f, UniRatFunc.const(QQ, 1) / (s + 3)]) == 3


def test_quadratic_fit_examples():
    fit = quadratic_fit([1, 3, 5, 9, 15, 23, 33, 45, 59])
    assert fit.eventually_quadratic and fit.leading_coefficient == 1
    assert not quadratic_fit([1, 2, 4, 8, 16, 32, 64]).eventually_quadratic
    assert not quadratic_fit([1, 2, 3, 4, 5, 6, 7]).eventually_quadratic
    with pytest.raises(InsufficientDataError):
        quadratic_fit([1, 2, 3])
    q = quasi_quadratic_fit([1, 4, 7, 13, 21, 32, 45, 61, 79])
    assert q.eventually_quadratic and q.period == 2


@given(st.integers(1, 9), st.integers(-20, 20), st.integers(-20, 20), st.integers(0, 3))
def test_fit_recovers_quadratics(a, b, c, onset):
    seq = [0] * onset + [a * n * n + b * n + c for n in range(8)]
    fit = quadratic_fit(seq)
    assert fit.eventually_quadratic and fit.leading_coefficient == a


@given(st.lists(st.integers(-50, 50), min_size=4, max_size=12))
def test_differences_telescope(seq):
    d = differences(seq)
    assert sum(d) == seq[-1] - seq[0]
    assert differences(seq, 2) == differences(d)


def test_psi_degrees_short():
    assert psi_degree_sequence(Fraction(5, 7), H, 5, trials=2) == [1, 3, 5, 9, 15, 23]
