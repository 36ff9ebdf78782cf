from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superqrt.exact import QQ, UniRatFunc
from superqrt.singularity import (
    PRESETS,
    DegenerateGermError,
    EpsilonGerm,
    leading_matches,
    preset_germ,
    run_preset,
    track,
)


@pytest.fixture(scope="module")
def traces():
    return {key: run_preset(key) for key in PRESETS}


@pytest.mark.parametrize("key", sorted(PRESETS))
def test_orders_and_classification(traces, key):
    p = PRESETS[key]
    for germ, trace in traces[key]:
        assert tuple(trace.orders) == p.expected_orders
        assert trace.classification == p.expected_class
        assert trace.period == p.expected_period


@pytest.mark.parametrize("key", sorted(PRESETS))
def test_leading_terms(traces, key):
    for germ, trace in traces[key]:
        assert leading_matches(trace, germ, PRESETS[key].expected_leading) == []


def test_confinement_dimensions(traces):
    _, trace = traces["seq5"][0]
    # hypersurface, contracted for three steps, hypersurface again
    assert trace.dimensions[0] == 3 and trace.dimensions[-1] == 3
    assert trace.contraction_step == 1
    assert all(d < 3 for d in trace.dimensions[1:4])


def test_seeds_agree(traces):
    for key in PRESETS:
        assert len({tuple(t.orders) for _, t in traces[key]}) == 1


@pytest.mark.parametrize("key", ["seq6", "seq7"])
def test_patterns_absent_on_product_of_planes(key):
    [(_, trace)] = run_preset(key, [0], "P2xP2")
    assert trace.classification == "unresolved"


def test_symbolic_mode_agrees():
    [(g, t)] = run_preset("seq8", [0], symbolic=True)
    assert t.h_value is None
    assert tuple(t.orders) == PRESETS["seq8"].expected_orders
    assert leading_matches(t, g, PRESETS["seq8"].expected_leading) == []


def test_constant_germ_rejected():
    g = EpsilonGerm("const", "P1^4", {}, lambda f, h, c: [UniRatFunc.const(f, f.one)] * 4)
    with pytest.raises(DegenerateGermError):
        track(g, 2)


def test_unknown_preset():
    with pytest.raises(KeyError):
        preset_germ("seq9")


@settings(max_examples=5)
@given(st.integers(3, 10_000))
def test_orders_independent_of_seed(seed):
    [(_, t)] = run_preset("seq5", [seed])
    assert tuple(t.orders) == PRESETS["seq5"].expected_orders
