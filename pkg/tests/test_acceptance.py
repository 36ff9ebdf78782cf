"""Acceptance criteria, one test each.

Every test records a one-line verdict with its wall-clock time; the lines
are printed in the pytest terminal summary, or directly when this file is
run as a script.
"""

import time
from fractions import Fraction

import pytest

from superqrt.degrees import phi_bidegrees, psi_degree_sequence, quadratic_fit
from superqrt.divisor import BASIS, parse_class
from superqrt.dynamics import I1, I2, PHI, PHI_INV, check_inverse_identity, check_invariant_identity
from superqrt.exact import FunctionField
from superqrt.invariants import find_invariants, kernel_is_invariant
from superqrt.picard import (
    I1_CLASS,
    I2_CLASS,
    REFERENCE_JORDAN,
    build_action_matrix,
    growth_class,
    predicted_degrees,
    tabulated_images,
)
from superqrt.singularity import PRESETS, leading_matches, run_preset
from superqrt.tower import (
    NAMED_HYPERSURFACES,
    TABULATED_MULTIPLICITIES,
    TABULATED_PROPER_CLASSES,
    as_base_rf,
    class_of_hypersurface,
    multiplicities,
)

RESULTS = {}
HF = FunctionField("h")
_CACHE = {}


def record(n, title, ok, seconds, budget=None, detail=""):
    within = budget is None or seconds <= budget
    verdict = "PASS" if ok and within else "FAIL"
    limit = f" / {budget:.0f} s" if budget else ""
    extra = f" [{detail}]" if detail else ""
    RESULTS[n] = f"criterion {n:>2} {verdict}  {title}  ({seconds:.2f} s{limit}){extra}"
    return ok and within


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def action_matrix():
    if "m" not in _CACHE:
        _CACHE["m"] = timed(lambda: build_action_matrix(compute=True, strict=False))
    return _CACHE["m"]


def test_criterion_01_invariants():
    ok, dt = timed(lambda: check_invariant_identity(PHI, I1) and check_invariant_identity(PHI, I2))
    assert record(1, "phi preserves I1 and I2 exactly", ok, dt, 10)


def test_criterion_02_inverse():
    ok, dt = timed(lambda: check_inverse_identity(PHI, PHI_INV))
    assert record(2, "phi^-1 o phi = id", ok, dt, 10)


def test_criterion_03_singularity_patterns():
    def go():
        bad = []
        for key, p in PRESETS.items():
            for germ, tr in run_preset(key, (0, 1, 2)):
                if tuple(tr.orders) != p.expected_orders:
                    bad.append(f"{key} seed {germ.seed}: orders {tr.orders}")
                if (tr.classification, tr.period) != (p.expected_class, p.expected_period):
                    bad.append(f"{key} seed {germ.seed}: {tr.classification} {tr.period}")
                bad += [f"{key} seed {germ.seed}: {m}" for m in leading_matches(tr, germ, p.expected_leading)]
        return bad

    bad, dt = timed(go)
    shape = (
        PRESETS["seq5"].expected_class == "confined" and PRESETS["seq5"].expected_period == 4
        and PRESETS["seq6"].expected_period == 3 and PRESETS["seq8"].expected_period == 3
    )
    assert record(3, "singularity patterns seq5-seq8: orders, leading terms, confinement, 3 seeds", shape and not bad, dt, 60,
                  "; ".join(bad[:3]))


def test_criterion_04_multiplicities():
    def go():
        out = {}
        for name in ("z1", "x2-1", "I1-member"):
            expr, bideg = NAMED_HYPERSURFACES[name]
            rf = as_base_rf(expr)
            kw = {"bidegree": bideg} if rf.den.degree() == 0 else {}
            out[name] = multiplicities(rf, **kw)
        return out

    got, dt = timed(go)
    bad = [n for n, m in got.items() if m != TABULATED_MULTIPLICITIES[n]]
    assert record(4, "vanishing orders of z1, x2-1, I1-member", not bad, dt, 300, ", ".join(bad))


def test_criterion_05_proper_classes():
    def go():
        return {n: class_of_hypersurface(*NAMED_HYPERSURFACES[n])[1] for n in TABULATED_PROPER_CLASSES}

    got, dt = timed(go)
    bad = [f"{n}: {c}" for n, c in got.items() if c != parse_class(TABULATED_PROPER_CLASSES[n])]
    assert record(5, "proper-transform classes of z1, x2-1, z3, I1, I2", not bad, dt, None, "; ".join(bad))


def test_criterion_06_picard_rows():
    am, dt = action_matrix()
    table = tabulated_images()
    bad = [b for b in BASIS if am.images[b] != table[b]]
    named = (
        am.images["Hb"] == parse_class("Ha+3Hb-2E1-3E11-E_{6,7,9,10,12,13,14}")
        and am.images["E1"] == parse_class("Hb-E1-E10-E11")
    )
    assert record(6, "all 19 pull-back rows recomputed and equal to the table", named and not bad, dt, None,
                  ", ".join(bad))


def test_criterion_07_growth():
    am, _ = action_matrix()
    g, dt = timed(lambda: growth_class(am))
    ok = g.spectral_radius_one and g.max_unit_block == 3 and g.growth == "polynomial degree 2"
    ok = ok and g.total_block_size() == 19
    same = g.jordan_multiset() == REFERENCE_JORDAN
    detail = f"Jordan multiset {'equals' if same else 'differs from'} reference: {g.jordan}"
    assert record(7, "spectral radius 1, largest unit block 3, quadratic growth", ok and same, dt, None, detail)


def test_criterion_08_degree_stability():
    am, _ = action_matrix()
    run, dt = timed(lambda: phi_bidegrees(10, Fraction(1, 3), trials=3, seed=0))
    pred = predicted_degrees(am, 10)
    want = [(*a, *b) for a, b in zip(pred["Ha"], pred["Hb"])]
    bad = [n for n, (d, w) in enumerate(zip(run.degrees, want)) if tuple(d) != w]
    ok = not bad and not run.disagreements and len(run.per_trial) >= 3
    assert record(8, "bidegrees of phi^n = H-part of M^n, n <= 10, 3 lines", ok, dt, 600,
                  f"mismatch at n={bad}" if bad else f"deg phi^10 = {run.degrees[10]}")


def test_criterion_09_psi_growth():
    seq, dt = timed(lambda: psi_degree_sequence(Fraction(5, 7), Fraction(1, 3), 8, trials=3))
    fit = quadratic_fit(seq)
    assert record(9, "degrees of psi^n, n <= 8, eventually quadratic", fit.eventually_quadratic, dt, 600,
                  ", ".join(map(str, seq)))


def test_criterion_10_invariant_recovery():
    def go():
        return find_invariants(I1_CLASS, ("1", "I1")), find_invariants(I2_CLASS, ("1", "I1", "I2"))

    (a, b), dt = timed(go)
    _, _, k1, r1 = a
    _, _, k2, r2 = b
    h = HF.gen
    ok = k1.dimension == 2 and r1.matched and k2.dimension == 3 and r2.matched
    # the non-constant kernel vector is I1 / h, an exact multiple of I1
    ok = ok and r1.coefficients[1] == [HF.zero, HF.one / h]
    ok = ok and kernel_is_invariant(k1) and kernel_is_invariant(k2)
    assert record(10, "kernels: dim 2 = <1, I1> and dim 3 = <1, I1, I2> over Q(h)", ok, dt, None,
                  f"dims {k1.dimension}, {k2.dimension}")


if __name__ == "__main__":
    import sys

    fns = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in fns:
        try:
            fn()
        except AssertionError:
            failed += 1
        except Exception as exc:  # keep going, report the rest
            failed += 1
            n = int(fn.__name__.split("_")[2])
            RESULTS.setdefault(n, f"criterion {n:>2} FAIL  {fn.__name__}: {exc!r}")
        print(RESULTS[int(fn.__name__.split("_")[2])], flush=True)
    sys.exit(1 if failed else 0)
