"""Singularity patterns of phi traced on Laurent germs.

A germ is a point whose coordinates are rational functions of a small
parameter e.  By default the coefficients are rationals, with h set to a
sampled generic value (orders can only differ from the Q(h) computation on
finitely many h); ``symbolic=True`` keeps h transcendental, which is exact
but much slower.  The free constants of a pattern are sampled rationals.  Iterating phi on the germ and reading off e-orders
shows which hypersurfaces are contracted and where they come back.

The dimension of the limit point family at each step is the rank of the
Jacobian of the limit coordinates with respect to the free constants,
computed exactly with a second transcendental ``tau`` (constant c_j
replaced by c_j + tau, derivative at tau = 0).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from .dynamics import PHI
from .exact import (
    QQ,
    FunctionField,
    UniRatFunc,
    UPoly,
    rf_on_germs,
)
from .parsing import parse_rational
from .picard import rank

P1_4 = "(P1)^4"
P2xP2 = "P2xP2"
AMBIENTS = (P1_4, P2xP2)

HF = FunctionField("h")
TAU = FunctionField("tau")


class DegenerateGermError(ValueError):
    pass


@dataclass
class EpsilonGerm:
    """Starting germ: ``build(field, h, consts)`` returns the four
    coordinates as UniRatFunc over ``field``."""

    name: str
    ambient: str
    constants: Dict[str, Fraction]
    build: Callable
    seed: int = 0

    def coordinates(self, field=HF, h=None, consts=None) -> List[UniRatFunc]:
        h = field.gen if h is None else h
        return self.build(field, h, consts or {k: field(v) for k, v in self.constants.items()})


@dataclass
class StepRecord:
    orders: Tuple
    leading: Tuple
    charts: Tuple[str, ...]
    limit: Tuple
    dimension: int
    constant_coords: Tuple[Tuple[int, object], ...]

    @property
    def signature(self):
        return self.charts, self.constant_coords


@dataclass
class OrderTrace:
    ambient: str
    steps: List[StepRecord]
    h_value: Fraction | None = None
    classification: str = "unresolved"
    period: int | None = None
    contraction_step: int | None = None
    notes: List[str] = field(default_factory=list)

    @property
    def orders(self):
        return [s.orders for s in self.steps]

    @property
    def dimensions(self):
        return [s.dimension for s in self.steps]


# ---------------------------------------------------------------------------
# germ iteration
# ---------------------------------------------------------------------------


def _const(field, c) -> UniRatFunc:
    return UniRatFunc.const(field, c)


def _iterate(coords: List[UniRatFunc], h_val, steps: int) -> List[List[UniRatFunc]]:
    field = coords[0].field
    hh = _const(field, h_val)
    out = [list(coords)]
    for _ in range(steps):
        vals = dict(zip(PHI.source_vars, out[-1]))
        vals["h"] = hh
        out.append(PHI.apply_germ(vals))
    return out


def _iterate_tangents(orbit: List[List[UniRatFunc]], h_val, tangents: List[List[UniRatFunc]]):
    """Push tangent vectors (one per free constant) along a germ orbit.
    Returns ``out[k][j]``: the j-th tangent at step k."""
    hh = _const(QQ, h_val)
    out = [tangents]
    for germ in orbit[:-1]:
        vals = dict(zip(PHI.source_vars, germ))
        vals["h"] = hh
        jac = [[rf_on_germs(rf, vals) if not rf.num.is_zero() else None for rf in row] for row in PHI.partials()]
        nxt = []
        for t in out[-1]:
            img = []
            for row in jac:
                acc = _const(QQ, 0)
                for d, ti in zip(row, t):
                    if d is not None and not ti.is_zero():
                        acc = acc + d * ti
                img.append(acc)
            nxt.append(img)
        out.append(nxt)
    return out


def _limit_slots(coords: Sequence[UniRatFunc], ambient: str):
    """Chart label per block and, per limit coordinate, a recipe
    ('id', i), ('inv', i) or ('ratio', i, j) turning the germ into a function
    regular at e = 0."""
    orders = [f.order() for f in coords]
    if ambient == P1_4:
        charts = tuple("fin" if o >= 0 else "inf" for o in orders)
        slots = [("id", i) if o >= 0 else ("inv", i) for i, o in enumerate(orders)]
        return charts, slots
    charts, slots = [], []
    for a, b in ((0, 1), (2, 3)):
        oa, ob = orders[a], orders[b]
        if oa >= 0 and ob >= 0:
            charts.append("x")
            slots += [("id", a), ("id", b)]
        elif oa <= ob:
            charts.append("y")
            slots += [("inv", a), ("ratio", b, a)]
        else:
            charts.append("z")
            slots += [("ratio", a, b), ("inv", b)]
    return tuple(charts), slots


def _slot_value(slot, f: Sequence[UniRatFunc]) -> UniRatFunc:
    if slot[0] == "id":
        return f[slot[1]]
    if slot[0] == "inv":
        return f[slot[1]].inverse()
    return f[slot[1]] / f[slot[2]]


def _slot_tangent(slot, f: Sequence[UniRatFunc], t: Sequence[UniRatFunc]) -> UniRatFunc:
    if slot[0] == "id":
        return t[slot[1]]
    if slot[0] == "inv":
        g = f[slot[1]]
        return -(t[slot[1]] / (g * g))
    a, b = slot[1], slot[2]
    return (t[a] * f[b] - f[a] * t[b]) / (f[b] * f[b])


def _chart_and_limit(coords: Sequence[UniRatFunc], ambient: str):
    """Chart label per coordinate block and the limit point in it."""
    charts, slots = _limit_slots(coords, ambient)
    return charts, tuple(_slot_value(sl, coords).value_at_zero() for sl in slots)


def _tangent_at_zero(f: UniRatFunc) -> Tuple[UniRatFunc, UniRatFunc]:
    """For a germ over Q(tau): its value and its tau-derivative at tau = 0,
    both as germs over Q."""
    n0 = UPoly(QQ, [c(Fraction(0)) for c in f.num.coeffs])
    d0 = UPoly(QQ, [c(Fraction(0)) for c in f.den.coeffs])
    n1 = UPoly(QQ, [c.diff()(Fraction(0)) for c in f.num.coeffs])
    d1 = UPoly(QQ, [c.diff()(Fraction(0)) for c in f.den.coeffs])
    return UniRatFunc(n0, d0), UniRatFunc(n1 * d0 - n0 * d1, d0 * d0)


def _leading(f: UniRatFunc):
    return None if f.is_zero() else f.leading_coefficient()


def track(
    start: EpsilonGerm, steps: int, h_sample: Fraction | None = None, symbolic: bool = False
) -> OrderTrace:
    """Iterate phi on ``start``; record orders, leading terms, limit points
    and the dimension of the limit family at each step."""
    rng = random.Random(start.seed + 7919)
    h0 = h_sample if h_sample is not None else Fraction(rng.randint(2, 60), rng.randint(61, 97))
    base = start.build(QQ, h0, dict(start.constants))
    if all(f.order() >= 0 and (f - _const(QQ, f.value_at_zero())).is_zero() for f in base):
        raise DegenerateGermError("the germ does not depend on the small parameter")
    main = _iterate(start.coordinates(), HF.gen, steps) if symbolic else _iterate(base, h0, steps)
    orbit = main if not symbolic else _iterate(base, h0, steps)
    names = list(start.constants)
    # Jacobian columns: one tangent per free constant, h fixed to h0
    tangents = []
    for name in names:
        consts = {k: TAU(v) for k, v in start.constants.items()}
        consts[name] = consts[name] + TAU.gen
        tangents.append([_tangent_at_zero(f)[1] for f in start.build(TAU, TAU(h0), consts)])
    pushed = _iterate_tangents(orbit, h0, tangents)
    records = []
    for k, germ in enumerate(main):
        orders = tuple(f.order() for f in germ)
        leading = tuple(_leading(f) for f in germ)
        charts, limit = _chart_and_limit(germ, start.ambient)
        _, slots = _limit_slots(orbit[k], start.ambient)
        rows = [[_slot_tangent(sl, orbit[k], t).value_at_zero() for sl in slots] for t in pushed[k]]
        jac = [list(col) for col in zip(*rows)] if rows else []
        dim = rank(jac) if jac else 0
        const_coords = tuple(
            (i, str(limit[i])) for i in range(4) if not jac or not any(jac[i])
        )
        records.append(StepRecord(orders, leading, charts, limit, dim, const_coords))
    trace = OrderTrace(start.ambient, records, None if symbolic else h0)
    classify(trace, len(names))
    return trace


def classify(trace: OrderTrace, n_constants: int = 3) -> str:
    """Label the pattern.

    confined: a hypersurface family (full rank) contracts and a hypersurface
    family comes back; cyclic: the original chart and constant coordinates
    recur; anti-confined: a lower-dimensional family opens up to a
    hypersurface and contracts again.
    """
    full = 3
    dims = trace.dimensions
    steps = trace.steps
    trace.classification, trace.period, trace.contraction_step = "unresolved", None, None
    if dims[0] >= full:
        kc = next((k for k in range(1, len(dims)) if dims[k] < full), None)
        if kc is None:
            trace.notes.append("no contraction within the traced steps")
            return trace.classification
        trace.contraction_step = kc
        for k in range(kc + 1, len(dims)):
            if dims[k] >= full and steps[k].signature == steps[0].signature:
                trace.classification, trace.period = "cyclic", k
                return trace.classification
        for k in range(kc + 1, len(dims)):
            if dims[k] >= full:
                trace.classification, trace.period = "confined", k
                return trace.classification
        return trace.classification
    up = next((k for k in range(1, len(dims)) if dims[k] >= full), None)
    if up is not None:
        down = next((k for k in range(up + 1, len(dims)) if dims[k] < full), None)
        if down is not None:
            trace.classification, trace.period, trace.contraction_step = "anti-confined", down, down
    return trace.classification


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def _e(field):
    return UniRatFunc.gen(field)


def _sample(rng, names, avoid=None):
    while True:
        vals = {n: Fraction(rng.randint(-40, 40), rng.randint(1, 40)) for n in names}
        if all(v not in (0, 1, -1) for v in vals.values()) and (avoid is None or not avoid(vals)):
            return vals


@dataclass(frozen=True)
class Preset:
    key: str
    ambient: str
    constants: Tuple[str, ...]
    steps: int
    expected_class: str
    expected_period: int | None
    expected_orders: Tuple[Tuple, ...] = ()
    # (step, coordinate index, expression in h and the constants)
    expected_leading: Tuple[Tuple[int, int, str], ...] = ()


def _build_seq5(field, h, c):
    e = _e(field)
    return [_const(field, c["x0_0"]), _const(field, c["x1_0"]), e + _const(field, field.one), _const(field, c["x3_0"])]


def _build_seq6(field, h, c):
    e = _e(field)
    return [_const(field, c["x0_0"]), _const(field, c["x1_0"]), e.inverse(), _const(field, c["x3_0"])]


def _build_seq7(field, h, c):
    e = _e(field)
    x0 = c["x0_0"]
    kappa = -field.one + h / ((x0 - 1) * (x0 - 1))
    return [
        _const(field, c["p"]),
        e.inverse() * _const(field, kappa) + _const(field, c["q"]),
        _const(field, x0),
        e.inverse(),
    ]


def _build_seq8(field, h, c):
    e = _e(field)
    return [_const(field, c["x0_0"]), _const(field, c["x1_0"]), e.inverse(), e.inverse() * _const(field, c["c_0"])]


PRESETS: Dict[str, Preset] = {
    "seq5": Preset(
        "seq5", P1_4, ("x0_0", "x1_0", "x3_0"), 4, "confined", 4,
        ((0, 0, 0, 0), (0, 0, -1, -2), (-1, -2, -1, -2), (-1, -2, 0, 0), (0, 0, 0, 0)),
        (
            (1, 0, "1"), (1, 1, "x3_0"), (1, 2, "-h"), (1, 3, "1+h*x3_0"),
            (2, 0, "-h"), (2, 1, "1+h*x3_0"), (2, 2, "h"), (2, 3, "-(1+h*x3_0)"),
            (3, 0, "h"), (3, 1, "-(1+h*x3_0)"), (3, 2, "1"),
            (4, 0, "1"), (4, 2, "x0_0"),
        ),
    ),
    "seq6": Preset(
        "seq6", P1_4, ("x0_0", "x1_0", "x3_0"), 3, "cyclic", 3,
        ((0, 0, -1, 0), (-1, 0, -1, 0), (-1, 0, 0, 0), (0, 0, -1, 0)),
        (
            (1, 0, "1"), (1, 1, "x3_0"), (1, 2, "-1"), (1, 3, "-x1_0-x3_0"),
            # x0 at step 2 is x2 of step 1, hence the sign
            (2, 0, "-1"), (2, 1, "-x1_0-x3_0"), (2, 2, "x0_0"), (2, 3, "x1_0"),
            (3, 0, "x0_0"), (3, 1, "x1_0"), (3, 2, "1"),
        ),
    ),
    "seq7": Preset(
        "seq7", P1_4, ("p", "q", "x0_0"), 3, "anti-confined", 3,
        ((0, -1, 0, -1), (0, -1, 0, 0), (0, 0, 0, -1), (0, -1, 0, -1)),
        ((1, 0, "x0_0"), (1, 1, "1")),
    ),
    "seq8": Preset(
        "seq8", P2xP2, ("x0_0", "x1_0", "c_0"), 3, "cyclic", 3,
        ((0, 0, -1, -1), (-1, -1, -1, -1), (-1, -1, 0, 0), (0, 0, -1, -1)),
        (
            (1, 0, "1"), (1, 1, "c_0"), (1, 2, "-1"), (1, 3, "-c_0"),
            (2, 0, "-1"), (2, 1, "-c_0"), (2, 2, "x0_0"), (2, 3, "x1_0"),
            (3, 0, "x0_0"), (3, 1, "x1_0"), (3, 2, "1"), (3, 3, "c_0"),
        ),
    ),
}

_BUILDERS = {"seq5": _build_seq5, "seq6": _build_seq6, "seq7": _build_seq7, "seq8": _build_seq8}


def _seq5_avoid(v):
    return v["x3_0"] == 0


def _seq7_avoid(v):
    return v["x0_0"] == 1


def preset_germ(key: str, seed: int = 0, ambient: str | None = None) -> EpsilonGerm:
    """Germ for a named pattern; ``ambient`` overrides the default space."""
    if key not in PRESETS:
        raise KeyError(f"unknown preset {key!r}; choose from {sorted(PRESETS)}")
    p = PRESETS[key]
    rng = random.Random(seed)
    avoid = {"seq5": _seq5_avoid, "seq7": _seq7_avoid}.get(key)
    consts = _sample(rng, p.constants, avoid)
    return EpsilonGerm(key, ambient or p.ambient, consts, _BUILDERS[key], seed)


def leading_matches(trace: OrderTrace, germ: EpsilonGerm, expected: Sequence[Tuple[int, int, str]]) -> List[str]:
    """Mismatches between recorded leading terms and expressions in h and
    the germ's constants (empty list when all agree)."""
    names = ("h",) + tuple(germ.constants)
    h = HF.gen if trace.h_value is None else HF(trace.h_value)
    vals = {"h": h, **{k: HF(v) for k, v in germ.constants.items()}}
    bad = []
    for step, idx, text in expected:
        if step >= len(trace.steps):
            continue
        want = parse_rational(text, names).evaluate(vals)
        got = trace.steps[step].leading[idx]
        if HF(got) != HF(want):
            bad.append(f"step {step} coordinate {idx}: expected {text} = {want}, got {got}")
    return bad


def run_preset(
    key: str,
    seeds: Sequence[int] = (0, 1, 2),
    ambient: str | None = None,
    steps: int | None = None,
    symbolic: bool = False,
):
    """Trace a preset for several seeds; returns (germ, trace) pairs."""
    p = PRESETS[key]
    out = []
    for s in seeds:
        g = preset_germ(key, s, ambient)
        out.append((g, track(g, steps or p.steps, symbolic=symbolic)))
    return out
