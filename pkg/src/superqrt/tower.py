"""The nine base charts of P^2 x P^2, the seventeen blow-up charts C1..C17
and everything computed from them: valuations along exceptional divisors,
proper-transform classes and pull-backs of classes under phi.

Each chart stores its inverse bindings (parent coordinates as rational
functions of its own) and forward bindings (its coordinates in terms of the
parent's).  Base charts have the affine coordinates (x0, x1, x2, x3) as
parent.  Per factor, chart ``x`` is affine, ``y`` has y0 = 1/x0,
y1 = x1/x0 and ``z`` has z0 = x0/x1, z1 = 1/x1 (same for x2, x3).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

from .divisor import N_BLOWUPS, DivisorClass
from .dynamics import PHI, RationalMapDef
from .exact import (
    INFINITE_ORDER,
    QQ,
    DegenerateSubstitutionError,
    MultiPoly,
    RationalFunction,
    UniRatFunc,
    cancel_monomial,
    divide_exact,
    rf_on_germs,
    substitute,
)
from .parsing import parse_rational

log = logging.getLogger(__name__)

BASE_VARS = ("x0", "x1", "x2", "x3")
PARAM = "h"

# Reference data: (expression, bidegree of the hypersurface) -> vanishing
# orders along E1'..E17' and the class of the proper transform.
TABULATED_MULTIPLICITIES: Dict[str, Tuple[int, ...]] = {
    "z1": (0, 0, 0, 0, 0, 1, 2, 2, 2, 2, 1, 1, 1, 2, 2, 2, 2),
    "x2-1": (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1),
    "I1-member": (2, 3, 3, 4, 4, 2, 3, 3, 4, 4, 4, 1, 2, 7, 7, 8, 8),
}
TABULATED_PROPER_CLASSES: Dict[str, str] = {
    "z1": "Ha-E6-E7-E11-E12",
    "x2-1": "Hb-E1-E6-E11",
    "z3": "Hb-E1-E2-E11-E12",
    "I1": "2Ha+2Hb-2E1-2E6-4E11-E{2,4,7,9,12,13,14,16}",
    "I2": "2Ha+2Hb-3E11-E{1,2,4,5,6,7,9,10,12,13,14,16,17}",
}
# expressions and bidegrees of the named hypersurfaces; the I1/I2 members
# are I + 3, generic in their pencils
NAMED_HYPERSURFACES: Dict[str, Tuple[str, Tuple[int, int]]] = {
    "z1": ("1/x1", (1, 0)),
    "x2-1": ("x2 - 1", (0, 1)),
    "z3": ("1/x3", (0, 1)),
    "I1": ("-h*x0^2 - h*x0*x2 + h^2*x0*x2 + h*x0^2*x2 - h*x2^2 + h*x0*x2^2 + 3", (2, 2)),
    "I2": (
        "2*h*x0 + x0^2 - 2*h*x0*x1 + 2*h*x2 + x0*x2 - h*x1*x2 + h^2*x1*x2 + 2*h*x0*x1*x2"
        " + x2^2 + h*x1*x2^2 - h*x0*x3 + h^2*x0*x3 + h*x0^2*x3 - 2*h*x2*x3 + 2*h*x0*x2*x3 + 3",
        (2, 2),
    ),
}
NAMED_HYPERSURFACES["I1-member"] = NAMED_HYPERSURFACES["I1"]

_FACTOR_COORDS = {
    1: {"x": ("x0", "x1"), "y": ("y0", "y1"), "z": ("z0", "z1")},
    2: {"x": ("x2", "x3"), "y": ("y2", "y3"), "z": ("z2", "z3")},
}


class InconclusiveValuationError(RuntimeError):
    pass


class DecompositionResidueError(RuntimeError):
    pass


@dataclass(frozen=True)
class Chart:
    """A coordinate system in the tower.

    ``inverse`` maps each parent coordinate to an expression in this chart's
    coordinates; ``forward`` maps each own coordinate to an expression in
    the parent's.  For blow-up charts ``center`` lists generators of the
    blown-up center in parent coordinates and ``exceptional`` names the
    local equation of the new exceptional divisor.
    """

    name: str
    coords: Tuple[str, ...]
    parent: str | None
    parent_coords: Tuple[str, ...]
    inverse: Tuple[Tuple[str, str], ...]
    forward: Tuple[Tuple[str, str], ...]
    base: Tuple[str, str]
    center: Tuple[str, ...] = ()
    exceptional: str | None = None
    index: int | None = None

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.coords + (PARAM,)

    @property
    def parent_vars(self) -> Tuple[str, ...]:
        return self.parent_coords + (PARAM,)

    @cached_property
    def inverse_rf(self) -> Dict[str, RationalFunction]:
        return {k: parse_rational(v, self.vars) for k, v in self.inverse}

    @cached_property
    def forward_rf(self) -> Dict[str, RationalFunction]:
        return {k: parse_rational(v, self.parent_vars) for k, v in self.forward}

    @cached_property
    def center_rf(self) -> List[RationalFunction]:
        return [parse_rational(g, self.parent_vars) for g in self.center]


# ---------------------------------------------------------------------------
# chart table
# ---------------------------------------------------------------------------


def _base_chart(k1: str, k2: str) -> Chart:
    inv, fwd = [], []
    for factor, kind in ((1, k1), (2, k2)):
        a, b = _FACTOR_COORDS[factor]["x"]
        p, q = _FACTOR_COORDS[factor][kind]
        if kind == "x":
            inv += [(a, a), (b, b)]
            fwd += [(a, a), (b, b)]
        elif kind == "y":
            inv += [(a, f"1/{p}"), (b, f"{q}/{p}")]
            fwd += [(p, f"1/{a}"), (q, f"{b}/{a}")]
        else:
            inv += [(a, f"{p}/{q}"), (b, f"1/{q}")]
            fwd += [(p, f"{a}/{b}"), (q, f"1/{b}")]
    coords = _FACTOR_COORDS[1][k1] + _FACTOR_COORDS[2][k2]
    return Chart(k1 + k2, coords, None, BASE_VARS, tuple(inv), tuple(fwd), (k1, k2))


def _blowup(i, parent: Chart, inverse, forward, center, exc_letter) -> Chart:
    """Chart C_i with coordinates (s_i, t_i, u_i, v_i); unlisted coordinates
    are identified positionally with the parent's."""
    coords = tuple(f"{c}{i}" for c in "stuv")
    inv = dict(zip(parent.coords, coords))
    inv.update(inverse)
    fwd = dict(zip(coords, parent.coords))
    fwd.update(forward)
    return Chart(
        f"C{i}",
        coords,
        parent.name,
        parent.coords,
        tuple(inv.items()),
        tuple((c, fwd[c]) for c in coords),
        parent.base,
        tuple(center),
        f"{exc_letter}{i}",
        i,
    )


def _five_blowups(first: int, base: Chart, pt: str, qt: str, tower: Dict[str, Chart]):
    """The chain resolving a curve {x = 1, z = 0, z = 0}: indices first..first+4.

    ``pt`` names the affine coordinate equal to 1 on the center and ``qt``
    the other affine coordinate of that factor; the remaining factor is in
    its z chart.
    """
    i = first
    zz = [c for c in base.coords if c not in (pt, qt)]
    c1 = _blowup(
        i, base,
        {pt: f"1+s{i}", qt: f"t{i}", zz[0]: f"s{i}*u{i}", zz[1]: f"s{i}*v{i}"},
        {f"s{i}": f"{pt}-1", f"t{i}": qt, f"u{i}": f"{zz[0]}/({pt}-1)", f"v{i}": f"{zz[1]}/({pt}-1)"},
        (f"{pt}-1", zz[0], zz[1]),
        "s",
    )
    j = i + 1
    c2 = _blowup(
        j, c1,
        {f"v{i}": f"s{j}*v{j}"},
        {f"v{j}": f"v{i}/s{i}"},
        (f"s{i}", f"v{i}"),
        "s",
    )
    k = i + 2
    c3 = _blowup(
        k, c2,
        {f"u{j}": f"s{k}*u{k}-h/(1+h*t{k})"},
        {f"u{k}": f"(u{j}+h/(1+h*t{j}))/s{j}"},
        (f"s{j}", f"u{j}+h/(1+h*t{j})"),
        "s",
    )
    m = i + 3
    c4 = _blowup(
        m, c3,
        {f"v{k}": f"s{m}*v{m}+1/(1+h*t{m})"},
        {f"v{m}": f"(v{k}-1/(1+h*t{k}))/s{k}"},
        (f"s{k}", f"v{k}-1/(1+h*t{k})"),
        "s",
    )
    n = i + 4
    c5 = _blowup(
        n, c4,
        {f"v{m}": f"s{n}*v{n}+1/(1+h*t{n})^2"},
        {f"v{n}": f"(v{m}-1/(1+h*t{m})^2)/s{m}"},
        (f"s{m}", f"v{m}-1/(1+h*t{m})^2"),
        "s",
    )
    for c in (c1, c2, c3, c4, c5):
        tower[c.name] = c


def _infinity_chain(base: Chart, tower: Dict[str, Chart]):
    c11 = _blowup(
        11, base,
        {"z0": "s11", "z1": "s11*t11", "z2": "s11*u11", "z3": "s11*v11"},
        {"s11": "z0", "t11": "z1/z0", "u11": "z2/z0", "v11": "z3/z0"},
        ("z0", "z1", "z2", "z3"),
        "s",
    )
    c12 = _blowup(
        12, c11,
        {"u11": "1+t12*u12", "v11": "t12*v12"},
        {"u12": "(u11-1)/t11", "v12": "v11/t11"},
        ("t11", "u11-1", "v11"),
        "t",
    )
    c13 = _blowup(13, c12, {"v12": "-1+t13*v13"}, {"v13": "(v12+1)/t12"}, ("t12", "v12+1"), "t")
    c14 = _blowup(
        14, c13,
        {"s13": "s14*t14", "t13": "t14", "u13": "1+h+t14*u14", "v13": "t14*v14"},
        {"s14": "s13/t13", "t14": "t13", "u14": "(u13-1-h)/t13", "v14": "v13/t13"},
        ("s13", "t13", "u13-1-h", "v13"),
        "t",
    )
    c15 = _blowup(
        15, c14,
        {"u14": "t15*v15-2*u15-s15/h", "v14": "u15"},
        {"u15": "v14", "v15": "(u14+2*v14+s14/h)/t14"},
        ("t14", "u14+2*v14+s14/h"),
        "t",
    )
    c16 = _blowup(16, c15, {"u15": "t16*u16-s16/h"}, {"u16": "(u15+s15/h)/t15"}, ("t15", "u15+s15/h"), "t")
    c17 = _blowup(
        17, c16,
        {"v16": "t17*v17+u17/2+(1+h)*s17/h"},
        {"v17": "(v16-u16/2-(1+h)*s16/h)/t16"},
        ("t16", "v16-u16/2-(1+h)*s16/h"),
        "t",
    )
    for c in (c11, c12, c13, c14, c15, c16, c17):
        tower[c.name] = c


def _aux_chart(name: str, parent: Chart, coords, inverse: Mapping[str, str], forward: Mapping[str, str]) -> Chart:
    return Chart(name, tuple(coords), parent.name, parent.coords, tuple(inverse.items()), tuple(forward.items()), parent.base)


@dataclass(frozen=True)
class Candidate:
    """A prime divisor given by a germ: ``var`` = 0 in ``chart``."""

    name: str
    chart: str
    var: str
    divisor_class: DivisorClass


class Tower:
    """Immutable chart data with cached compositions."""

    def __init__(self):
        charts: Dict[str, Chart] = {}
        for k1 in "xyz":
            for k2 in "xyz":
                c = _base_chart(k1, k2)
                charts[c.name] = c
        _five_blowups(1, charts["xz"], "x0", "x1", charts)
        _five_blowups(6, charts["zx"], "x2", "x3", charts)
        _infinity_chain(charts["zz"], charts)
        xx = charts["xx"]
        charts["L_x2"] = _aux_chart(
            "L_x2", xx, ("p0", "p1", "p2", "p3"),
            {"x0": "p0", "x1": "p1", "x2": "1+p2", "x3": "p3"},
            {"p0": "x0", "p1": "x1", "p2": "x2-1", "p3": "x3"},
        )
        charts["L_Ha"] = _aux_chart(
            "L_Ha", xx, ("a0", "a1", "a2", "a3"),
            {"x0": "a0+3/7*a1+2/9", "x1": "a1", "x2": "a2", "x3": "a3"},
            {"a0": "x0-3/7*x1-2/9", "a1": "x1", "a2": "x2", "a3": "x3"},
        )
        charts["L_Hb"] = _aux_chart(
            "L_Hb", xx, ("b0", "b1", "b2", "b3"),
            {"x0": "b0", "x1": "b1", "x2": "b2+5/11*b3-4/13", "x3": "b3"},
            {"b0": "x0", "b1": "x1", "b2": "x2-5/11*x3+4/13", "b3": "x3"},
        )
        self.charts = charts
        self._composite: Dict[str, Dict[str, RationalFunction]] = {}
        self._prime: List[DivisorClass] | None = None

    # -- lookup ------------------------------------------------------------

    def chart(self, name: str) -> Chart:
        try:
            return self.charts[name]
        except KeyError:
            raise KeyError(f"unknown chart {name!r}") from None

    def blowup_chart(self, i: int) -> Chart:
        if not 1 <= i <= N_BLOWUPS:
            raise ValueError(f"exceptional index must be in 1..{N_BLOWUPS}, got {i}")
        return self.charts[f"C{i}"]

    def chain(self, name: str) -> List[Chart]:
        """Charts from the base chart up to ``name`` (inclusive)."""
        out = []
        c = self.chart(name)
        while True:
            out.append(c)
            if c.parent is None:
                break
            c = self.charts[c.parent]
        return out[::-1]

    # -- symbolic pulls ----------------------------------------------------

    def composite(self, name: str) -> Dict[str, RationalFunction]:
        """Base coordinates x0..x3 as rational functions of the chart."""
        if name not in self._composite:
            c = self.chart(name)
            if c.parent is None:
                comp = c.inverse_rf
            else:
                comp = {k: compose_rf(v, c.inverse_rf, c.vars) for k, v in self.composite(c.parent).items()}
            self._composite[name] = comp
        return self._composite[name]

    def pull_between(self, rf: RationalFunction, lower: str, upper: str) -> RationalFunction:
        """Pull a function in ``lower`` chart coordinates up to chart ``upper``
        (``lower`` must lie on the chain of ``upper``)."""
        names = [c.name for c in self.chain(upper)]
        if lower not in names:
            raise ValueError(f"chart {lower} is not below {upper}")
        for c in self.chain(upper)[names.index(lower) + 1:]:
            rf = compose_rf(rf.align(self.charts[c.parent].vars) if c.parent else rf, c.inverse_rf, c.vars)
        return rf

    # -- classes -----------------------------------------------------------

    def exceptional_rf(self, i: int) -> RationalFunction:
        c = self.blowup_chart(i)
        return RationalFunction(MultiPoly.var(c.vars, c.exceptional))

    def total_in_primes(self) -> List[Dict[int, int]]:
        """Row i: multiplicities of the total transform of E_i along each
        prime exceptional divisor E_j' (j >= i, same chain)."""
        rows = []
        for i in range(1, N_BLOWUPS + 1):
            ci = self.blowup_chart(i)
            e = self.exceptional_rf(i)
            row = {}
            for j in range(i, N_BLOWUPS + 1):
                cj = self.blowup_chart(j)
                if ci.name not in (c.name for c in self.chain(cj.name)):
                    continue
                v = self.pull_between(e, ci.name, cj.name).valuation(cj.exceptional)
                if v:
                    row[j] = v
            rows.append(row)
        return rows

    def prime_classes(self) -> List[DivisorClass]:
        """Classes of the prime exceptional divisors E_1', ..., E_17'."""
        if self._prime is None:
            mu = self.total_in_primes()
            prime: Dict[int, DivisorClass] = {}
            for i in range(N_BLOWUPS, 0, -1):
                cls = DivisorClass.E(i)
                for j, m in mu[i - 1].items():
                    if j != i:
                        cls = cls - prime[j] * m
                prime[i] = cls
            self._prime = [prime[i] for i in range(1, N_BLOWUPS + 1)]
        return self._prime

    def prime_class(self, i: int) -> DivisorClass:
        return self.prime_classes()[i - 1]

    def candidates(self) -> List[Candidate]:
        out = [
            Candidate(f"E{i}'", f"C{i}", self.blowup_chart(i).exceptional, self.prime_class(i))
            for i in range(1, N_BLOWUPS + 1)
        ]
        out += [
            Candidate("{x2=1}'", "L_x2", "p2", DivisorClass.parse("Hb-E1-E6-E11")),
            Candidate("{z3=0}'", "xz", "z3", DivisorClass.parse("Hb-E1-E2-E11-E12")),
            Candidate("{z1=0}'", "zx", "z1", DivisorClass.parse("Ha-E6-E7-E11-E12")),
            Candidate("generic Ha", "L_Ha", "a0", DivisorClass.parse("Ha")),
            Candidate("generic Hb", "L_Hb", "b2", DivisorClass.parse("Hb")),
        ]
        return out

    # -- export ------------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for c in self.charts.values():
            lines.append(f"chart {c.name}")
            lines.append("  coordinates " + " ".join(c.coords))
            lines.append(f"  parent {c.parent or 'affine (x0, x1, x2, x3)'}")
            for k, v in c.inverse:
                lines.append(f"  {k} = {v}")
            if c.center:
                lines.append("  center " + ", ".join(c.center))
            if c.exceptional:
                lines.append(f"  exceptional E{c.index}: {c.exceptional} = 0")
        primes = self.prime_classes()
        for i, p in enumerate(primes, 1):
            lines.append(f"prime E{i}' = {p}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=1)
def default_tower() -> Tower:
    return Tower()


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def compose_rf(rf: RationalFunction, bindings: Mapping[str, RationalFunction], target_vars) -> RationalFunction:
    """rf with variables replaced by ``bindings`` (others carried through)."""
    clear = {v: max(rf.num.degree(v), rf.den.degree(v), 0) for v in rf.vars}
    n, _ = substitute(rf.num, bindings, target_vars, clear)
    d, _ = substitute(rf.den, bindings, target_vars, clear)
    return cancel_monomial(RationalFunction(n, d))


def as_base_rf(f) -> RationalFunction:
    """Coerce a polynomial or rational function in (x0..x3, h) to the
    standard variable order."""
    allv = BASE_VARS + (PARAM,)
    if isinstance(f, str):
        f = parse_rational(f, allv)
    if isinstance(f, (int, Fraction)):
        return RationalFunction(MultiPoly.const(allv, f))
    if isinstance(f, MultiPoly):
        f = RationalFunction(f)
    return f.align(allv)


def natural_bidegree(p: MultiPoly) -> Tuple[int, int]:
    return max(p.degree(("x0", "x1")), 0), max(p.degree(("x2", "x3")), 0)


def trivialization(chart: Chart, bidegree: Tuple[int, int]) -> RationalFunction:
    """Factor turning an affine polynomial of the given bidegree into the
    local expression of the corresponding section in ``chart``'s base."""
    allv = BASE_VARS + (PARAM,)
    out = RationalFunction(MultiPoly.const(allv, 1))
    for (kind, (a, b)), d in zip(zip(chart.base, (("x0", "x1"), ("x2", "x3"))), bidegree):
        if kind == "y":
            out = out / MultiPoly.var(allv, a) ** d
        elif kind == "z":
            out = out / MultiPoly.var(allv, b) ** d
    return out


def pull_to_chart(f, chart: str, tower: Tower | None = None, bidegree=None) -> RationalFunction:
    """f (in x0..x3, h) expressed in the coordinates of ``chart``.

    With ``bidegree`` the result is the local expression of the section of
    that bidegree defined by f.
    """
    tower = tower or default_tower()
    c = tower.chart(chart)
    rf = as_base_rf(f)
    if bidegree is not None:
        rf = rf * trivialization(tower.chain(chart)[0], bidegree)
    return compose_rf(rf, tower.composite(chart), c.vars)


# ---------------------------------------------------------------------------
# germs
# ---------------------------------------------------------------------------


def _rand(rng: random.Random, height: int = 50) -> Fraction:
    while True:
        q = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if q:
            return q


def chart_germ(chart: Chart, var: str, rng: random.Random) -> Dict[str, UniRatFunc]:
    """Germ with ``var`` = e and the other chart coordinates and h random."""
    e = UniRatFunc.gen(QQ)
    vals = {c: (e if c == var else UniRatFunc.const(QQ, _rand(rng))) for c in chart.coords}
    vals[PARAM] = UniRatFunc.const(QQ, _rand(rng))
    return vals


def descend(tower: Tower, chart: str, vals: Dict[str, UniRatFunc]) -> Dict[str, UniRatFunc]:
    """Germ values in chart coordinates -> affine x0..x3 (plus h)."""
    h = vals[PARAM]
    for c in reversed(tower.chain(chart)):
        vals = {k: rf_on_germs(rf, vals) for k, rf in c.inverse_rf.items()}
        vals[PARAM] = h
    return vals


class OutsideChart(Exception):
    """The germ's limit point is not in the affine part of the chart."""


def ascend(tower: Tower, chart: str, vals: Dict[str, UniRatFunc]) -> Dict[str, UniRatFunc]:
    """Affine x0..x3 germ values -> coordinates of ``chart``; raises
    OutsideChart when some intermediate coordinate has a pole."""
    h = vals[PARAM]
    for c in tower.chain(chart):
        try:
            vals = {k: rf_on_germs(rf, vals) for k, rf in c.forward_rf.items()}
        except DegenerateSubstitutionError as exc:
            raise OutsideChart(str(exc)) from None
        if any(v.order() < 0 for v in vals.values()):
            raise OutsideChart(c.name)
        vals[PARAM] = h
    return vals


# ---------------------------------------------------------------------------
# valuations and classes
# ---------------------------------------------------------------------------


def mult_along(
    f,
    i: int,
    tower: Tower | None = None,
    method: str = "symbolic",
    bidegree=None,
    trials: int = 3,
    seed: int = 0,
) -> int:
    """Order of vanishing of f along the prime exceptional divisor E_i'.

    A polynomial is read as a section of its own bidegree (or of
    ``bidegree`` when given); a non-polynomial rational function is taken
    as a function.  So ``x2 - 1`` means the hyperplane section and ``1/x1``
    the function z1.
    """
    tower = tower or default_tower()
    chart = tower.blowup_chart(i)
    rf = as_base_rf(f)
    if rf.is_zero():
        raise ValueError("mult_along of the zero function")
    if bidegree is None and rf.den.degree() == 0:
        bidegree = natural_bidegree(rf.num)
    if method == "symbolic":
        v = pull_to_chart(rf, chart.name, tower, bidegree).valuation(chart.exceptional)
        return int(v)
    if method != "sampled":
        raise ValueError(f"unknown method {method!r}")
    if bidegree is not None:
        rf = rf * trivialization(tower.chain(chart.name)[0], bidegree)
    rng = random.Random(seed)
    seen = []
    for _ in range(trials * 4):
        try:
            germ = descend(tower, chart.name, chart_germ(chart, chart.exceptional, rng))
            seen.append(rf_on_germs(rf, germ).order())
        except (DegenerateSubstitutionError, ZeroDivisionError):
            continue
        if len(seen) == trials:
            break
    if not seen:
        raise InconclusiveValuationError(f"every sampled germ on E{i} was degenerate")
    if len(set(seen)) > 1:
        log.warning("sampled valuations on E%d disagree: %s", i, seen)
    return int(min(seen))


def multiplicities(f, tower: Tower | None = None, **kw) -> Tuple[int, ...]:
    return tuple(mult_along(f, i, tower, **kw) for i in range(1, N_BLOWUPS + 1))


def class_from_multiplicities(bidegree: Tuple[int, int], mults: Sequence[int], tower: Tower | None = None) -> DivisorClass:
    tower = tower or default_tower()
    out = DivisorClass.basis("Ha") * bidegree[0] + DivisorClass.basis("Hb") * bidegree[1]
    for i, m in enumerate(mults, 1):
        if m:
            out = out - tower.prime_class(i) * m
    return out


def class_of_hypersurface(f, bidegree: Tuple[int, int], tower: Tower | None = None, **kw):
    """(total, proper) classes of {f = 0} where f has the given bidegree.

    For a rational function such as 1/x1 the bidegree is that of the
    hypersurface it cuts out (here the line at infinity, (1, 0))."""
    tower = tower or default_tower()
    total = DivisorClass.basis("Ha") * bidegree[0] + DivisorClass.basis("Hb") * bidegree[1]
    rf = as_base_rf(f)
    # a non-polynomial f is a function; its zero divisor needs no section
    if rf.den.degree() == 0:
        kw["bidegree"] = bidegree
    mults = multiplicities(rf, tower, **kw)
    return total, class_from_multiplicities(bidegree, mults, tower)


# ---------------------------------------------------------------------------
# pull-backs under phi
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactorData:
    """Homogenized factor components of a map into P^2 x P^2."""

    denominators: Tuple[MultiPoly, MultiPoly]
    bidegrees: Tuple[Tuple[int, int], Tuple[int, int]]


def _common_denominator(dens: Sequence[MultiPoly]) -> MultiPoly:
    out = dens[0]
    for d in dens[1:]:
        if divide_exact(out, d) is not None:
            continue
        if divide_exact(d, out) is not None:
            out = d
        else:
            out = out * d
    return out


def factor_data(map_def: RationalMapDef = PHI) -> FactorData:
    dens, bidegs = [], []
    for names in (("x0", "x1"), ("x2", "x3")):
        comps = [map_def.components[map_def.target_names.index(n)] for n in names]
        den = _common_denominator([c.den for c in comps])
        nums = []
        for c in comps:
            q = divide_exact(c.num * den, c.den)
            if q is None:
                raise ArithmeticError("common denominator does not clear a component")
            nums.append(q)
        polys = nums + [den]
        bidegs.append(tuple(max(p.degree(g) for p in polys) for g in (("x0", "x1"), ("x2", "x3"))))
        dens.append(den)
    return FactorData(tuple(dens), tuple(bidegs))


def pullback_section(f, bidegree: Tuple[int, int], map_def: RationalMapDef = PHI):
    """(F, (ea, eb)): affine form of the homogeneous pull-back of f."""
    fd = factor_data(map_def)
    rf = map_def.compose_into(as_base_rf(f).num.align(map_def.vars))
    den_f = as_base_rf(f).den
    if den_f.degree() > 0:
        raise ValueError("pullback_section expects a polynomial")
    rf = RationalFunction(rf.num, rf.den * den_f.terms[(0,) * len(den_f.vars)])
    for d, k in zip(fd.denominators, bidegree):
        rf = rf * RationalFunction(d ** k)
    ea = bidegree[0] * fd.bidegrees[0][0] + bidegree[1] * fd.bidegrees[1][0]
    eb = bidegree[0] * fd.bidegrees[0][1] + bidegree[1] * fd.bidegrees[1][1]
    return rf, (ea, eb)


def pullback_class_hypersurface(f, bidegree: Tuple[int, int], tower: Tower | None = None, map_def=PHI) -> DivisorClass:
    """Class of the proper transform of {f o phi = 0}."""
    tower = tower or default_tower()
    F, bideg = pullback_section(f, bidegree, map_def)
    mults = multiplicities(F, tower, bidegree=bideg)
    return class_from_multiplicities(bideg, mults, tower)


def generic_form(bidegree: Tuple[int, int], seed: int = 0) -> MultiPoly:
    """Random polynomial of the given bidegree (all monomials present)."""
    rng = random.Random(seed)
    allv = BASE_VARS + (PARAM,)
    terms = {}
    for i0 in range(bidegree[0] + 1):
        for i1 in range(bidegree[0] + 1 - i0):
            for i2 in range(bidegree[1] + 1):
                for i3 in range(bidegree[1] + 1 - i2):
                    terms[(i0, i1, i2, i3, 0)] = _rand(rng, 30)
    return MultiPoly(allv, terms)


@dataclass
class ExceptionalPullback:
    index: int
    divisor_class: DivisorClass
    decomposition: Dict[str, int] = field(default_factory=dict)
    disagreements: List[str] = field(default_factory=list)


def _center_order(tower: Tower, k: int, image: Dict[str, UniRatFunc]) -> int:
    c = tower.blowup_chart(k)
    try:
        vals = ascend(tower, c.parent, image)
    except OutsideChart:
        return 0
    orders = [rf_on_germs(g, vals).order() for g in c.center_rf]
    return max(0, int(min(orders)))


def pullback_exceptional(
    k: int,
    tower: Tower | None = None,
    map_def: RationalMapDef = PHI,
    trials: int = 3,
    seed: int = 0,
) -> ExceptionalPullback:
    """Class of phi^*(E_k): for each candidate prime divisor D, the order
    along D of the ideal of the k-th center pulled back through phi."""
    tower = tower or default_tower()
    rng = random.Random(seed)
    total = DivisorClass()
    decomp, bad = {}, []
    for cand in tower.candidates():
        chart = tower.chart(cand.chart)
        seen = []
        for _ in range(trials * 4):
            try:
                germ = descend(tower, cand.chart, chart_germ(chart, cand.var, rng))
                pts = dict(zip(map_def.target_names, map_def.apply_germ(germ)))
                pts[PARAM] = germ[PARAM]
                seen.append(_center_order(tower, k, pts))
            except (DegenerateSubstitutionError, ZeroDivisionError):
                continue
            if len(seen) == trials:
                break
        if not seen:
            raise InconclusiveValuationError(f"no usable germ on {cand.name} for E{k}")
        if len(set(seen)) > 1:
            bad.append(cand.name)
            log.warning("pull-back of E%d: orders on %s disagree: %s", k, cand.name, seen)
        v = min(seen)
        if v:
            decomp[cand.name] = v
            total = total + cand.divisor_class * v
    return ExceptionalPullback(k, total, decomp, bad)
