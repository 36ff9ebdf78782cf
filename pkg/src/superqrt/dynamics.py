"""The four-dimensional map phi, its inverse, the reduced three-dimensional
map psi and the two conserved quantities I1, I2.

Points are exact (``Fraction``) affine coordinates.  Maps are stored as
numerator/denominator polynomial pairs so they can be composed symbolically
or evaluated on germs and lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .exact import (
    MultiPoly,
    RationalFunction,
    UniRatFunc,
    UPoly,
    evaluate_fraction,
    rf_on_germs,
    substitute,
)
from .parsing import parse_rational

X_VARS = ("x0", "x1", "x2", "x3", "h")
PSI_VARS = ("x0", "x1", "x2", "h", "c")

_PARTIALS: Dict[int, tuple] = {}


class PoleError(ZeroDivisionError):
    """A map was applied on its polar locus."""

    def __init__(self, message: str, coordinate: str | None = None, step: int | None = None):
        super().__init__(message)
        self.coordinate = coordinate
        self.step = step


@dataclass(frozen=True)
class AffinePoint4:
    coords: Tuple[Fraction, Fraction, Fraction, Fraction]
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))
        object.__setattr__(self, "h", Fraction(self.h))
        if len(self.coords) != 4:
            raise ValueError("AffinePoint4 needs four coordinates")

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(zip(X_VARS, self.coords + (self.h,)))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + f"; h={self.h})"


@dataclass(frozen=True)
class RationalMapDef:
    """A rational map given componentwise by numerator/denominator pairs."""

    name: str
    source_vars: Tuple[str, ...]
    parameters: Tuple[str, ...]
    target_names: Tuple[str, ...]
    components: Tuple[RationalFunction, ...]
    ambient: str = "P2xP2"

    def __post_init__(self):
        for c in self.components:
            if c.den.is_zero():
                raise ValueError("identically zero denominator in map component")
        if len(self.components) != len(self.target_names):
            raise ValueError("one target name per component is required")

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.source_vars + self.parameters

    def apply(self, values: Mapping[str, object]) -> List:
        """Evaluate on exact numbers; raises PoleError on a vanishing denominator."""
        out = []
        for name, comp in zip(self.target_names, self.components):
            d = comp.den.evaluate(values)
            if d == 0:
                raise PoleError(f"denominator of {name} vanishes", coordinate=name)
            out.append(comp.num.evaluate(values) / d)
        return out

    def apply_germ(self, values: Mapping[str, UniRatFunc]) -> List[UniRatFunc]:
        """Evaluate on univariate rational functions with a single reduction
        per component."""
        pairs = {v: (f.num, f.den) for v, f in values.items()}
        one = UPoly.one(next(iter(values.values())).field)
        out = []
        for comp in self.components:
            clear = {}
            for v in self.vars:
                clear[v] = max(comp.num.degree(v), comp.den.degree(v), 0)
            n, dn = evaluate_fraction(comp.num, pairs, one, clear)
            d, dd = evaluate_fraction(comp.den, pairs, one, clear)
            # dn == dd because both use the same clearing degrees
            out.append(UniRatFunc(n, d))
        return out

    def partials(self) -> Tuple[Tuple[RationalFunction, ...], ...]:
        """``partials()[j][i]`` is d(component j)/d(source var i)."""
        cached = _PARTIALS.get(id(self))
        if cached is None or cached[0] is not self:
            rows = tuple(tuple(c.derivative(v) for v in self.source_vars) for c in self.components)
            cached = _PARTIALS[id(self)] = (self, rows)
        return cached[1]

    def apply_tangent(
        self, values: Mapping[str, UniRatFunc], tangents: Sequence[UniRatFunc]
    ) -> Tuple[List[UniRatFunc], List[UniRatFunc]]:
        """Image of a germ together with the image of a tangent vector
        (forward-mode derivative with respect to an outside parameter)."""
        image = self.apply_germ(values)
        out = []
        for row in self.partials():
            acc = None
            for rf, t in zip(row, tangents):
                if t.is_zero() or rf.num.is_zero():
                    continue
                term = rf_on_germs(rf, values) * t
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else UniRatFunc.const(tangents[0].field, 0))
        return image, out

    def compose_into(self, poly: MultiPoly) -> RationalFunction:
        """poly(map(x)) as an unreduced rational function in the source vars."""
        bindings = dict(zip(self.target_names, self.components))
        n, d = substitute(poly, bindings, self.vars)
        return RationalFunction(n, d)

    def to_text(self) -> str:
        lines = [
            f"map {self.name}",
            f"ambient {self.ambient}",
            "variables " + " ".join(self.source_vars),
            "parameters " + " ".join(self.parameters),
        ]
        for name, comp in zip(self.target_names, self.components):
            lines.append(f"{name}' = ({comp.num}) / ({comp.den})")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RationalMapDef":
        fields: Dict[str, str] = {}
        comps = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if "'" in line and "=" in line:
                lhs, rhs = line.split("=", 1)
                comps.append((lhs.strip().rstrip("'"), rhs.strip()))
            else:
                key, _, val = line.partition(" ")
                fields[key] = val.strip()
        src = tuple(fields.get("variables", "").split())
        params = tuple(fields.get("parameters", "").split())
        allv = src + params
        parsed = tuple(parse_rational(rhs, allv) for _, rhs in comps)
        return cls(
            name=fields.get("map", "map"),
            source_vars=src,
            parameters=params,
            target_names=tuple(n for n, _ in comps),
            components=parsed,
            ambient=fields.get("ambient", "P2xP2"),
        )


def _gens(variables=X_VARS):
    return MultiPoly.gens(variables)


def phi_map() -> RationalMapDef:
    x0, x1, x2, x3, h = _gens()
    one_m = 1 - x2
    comps = (
        RationalFunction(x2),
        RationalFunction(x3),
        RationalFunction((-x2 - x0) * one_m + h * x2, one_m),
        RationalFunction((-x1 - x3) * one_m ** 2 + 2 - x2 + h * x3, one_m ** 2),
    )
    return RationalMapDef("phi", X_VARS[:4], ("h",), X_VARS[:4], comps)


def phi_inverse_map() -> RationalMapDef:
    x0, x1, x2, x3, h = _gens()
    one_m = 1 - x0
    comps = (
        RationalFunction((-x2 - x0) * one_m + h * x0, one_m),
        RationalFunction((-x1 - x3) * one_m ** 2 + 2 - x0 + h * x1, one_m ** 2),
        RationalFunction(x0),
        RationalFunction(x1),
    )
    return RationalMapDef("phi_inverse", X_VARS[:4], ("h",), X_VARS[:4], comps)


def invariant_I1(variables=X_VARS) -> MultiPoly:
    x0, x1, x2, x3, h = (MultiPoly.var(variables, v) for v in X_VARS)
    return (
        -h * x0 ** 2 - h * x0 * x2 + h ** 2 * x0 * x2 + h * x0 ** 2 * x2
        - h * x2 ** 2 + h * x0 * x2 ** 2
    )


def invariant_I2(variables=X_VARS) -> MultiPoly:
    x0, x1, x2, x3, h = (MultiPoly.var(variables, v) for v in X_VARS)
    return (
        2 * h * x0 + x0 ** 2 - 2 * h * x0 * x1 + 2 * h * x2 + x0 * x2
        - h * x1 * x2 + h ** 2 * x1 * x2 + 2 * h * x0 * x1 * x2 + x2 ** 2
        + h * x1 * x2 ** 2 - h * x0 * x3 + h ** 2 * x0 * x3 + h * x0 ** 2 * x3
        - 2 * h * x2 * x3 + 2 * h * x0 * x2 * x3
    )


def _psi_parts():
    """I2 = A + x3 * B with A, B free of x3."""
    i2 = invariant_I2()
    parts = i2.collect(("x3",))
    a = parts.get((0,), MultiPoly((("x0", "x1", "x2", "h")), {}))
    b = parts.get((1,))
    return a.align(PSI_VARS), b.align(PSI_VARS)


def psi_map() -> RationalMapDef:
    """Dynamics on the level set I2 = c in coordinates (x0, x1, x2)."""
    x0, x1, x2, h, c = _gens(PSI_VARS)
    a, b = _psi_parts()
    comps = (
        RationalFunction(x2),
        RationalFunction(c - a, b),
        RationalFunction((-x2 - x0) * (1 - x2) + h * x2, 1 - x2),
    )
    return RationalMapDef("psi", PSI_VARS[:3], ("h", "c"), PSI_VARS[:3], comps, ambient="A3")


PHI = phi_map()
PHI_INV = phi_inverse_map()
PSI = psi_map()
I1 = invariant_I1()
I2 = invariant_I2()


def apply_phi(p: AffinePoint4) -> AffinePoint4:
    if p.coords[2] == 1:
        raise PoleError("phi has a pole at x2 = 1", coordinate="x2")
    return AffinePoint4(tuple(PHI.apply(p.as_dict())), p.h)


def apply_phi_inverse(p: AffinePoint4) -> AffinePoint4:
    if p.coords[0] == 1:
        raise PoleError("phi^-1 has a pole at x0 = 1", coordinate="x0")
    return AffinePoint4(tuple(PHI_INV.apply(p.as_dict())), p.h)


def eval_invariants(p: AffinePoint4) -> Tuple[Fraction, Fraction]:
    vals = p.as_dict()
    return I1.evaluate(vals), I2.evaluate(vals)


def check_invariant_identity(map_def: RationalMapDef, inv: MultiPoly) -> bool:
    """True iff inv(map(x)) - inv(x) vanishes identically (exact)."""
    inv = inv.align(map_def.vars)
    composed = map_def.compose_into(inv)
    return (composed.num - inv * composed.den).is_zero()


def check_inverse_identity(forward: RationalMapDef = PHI, backward: RationalMapDef = PHI_INV) -> bool:
    """True iff backward(forward(x)) == x as rational functions."""
    bindings = dict(zip(forward.target_names, forward.components))
    for name, comp in zip(backward.target_names, backward.components):
        clear = {v: max(comp.num.degree(v), comp.den.degree(v), 0) for v in comp.vars}
        n, _ = substitute(comp.num, bindings, forward.vars, clear)
        d, _ = substitute(comp.den, bindings, forward.vars, clear)
        x = MultiPoly.var(forward.vars, name)
        if not (n - x * d).is_zero():
            return False
    return True


def psi_denominator(x0, x2, h) -> Fraction:
    return h * (-x0 + h * x0 + x0 ** 2 - 2 * x2 + 2 * x0 * x2)


def apply_psi(p: Sequence, i2_value, h) -> Tuple[Fraction, Fraction, Fraction]:
    x0, x1, x2 = (Fraction(v) for v in p)
    h = Fraction(h)
    if x2 == 1:
        raise PoleError("psi has a pole at x2 = 1", coordinate="x2")
    if psi_denominator(x0, x2, h) == 0:
        raise PoleError(
            "psi is undefined where h*(-x0 + h*x0 + x0^2 - 2*x2 + 2*x0*x2) = 0 "
            "(x3 cannot be solved from I2)",
            coordinate="x1",
        )
    out = PSI.apply({"x0": x0, "x1": x1, "x2": x2, "h": h, "c": Fraction(i2_value)})
    return tuple(out)


def orbit(p: AffinePoint4, n: int) -> List[AffinePoint4]:
    """p, phi(p), ..., phi^n(p); a PoleError carries the failing step."""
    pts = [p]
    for k in range(1, n + 1):
        try:
            pts.append(apply_phi(pts[-1]))
        except PoleError as exc:
            exc.step = k
            raise
    return pts
