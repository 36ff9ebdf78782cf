"""Degree sequences of iterates, measured by restriction to random lines.

A map is iterated on the coordinates of a random affine line (one
parameter ``s``) with reduction after every step, so the degree of the
reduced rational functions in ``s`` equals the degree of the iterate
restricted to a generic line.  For phi the two P^2 factors are probed
separately, giving the bidegree of each factor's components.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .dynamics import PHI, PSI, RationalMapDef
from .exact import QQ, DegenerateSubstitutionError, UniRatFunc, UPoly, uni_gcd

log = logging.getLogger(__name__)

PHI_FACTORS = (("x0", "x1"), ("x2", "x3"))


class ResampleExhaustedError(RuntimeError):
    pass


class InsufficientDataError(ValueError):
    pass


def random_rational(rng: random.Random, height: int, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if q or not nonzero:
            return q


def component_degree(f: UniRatFunc) -> int:
    return max(f.num.degree(), f.den.degree())


def projective_degree(funcs: Sequence[UniRatFunc]) -> int:
    """Degree of s -> (f_1 : ... : f_k : 1) as a curve in P^k."""
    den = UPoly.one(QQ)
    for f in funcs:
        g = uni_gcd(den, f.den)
        den = den * f.den.exact_quo(g)
    deg = den.degree()
    for f in funcs:
        deg = max(deg, f.num.degree() + den.degree() - f.den.degree())
    return deg


def _line(variables, moving, rng, height):
    s = UniRatFunc.gen(QQ)
    vals = {}
    for v in variables:
        a = random_rational(rng, height)
        if v in moving:
            b = random_rational(rng, height, nonzero=True)
            vals[v] = s * b + a
        else:
            vals[v] = UniRatFunc.const(QQ, a)
    return vals


@dataclass
class LineTrace:
    """Per-step degrees along one line: ``component[n][i]`` is the degree of
    the i-th target component of map^n, ``projective[n][g]`` the degree of the
    g-th component group viewed as a curve in projective space."""

    component: List[Tuple[int, ...]]
    projective: List[Tuple[int, ...]]

    def grouped(self, groups: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
        return [tuple(max(row[i] for i in g) for g in groups) for row in self.component]


def iterate_on_line(
    map_def: RationalMapDef,
    start: Dict[str, UniRatFunc],
    params: Dict[str, Fraction],
    n_max: int,
    groups: Sequence[Sequence[str]],
) -> LineTrace:
    """Degrees of map^n restricted to the line, n = 0..n_max."""
    pvals = {k: UniRatFunc.const(QQ, v) for k, v in params.items()}
    cur = dict(start)
    comp, proj = [], []
    for n in range(n_max + 1):
        comp.append(tuple(component_degree(cur[v]) for v in map_def.target_names))
        proj.append(tuple(projective_degree([cur[v] for v in g]) for g in groups))
        if n == n_max:
            break
        img = map_def.apply_germ({**cur, **pvals})
        cur = dict(zip(map_def.target_names, img))
    return LineTrace(comp, proj)


@dataclass
class DegreeRun:
    """Consensus degrees over several trials.

    ``degrees`` uses the maximum over components of max(deg num, deg den);
    ``projective`` uses a common denominator per component group.
    """

    degrees: List[Tuple[int, ...]]
    projective: List[Tuple[int, ...]]
    per_trial: List[List[Tuple[int, ...]]] = field(default_factory=list)
    disagreements: List[int] = field(default_factory=list)


def _consensus(runs: List[List[Tuple[int, ...]]]) -> Tuple[List[Tuple[int, ...]], List[int]]:
    """Entrywise maximum (a degenerate line can only lower a degree), with
    the indices where trials disagree."""
    merged, bad = [], []
    for k in range(len(runs[0])):
        vals = [r[k] for r in runs]
        top = tuple(max(v[i] for v in vals) for i in range(len(vals[0])))
        if any(v != top for v in vals):
            bad.append(k)
            log.warning("degree trials disagree at n=%d: %s", k, vals)
        merged.append(top)
    return merged, bad


def _retrying(fn, retries):
    for attempt in range(retries):
        try:
            return fn()
        except DegenerateSubstitutionError:
            log.info("line hit the indeterminacy locus, resampling (attempt %d)", attempt)
    raise ResampleExhaustedError(f"no usable line after {retries} attempts")


def phi_bidegrees(
    n_max: int,
    h: Fraction,
    trials: int = 3,
    seed: int = 0,
    height: int = 97,
    retries: int = 20,
) -> DegreeRun:
    """Bidegrees of phi^n for n = 0..n_max.

    Entry n is ``(a_n, b_n, c_n, d_n)``: the (x0,x1)-components of phi^n have
    bidegree (a_n, b_n) and the (x2,x3)-components have bidegree (c_n, d_n).
    Bidegree (a, b) means degree a along a line in the first factor and b
    along a line in the second.
    """
    rng = random.Random(seed)
    groups = ((0, 1), (2, 3))
    runs, pruns = [], []
    for _ in range(trials):
        def one():
            s_line = _line(PHI.source_vars, PHI_FACTORS[0], rng, height)
            t_line = _line(PHI.source_vars, PHI_FACTORS[1], rng, height)
            return (
                iterate_on_line(PHI, s_line, {"h": h}, n_max, PHI_FACTORS),
                iterate_on_line(PHI, t_line, {"h": h}, n_max, PHI_FACTORS),
            )
        ts, tt = _retrying(one, retries)
        gs, gt = ts.grouped(groups), tt.grouped(groups)
        runs.append([(a[0], b[0], a[1], b[1]) for a, b in zip(gs, gt)])
        pruns.append([(a[0], b[0], a[1], b[1]) for a, b in zip(ts.projective, tt.projective)])
    merged, bad = _consensus(runs)
    pmerged, _ = _consensus(pruns)
    return DegreeRun(merged, pmerged, runs, bad)


def degree_sequence(
    map_def: RationalMapDef,
    n_max: int,
    trials: int = 3,
    params: Dict[str, Fraction] | None = None,
    groups: Sequence[Sequence[str]] | None = None,
    seed: int = 0,
    height: int = 97,
    retries: int = 20,
) -> DegreeRun:
    """Degrees of map^n along a random line through all source variables,
    one entry per group of target components (default: one group)."""
    params = params or {}
    groups = groups or (map_def.target_names,)
    idx = [tuple(map_def.target_names.index(v) for v in g) for g in groups]
    rng = random.Random(seed)
    runs, pruns = [], []
    for _ in range(trials):
        def one():
            line = _line(map_def.source_vars, map_def.source_vars, rng, height)
            return iterate_on_line(map_def, line, params, n_max, groups)
        tr = _retrying(one, retries)
        runs.append(tr.grouped(idx))
        pruns.append(tr.projective)
    merged, bad = _consensus(runs)
    pmerged, _ = _consensus(pruns)
    return DegreeRun(merged, pmerged, runs, bad)


def psi_run(
    i2_value: Fraction, h: Fraction, n_max: int, trials: int = 3, seed: int = 0, height: int = 97
) -> DegreeRun:
    params = {"h": Fraction(h), "c": Fraction(i2_value)}
    return degree_sequence(PSI, n_max, trials, params, seed=seed, height=height)


def psi_degree_sequence(
    i2_value: Fraction, h: Fraction, n_max: int, trials: int = 3, seed: int = 0, height: int = 97
) -> List[int]:
    """Degrees of psi^n in (x0, x1, x2) on the level set I2 = i2_value."""
    return [d[0] for d in psi_run(i2_value, h, n_max, trials, seed, height).degrees]


# ---------------------------------------------------------------------------
# growth fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticFit:
    eventually_quadratic: bool
    leading_coefficient: Fraction | None
    onset: int | None
    period: int | None = None


def differences(seq: Sequence[int], order: int = 1, lag: int = 1) -> List[int]:
    out = list(seq)
    for _ in range(order):
        out = [out[i + lag] - out[i] for i in range(len(out) - lag)]
    return out


def quadratic_fit(seq: Sequence[int]) -> QuadraticFit:
    """Strict test: third differences vanish from some index on while the
    second differences are a positive constant."""
    if len(seq) < 6:
        raise InsufficientDataError("need at least 6 terms")
    d2 = differences(seq, 2)
    d3 = differences(seq, 3)
    # the tail must contain at least two vanishing third differences
    onset = None
    for k in range(len(d3) - 1):
        if all(x == 0 for x in d3[k:]):
            onset = k
            break
    if onset is None or d2[-1] <= 0:
        return QuadraticFit(False, None, None)
    return QuadraticFit(True, Fraction(d2[-1], 2), onset, 1)


def quasi_quadratic_fit(seq: Sequence[int], max_period: int = 4) -> QuadraticFit:
    """Quadratic growth up to a periodic correction: for the smallest period
    p, the lag-p second differences become constant and positive.  The
    leading coefficient is that constant / (2 p^2)."""
    if len(seq) < 6:
        raise InsufficientDataError("need at least 6 terms")
    for p in range(1, max_period + 1):
        d2 = differences(seq, 2, lag=p)
        if len(d2) < 3:
            break
        d3 = [d2[i + 1] - d2[i] for i in range(len(d2) - 1)]
        for k in range(len(d3) - 1):
            if all(x == 0 for x in d3[k:]):
                if d2[-1] > 0:
                    return QuadraticFit(True, Fraction(d2[-1], 2 * p * p), k, p)
                break
    return QuadraticFit(False, None, None)
