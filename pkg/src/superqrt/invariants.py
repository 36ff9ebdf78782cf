"""Recovering conserved quantities from a divisor class.

A polynomial of bidegree (2, 2) with unknown coefficients is required to
vanish to prescribed orders along every exceptional divisor.  Each order
condition is linear in the unknowns; the kernel of the resulting system is
the linear system of hypersurfaces in the class, to be compared with
span{1, I1, I2}.

Rows are exact over Q[h]: the ansatz monomials are pulled to the
exceptional chart symbolically, and the coefficient of every
e^k * (transverse monomial) with k below the required order gives one row.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .divisor import N_BLOWUPS, DivisorClass, format_class
from .dynamics import I1, I2, PHI, check_invariant_identity
from .exact import QQ, FunctionField, FunctionFieldElement, MultiPoly, UniRatFunc, UPoly, divide_exact, rf_on_germs
from .tower import (
    BASE_VARS,
    PARAM,
    Tower,
    _common_denominator,
    chart_germ,
    default_tower,
    descend,
    pull_to_chart,
    trivialization,
)

log = logging.getLogger(__name__)

HF = FunctionField(PARAM)
ALL_VARS = BASE_VARS + (PARAM,)
DEFAULT_H_SAMPLES = (Fraction(17, 29), Fraction(-23, 41), Fraction(37, 13))


class InconclusiveSystemError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# ansatz and constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ansatz:
    """Monomials x0^i0 x1^i1 x2^i2 x3^i3 read as sections of ``bidegree``."""

    exponents: Tuple[Tuple[int, int, int, int], ...]
    bidegree: Tuple[int, int] = (2, 2)
    label: str = "bidegree"

    @classmethod
    def of_bidegree(cls, a: int = 2, b: int = 2) -> "Ansatz":
        exps = tuple(
            (i0, i1, i2, i3)
            for i0 in range(a + 1)
            for i1 in range(a + 1 - i0)
            for i2 in range(b + 1)
            for i3 in range(b + 1 - i2)
        )
        return cls(exps, (a, b), "bidegree")

    @classmethod
    def total_degree(cls, d: int = 2, bidegree: Tuple[int, int] = (2, 2)) -> "Ansatz":
        """Monomials with i0+i1+i2+i3 <= d, still read as (2, 2) sections."""
        exps = tuple(e for e in cls.of_bidegree(*bidegree).exponents if sum(e) <= d)
        return cls(exps, bidegree, "total-degree")

    def __len__(self):
        return len(self.exponents)

    def monomials(self) -> List[MultiPoly]:
        return [MultiPoly(ALL_VARS, {e + (0,): 1}) for e in self.exponents]

    def names(self) -> List[str]:
        return ["a" + "".join(map(str, e)) for e in self.exponents]

    def vector_of(self, p: MultiPoly) -> List[FunctionFieldElement]:
        """Coefficients of p (in x0..x3 with h-dependent coefficients) on
        the ansatz monomials; raises if p is not in the span."""
        p = p.align(ALL_VARS)
        hi = ALL_VARS.index(PARAM)
        coeffs: Dict[Tuple[int, ...], Dict[int, Fraction]] = {}
        for e, c in p.terms.items():
            key = tuple(x for k, x in enumerate(e) if k != hi)
            coeffs.setdefault(key, {})[e[hi]] = c
        idx = {e: k for k, e in enumerate(self.exponents)}
        out = [HF.zero] * len(self)
        for key, hp in coeffs.items():
            if key not in idx:
                raise ValueError(f"monomial {key} is outside the ansatz")
            n = max(hp) + 1
            out[idx[key]] = HF.from_poly([hp.get(k, 0) for k in range(n)])
        return out

    def polynomial(self, vec: Sequence) -> MultiPoly:
        """Polynomial in x0..x3, h from a coefficient vector whose entries
        are rationals or polynomials in h (UPoly or function field
        elements with trivial denominator)."""
        out = MultiPoly(ALL_VARS, {})
        h = MultiPoly.var(ALL_VARS, PARAM)
        for e, c in zip(self.exponents, vec):
            if isinstance(c, FunctionFieldElement):
                if c.den.degree() > 0:
                    raise ValueError("coefficient is not polynomial in h; clear denominators first")
                c = c.num.scale(1 / c.den.lc()) if c.den.lc() != 1 else c.num
            if isinstance(c, UPoly):
                hc = MultiPoly(ALL_VARS, {})
                for k, a in enumerate(c.coeffs):
                    if a:
                        hc = hc + h ** k * a
            else:
                hc = MultiPoly.const(ALL_VARS, c)
            if hc:
                out = out + hc * MultiPoly(ALL_VARS, {e + (0,): 1})
        return out


@dataclass(frozen=True)
class ClassConstraint:
    """Vanishing orders m_1..m_17 along the prime exceptional divisors for
    sections of ``bidegree`` whose proper transform has class ``target``."""

    target: DivisorClass
    bidegree: Tuple[int, int]
    multiplicities: Tuple[int, ...]

    @classmethod
    def from_class(cls, target: DivisorClass, tower: Tower | None = None) -> "ClassConstraint":
        """Invert class = aHa + bHb - sum_k m_k [E_k'].  Each prime class is
        E_k minus later E_j, so m_l = n_l + sum_{k<l} m_k * (-[E_k'])_l."""
        tower = tower or default_tower()
        n = [-c for c in target.e_part]
        primes = [tower.prime_class(k) for k in range(1, N_BLOWUPS + 1)]
        m = []
        for l in range(N_BLOWUPS):
            v = n[l] - sum(m[k] * primes[k].e_part[l] for k in range(l))
            m.append(v)
        if any(v < 0 for v in m):
            raise ValueError(f"class {format_class(target)} needs negative multiplicities {m}")
        return cls(target, target.h_part, tuple(m))

    @classmethod
    def from_multiplicities(cls, mults: Sequence[int], bidegree=(2, 2), tower: Tower | None = None) -> "ClassConstraint":
        from .tower import class_from_multiplicities

        mults = tuple(int(x) for x in mults)
        if len(mults) != N_BLOWUPS or any(x < 0 for x in mults):
            raise ValueError("need 17 non-negative multiplicities")
        return cls(class_from_multiplicities(bidegree, mults, tower), tuple(bidegree), mults)

    def raised(self, k: int = 1) -> "ClassConstraint":
        return ClassConstraint.from_multiplicities([m + k for m in self.multiplicities], self.bidegree)


# ---------------------------------------------------------------------------
# the linear system
# ---------------------------------------------------------------------------


@dataclass
class LinearSystem:
    """Rows over Q[h] (entries UPoly in h) in the ansatz unknowns.
    ``origin[r] = (i, k, transverse exponent)`` for symbolic rows."""

    ansatz: Ansatz
    constraint: ClassConstraint
    rows: List[List[UPoly]]
    origin: List[Tuple] = field(default_factory=list)

    def at(self, h: Fraction) -> List[List[Fraction]]:
        return [[c(h) for c in r] for r in self.rows]


def _upoly(hp: Dict[int, Fraction]) -> UPoly:
    n = max(hp) + 1 if hp else 0
    return UPoly(QQ, [hp.get(k, 0) for k in range(n)])


def _rows_for_divisor(ansatz: Ansatz, i: int, m: int, tower: Tower):
    chart = tower.blowup_chart(i)
    rfs = [pull_to_chart(mon, chart.name, tower, ansatz.bidegree) for mon in ansatz.monomials()]
    den = _common_denominator([r.den for r in rfs])
    var = chart.exceptional
    v = den.min_degree(var)
    bound = m + v
    hi = rfs[0].num.vars.index(PARAM)
    ei = rfs[0].num.vars.index(var)
    table: Dict[Tuple, Dict[int, Dict[int, Fraction]]] = {}
    for col, r in enumerate(rfs):
        num = divide_exact(r.num * den, r.den)
        if num is None:
            raise ArithmeticError("common denominator does not clear a monomial")
        for e, c in num.terms.items():
            if e[ei] >= bound:
                continue
            key = (e[ei],) + tuple(x for k, x in enumerate(e) if k not in (ei, hi))
            cell = table.setdefault(key, {}).setdefault(col, {})
            cell[e[hi]] = cell.get(e[hi], 0) + c
    rows, origin = [], []
    zero = UPoly.zero(QQ)
    for key in sorted(table):
        row = [zero] * len(ansatz)
        for col, hp in table[key].items():
            row[col] = _upoly(hp)
        if any(not x.is_zero() for x in row):
            rows.append(row)
            origin.append((i, key[0], key[1:]))
    return rows, origin


def vanishing_system(constraint: ClassConstraint, ansatz: Ansatz | None = None, tower: Tower | None = None) -> LinearSystem:
    """Exact rows imposing order >= m_i along every E_i'."""
    ansatz = ansatz or Ansatz.of_bidegree(*constraint.bidegree)
    tower = tower or default_tower()
    rows, origin = [], []
    for i, m in enumerate(constraint.multiplicities, 1):
        if m <= 0:
            continue
        r, o = _rows_for_divisor(ansatz, i, m, tower)
        rows += r
        origin += o
    return LinearSystem(ansatz, constraint, rows, origin)


def _series(f: UniRatFunc, upto: int) -> List[Fraction]:
    """Coefficients of e^0 .. e^(upto-1) of a germ regular at e = 0."""
    if f.is_zero():
        return [Fraction(0)] * upto
    num, den = list(f.num.coeffs), list(f.den.coeffs)
    u = next(k for k, c in enumerate(num) if c)
    w = next(k for k, c in enumerate(den) if c)
    if u < w:
        raise ValueError("germ has a pole")
    num, den = num[u:], den[w:]
    shift = u - w
    out = [Fraction(0)] * upto
    q = []
    rem = num + [Fraction(0)] * upto
    for k in range(max(0, upto - shift)):
        c = rem[k] / den[0] if k < len(rem) else Fraction(0)
        q.append(c)
        for j, d in enumerate(den):
            if k + j < len(rem):
                rem[k + j] -= c * d
    for k, c in enumerate(q):
        out[k + shift] = c
    return out


def sampled_system(
    constraint: ClassConstraint,
    h: Fraction,
    ansatz: Ansatz | None = None,
    tower: Tower | None = None,
    seed: int = 0,
    margin: int = 6,
) -> List[List[Fraction]]:
    """Rows over Q at a fixed h from random germs on each E_i'; every
    sample gives one row per order k < m_i."""
    ansatz = ansatz or Ansatz.of_bidegree(*constraint.bidegree)
    tower = tower or default_tower()
    rng = random.Random(seed)
    rows = []
    for i, m in enumerate(constraint.multiplicities, 1):
        if m <= 0:
            continue
        chart = tower.blowup_chart(i)
        triv = trivialization(tower.chain(chart.name)[0], ansatz.bidegree)
        wanted, tries = len(ansatz) + margin, 0
        got = 0
        while got < wanted:
            tries += 1
            if tries > 4 * wanted:
                raise InconclusiveSystemError(f"germs on E{i} keep degenerating")
            vals = chart_germ(chart, chart.exceptional, rng)
            vals[PARAM] = UniRatFunc.const(QQ, h)
            try:
                base = descend(tower, chart.name, vals)
                t = rf_on_germs(triv, base)
            except ZeroDivisionError:
                continue
            x = [base[v] for v in BASE_VARS]
            cols = []
            for e in ansatz.exponents:
                g = t
                for xv, k in zip(x, e):
                    if k:
                        g = g * xv ** k
                cols.append(_series(g, m))
            for k in range(m):
                rows.append([c[k] for c in cols])
            got += 1
    return rows


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def _select_rows(rows: List[List[Fraction]]) -> Tuple[List[int], List[int]]:
    """Greedy independent rows at a specialization; the returned row order
    and pivot columns give nonzero leading minors."""
    basis: List[Tuple[int, List[Fraction]]] = []
    chosen, pivots = [], []
    ncols = len(rows[0]) if rows else 0
    for r, row in enumerate(rows):
        v = list(row)
        for p, b in basis:
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, b)]
        p = next((c for c in range(ncols) if v[c]), None)
        if p is None:
            continue
        inv = 1 / v[p]
        v = [x * inv for x in v]
        basis = [(q, [x - b[p] * y for x, y in zip(b, v)] if b[p] else b) for q, b in basis]
        basis.append((p, v))
        chosen.append(r)
        pivots.append(p)
        if len(chosen) == ncols:
            break
    return chosen, pivots


def _fraction_free_kernel(rows: List[List[UPoly]], pivots: List[int], ncols: int):
    """Kernel over Q(h) of rows whose leading minors on ``pivots`` are
    nonzero, by fraction-free Gauss-Jordan over Q[h]."""
    m = [list(r) for r in rows]
    prev = UPoly.one(QQ)
    for k, pk in enumerate(pivots):
        piv = m[k][pk]
        for i in range(len(m)):
            if i == k:
                continue
            a = m[i][pk]
            if a.is_zero():
                m[i] = [(piv * x).exact_quo(prev) for x in m[i]]
            else:
                m[i] = [(piv * x - a * y).exact_quo(prev) for x, y in zip(m[i], m[k])]
        prev = piv
    det = prev
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [HF.zero] * ncols
        v[f] = HF.one
        for i, p in enumerate(pivots):
            if not m[i][f].is_zero():
                v[p] = -FunctionFieldElement(HF, m[i][f], det)
        basis.append(v)
    return basis


def _annihilates(rows: List[List[UPoly]], vec: List[FunctionFieldElement]) -> bool:
    den = UPoly.one(QQ)
    for c in vec:
        den = den * c.den.exact_quo(_gcd(den, c.den))
    w = [c.num * den.exact_quo(c.den) for c in vec]
    for r in rows:
        acc = UPoly.zero(QQ)
        for a, b in zip(r, w):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        if not acc.is_zero():
            return False
    return True


def _gcd(a: UPoly, b: UPoly) -> UPoly:
    from .exact import uni_gcd

    return uni_gcd(a, b)


def clear_denominators(vec: Sequence[FunctionFieldElement]) -> List[UPoly]:
    """Scale a Q(h) vector to a primitive vector over Q[h] with a monic
    leading nonzero entry."""
    den = UPoly.one(QQ)
    for c in vec:
        den = den * c.den.exact_quo(_gcd(den, c.den))
    w = [c.num * den.exact_quo(c.den) for c in vec]
    g = UPoly.zero(QQ)
    for x in w:
        if not x.is_zero():
            g = x.monic() if g.is_zero() else _gcd(g, x)
    if not g.is_zero() and g.degree() > 0:
        w = [x.exact_quo(g) for x in w]
    lead = next((x for x in w if not x.is_zero()), None)
    if lead is not None:
        s = 1 / lead.lc()
        w = [x.scale(s) for x in w]
    return w


@dataclass
class Kernel:
    ansatz: Ansatz
    basis: List[List[FunctionFieldElement]]
    rank: int
    h_sample: Fraction
    rows_total: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def polynomials(self) -> List[MultiPoly]:
        return [self.ansatz.polynomial(clear_denominators(v)) for v in self.basis]


def solve_kernel(system: LinearSystem, h_samples: Sequence[Fraction] = DEFAULT_H_SAMPLES) -> Kernel:
    """Exact kernel over Q(h).

    Independent rows and pivots are chosen at a rational h; the kernel of
    those rows is computed over Q[h] and then checked against every row,
    so an unlucky h only costs a retry."""
    n = len(system.ansatz)
    if not system.rows:
        basis = [[HF.one if j == k else HF.zero for j in range(n)] for k in range(n)]
        return Kernel(system.ansatz, basis, 0, Fraction(0), 0)
    for h0 in h_samples:
        chosen, pivots = _select_rows(system.at(h0))
        sub = [system.rows[r] for r in chosen]
        basis = _fraction_free_kernel(sub, pivots, n)
        if all(_annihilates(system.rows, v) for v in basis):
            return Kernel(system.ansatz, basis, len(pivots), h0, len(system.rows))
        log.info("h = %s was special for this system, retrying", h0)
    raise InconclusiveSystemError("no specialization of h gave a consistent kernel")


def kernel_dimension_at(rows: List[List[Fraction]], ncols: int) -> int:
    return ncols - len(_select_rows(rows)[1])


# ---------------------------------------------------------------------------
# matching against known invariants
# ---------------------------------------------------------------------------


def _rref_field(mat: List[List], one, zero) -> Tuple[List[List], List[int]]:
    m = [list(r) for r in mat]
    pivots, r = [], 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def reference_vectors(ansatz: Ansatz, names: Sequence[str] = ("1", "I1", "I2")) -> Dict[str, List[FunctionFieldElement]]:
    polys = {"1": MultiPoly.const(ALL_VARS, 1), "I1": I1.align(ALL_VARS), "I2": I2.align(ALL_VARS)}
    return {n: ansatz.vector_of(polys[n]) for n in names}


@dataclass
class MatchReport:
    matched: bool
    dimension: int
    expected_dimension: int
    references: Tuple[str, ...]
    # coefficients[j][k]: kernel vector j = sum_k c_jk * reference k
    coefficients: List[List[FunctionFieldElement]] | None
    message: str = ""

    def to_json(self) -> dict:
        return {
            "matched": self.matched,
            "dimension": self.dimension,
            "expected_dimension": self.expected_dimension,
            "references": list(self.references),
            "coefficients": None
            if self.coefficients is None
            else [[str(c) for c in row] for row in self.coefficients],
            "message": self.message,
        }


def match_invariants(kernel: Kernel, references: Sequence[str] = ("1", "I1", "I2")) -> MatchReport:
    """Decide whether the kernel spans exactly span(references) over Q(h)
    and, if so, express each kernel vector in the references."""
    refs = reference_vectors(kernel.ansatz, references)
    rvecs = [refs[n] for n in references]
    one, zero = HF.one, HF.zero
    _, rp = _rref_field(rvecs, one, zero)
    if len(rp) != len(rvecs):
        raise ValueError("reference polynomials are dependent")
    dim = kernel.dimension
    if dim != len(rvecs):
        return MatchReport(False, dim, len(rvecs), tuple(references), None,
                           f"kernel dimension {dim}, expected {len(rvecs)}")
    _, jp = _rref_field(rvecs + kernel.basis, one, zero)
    if len(jp) != len(rvecs):
        return MatchReport(False, dim, len(rvecs), tuple(references), None, "spans differ")
    # solve R^T c = k for each kernel vector k
    coeffs = []
    ncols = len(kernel.ansatz)
    for k in kernel.basis:
        aug = [[rvecs[j][c] for j in range(len(rvecs))] + [k[c]] for c in range(ncols)]
        red, piv = _rref_field(aug, one, zero)
        if len(rvecs) in piv:
            return MatchReport(False, dim, len(rvecs), tuple(references), None, "inconsistent coordinates")
        coeffs.append([red[i][-1] for i in range(len(rvecs))])
    return MatchReport(True, dim, len(rvecs), tuple(references), coeffs, "span matches")


def kernel_is_invariant(kernel: Kernel, map_def=PHI) -> bool:
    """Every kernel polynomial K satisfies K o phi = K."""
    return all(check_invariant_identity(map_def, p) for p in kernel.polynomials())


# ---------------------------------------------------------------------------
# one-call drivers
# ---------------------------------------------------------------------------


def find_invariants(target: DivisorClass, references: Sequence[str], ansatz: Ansatz | None = None, tower: Tower | None = None):
    """Constraint, kernel and match report for a target class."""
    constraint = ClassConstraint.from_class(target, tower)
    system = vanishing_system(constraint, ansatz, tower)
    kernel = solve_kernel(system)
    report = match_invariants(kernel, references) if kernel.dimension == len(references) else MatchReport(
        False, kernel.dimension, len(references), tuple(references), None,
        f"kernel dimension {kernel.dimension}, expected {len(references)}",
    )
    return constraint, system, kernel, report


def literal_reading_audit(target: DivisorClass, tower: Tower | None = None) -> Dict[str, object]:
    """Kernel when the ansatz is cut to total degree <= 2."""
    ansatz = Ansatz.total_degree(2)
    constraint = ClassConstraint.from_class(target, tower)
    kernel = solve_kernel(vanishing_system(constraint, ansatz, tower))
    return {
        "ansatz": ansatz.label,
        "monomials": len(ansatz),
        "kernel_dimension": kernel.dimension,
        "kernel": [str(p) for p in kernel.polynomials()],
    }
