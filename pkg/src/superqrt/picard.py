"""The 19x19 pull-back action on the Picard lattice and its growth data.

Matrix convention: the column of basis element B holds the coefficients of
phi^*(B), so ``(phi^n)^* = M^n`` and the degrees of phi^n are read off the
Ha and Hb columns of M^n.

All eigenstructure is exact: the characteristic polynomial is factored into
powers of t and cyclotomic polynomials, and Jordan block sizes come from
ranks of p(M)^k for each irreducible factor p.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .divisor import BASIS, N_BLOWUPS, RANK, DivisorClass, parse_class

log = logging.getLogger(__name__)

Matrix = List[List[Fraction]]

# Tabulated pull-back rows (images of each basis element).
TABULATED_ROWS: Dict[str, str] = {
    "Ha": "Hb",
    "Hb": "Ha+3Hb-2E1-3E11-E{6,7,9,10,12,13,14}",
    "E1": "Hb-E{1,10,11}",
    "E2": "Hb-E{1,9,11}",
    "E3": "Hb-E{1,7,9,11}+E8",
    "E4": "Hb-E{1,7,11}",
    "E5": "Hb-E{1,6,11}",
    "E6": "E14",
    "E7": "E14",
    "E8": "E15",
    "E9": "E16",
    "E10": "E17",
    "E11": "E{1,11}-E14",
    "E12": "Hb-E{1,11,13}",
    "E13": "Hb-E{1,11,12}",
    "E14": "E2",
    "E15": "E3",
    "E16": "E4",
    "E17": "E5",
}

I1_CLASS = parse_class("2Ha+2Hb-2E1-2E6-4E11-E{2,4,7,9,12,13,14,16}")
I2_CLASS = parse_class("2Ha+2Hb-3E11-E{1,2,4,5,6,7,9,10,12,13,14,16,17}")

# Reference Jordan multiset, as (eigenvalue label, block size) pairs: each
# cube root of unity (1 included) with three 1x1 blocks, plus 1, -1, J3(1)
# and a nilpotent 5x5 block.
REFERENCE_JORDAN = sorted(
    [("1", 1)] * 4 + [("1", 3), ("-1", 1), ("w", 1), ("w", 1), ("w", 1), ("w^2", 1), ("w^2", 1), ("w^2", 1), ("0", 5)]
)


class ConsistencyError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# exact dense linear algebra
# ---------------------------------------------------------------------------


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt] for row in a]


def mat_vec(a: Matrix, v: Sequence) -> List[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def mat_add(a: Matrix, b: Matrix, scale=1) -> Matrix:
    return [[x + scale * y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_pow(a: Matrix, k: int) -> Matrix:
    out = identity(len(a))
    base = a
    while k:
        if k & 1:
            out = mat_mul(out, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return out


def rref(a: Matrix) -> Tuple[Matrix, List[int]]:
    m = [list(map(Fraction, r)) for r in a]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
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


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def kernel(a: Matrix) -> List[List[Fraction]]:
    """Basis of {v : a v = 0}, one vector per free column."""
    m, pivots = rref(a)
    n = len(a[0])
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[f]
        out.append(v)
    return out


def charpoly(a: Matrix) -> List[Fraction]:
    """Coefficients (low to high) of det(t I - a), Faddeev-LeVerrier."""
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    ident = identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = mat_add(mat_mul(a, mk), ident, c)
        amk = mat_mul(a, mk)
        c = -sum(amk[i][i] for i in range(n)) / k
        coeffs[n - k] = c
    return coeffs


# -- integer polynomials (low to high lists) --------------------------------


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_divmod(p, q):
    p = [Fraction(x) for x in p]
    q = _trim(q)
    out = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    while len(_trim(p)) >= len(q):
        p = _trim(p)
        k = len(p) - len(q)
        c = p[-1] / q[-1]
        out[k] = c
        for j, b in enumerate(q):
            p[k + j] -= c * b
        p = _trim(p)
    return _trim(out), _trim(p)


def cyclotomic(n: int) -> List[int]:
    """Phi_n with integer coefficients."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = poly_divmod(p, cyclotomic(d))
            assert not r
    return [int(x) for x in p]


def _euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if _gcd(k, n) == 1)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def factor_charpoly(p: Sequence) -> Tuple[List[Tuple[str, List[int], int]], List[Fraction]]:
    """Split off t^k and cyclotomic factors.

    Returns ``([(label, factor, multiplicity)], residual)``; the residual is
    monic with no root at 0 and no root of unity.
    """
    p = _trim([Fraction(x) for x in p])
    out = []
    k = 0
    while p and p[0] == 0:
        p = p[1:]
        k += 1
    if k:
        out.append(("t", [0, 1], k))
    deg = len(p) - 1
    n = 1
    # Phi_n has degree phi(n) >= sqrt(n/2), so n <= 2 deg^2 suffices
    while deg > 0 and n <= 2 * deg * deg + 2:
        if _euler_phi(n) <= deg:
            phi = cyclotomic(n)
            m = 0
            while True:
                q, r = poly_divmod(p, phi)
                if r:
                    break
                p = q
                m += 1
            if m:
                out.append((f"Phi{n}", phi, m))
                deg = len(p) - 1
        n += 1
    return out, p


def poly_at_matrix(p: Sequence, a: Matrix) -> Matrix:
    n = len(a)
    out = [[Fraction(0)] * n for _ in range(n)]
    for c in reversed(list(p)):
        out = mat_add(mat_mul(out, a), identity(n), c)
    return out


def jordan_sizes(a: Matrix, p: Sequence, multiplicity: int) -> List[int]:
    """Block sizes for the roots of the irreducible factor p (each root of p
    carries the same list)."""
    d = len(p) - 1
    pm = poly_at_matrix(p, a)
    n = len(a)
    ranks = [n]
    power = identity(n)
    while True:
        power = mat_mul(power, pm)
        ranks.append(rank(power))
        if ranks[-1] == ranks[-2] or n - ranks[-1] == d * multiplicity:
            if ranks[-1] != ranks[-2]:
                ranks.append(ranks[-1])
            break
    at_least = [(ranks[k - 1] - ranks[k]) // d for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least)):
        exactly = at_least[k] - (at_least[k + 1] if k + 1 < len(at_least) else 0)
        sizes += [k + 1] * exactly
    return sorted(sizes, reverse=True)


# ---------------------------------------------------------------------------
# action matrix
# ---------------------------------------------------------------------------


@dataclass
class ActionMatrix:
    """Images of the basis under phi^* with per-element provenance
    (``computed``, ``tabulated`` or ``both-agree``)."""

    images: Dict[str, DivisorClass]
    provenance: Dict[str, str]
    details: Dict[str, dict] = field(default_factory=dict)

    @property
    def matrix(self) -> Matrix:
        cols = [self.images[b] for b in BASIS]
        return [[Fraction(cols[c][r]) for c in range(RANK)] for r in range(RANK)]

    def to_json(self) -> dict:
        return {
            "basis": list(BASIS),
            "convention": "column B holds the coefficients of the pull-back of B",
            "matrix": [[int(x) for x in row] for row in self.matrix],
            "images": {b: str(self.images[b]) for b in BASIS},
            "provenance": dict(self.provenance),
        }


def tabulated_images() -> Dict[str, DivisorClass]:
    return {b: parse_class(t) for b, t in TABULATED_ROWS.items()}


def compute_images(tower=None, seed: int = 0) -> Tuple[Dict[str, DivisorClass], Dict[str, dict]]:
    from .tower import default_tower, generic_form, pullback_class_hypersurface, pullback_exceptional

    tower = tower or default_tower()
    images, details = {}, {}
    for name, bideg in (("Ha", (1, 0)), ("Hb", (0, 1))):
        images[name] = pullback_class_hypersurface(generic_form(bideg, seed), bideg, tower)
    for k in range(1, N_BLOWUPS + 1):
        r = pullback_exceptional(k, tower, seed=seed)
        images[f"E{k}"] = r.divisor_class
        details[f"E{k}"] = {"decomposition": r.decomposition, "disagreements": r.disagreements}
    return images, details


def build_action_matrix(compute: bool = True, tower=None, seed: int = 0, strict: bool = True) -> ActionMatrix:
    """Assemble M; with ``compute`` every image is derived from the tower
    and compared with the tabulated one."""
    table = tabulated_images()
    if not compute:
        return ActionMatrix(table, {b: "tabulated" for b in BASIS})
    computed, details = compute_images(tower, seed)
    images, prov = {}, {}
    for b in BASIS:
        c = computed.get(b)
        if c is None:
            images[b], prov[b] = table[b], "tabulated"
        elif c == table[b]:
            images[b], prov[b] = c, "both-agree"
        else:
            msg = f"pull-back of {b}: computed {c}, tabulated {table[b]}"
            if strict:
                raise ConsistencyError(msg)
            log.error(msg)
            images[b], prov[b] = c, "computed"
    return ActionMatrix(images, prov, details)


# ---------------------------------------------------------------------------
# growth
# ---------------------------------------------------------------------------


@dataclass
class GrowthReport:
    charpoly: List[int]
    factors: List[Tuple[str, List[int], int]]
    residual: List[int]
    jordan: Dict[str, List[int]]
    spectral_radius_one: bool
    max_unit_block: int
    growth: str

    def jordan_multiset(self) -> List[Tuple[str, int]]:
        """Blocks over C: one entry per root of each factor."""
        labels = {"t": ["0"], "Phi1": ["1"], "Phi2": ["-1"], "Phi3": ["w", "w^2"]}
        out = []
        for label, sizes in self.jordan.items():
            roots = labels.get(label, [f"root{j} of {label}" for j in range(self._deg(label))])
            for r in roots:
                out += [(r, s) for s in sizes]
        return sorted(out)

    def _deg(self, label):
        for lab, p, _ in self.factors:
            if lab == label:
                return len(p) - 1
        return 1

    def total_block_size(self) -> int:
        return sum(s for _, s in self.jordan_multiset())

    def to_json(self) -> dict:
        return {
            "charpoly": self.charpoly,
            "factors": [{"factor": lab, "coefficients": p, "multiplicity": m} for lab, p, m in self.factors],
            "residual": self.residual,
            "jordan_blocks": self.jordan,
            "jordan_multiset": [[r, s] for r, s in self.jordan_multiset()],
            "spectral_radius_one": self.spectral_radius_one,
            "max_unit_circle_block": self.max_unit_block,
            "growth": self.growth,
        }


def growth_class(m) -> GrowthReport:
    a = m.matrix if isinstance(m, ActionMatrix) else [list(map(Fraction, r)) for r in m]
    cp = charpoly(a)
    factors, residual = factor_charpoly(cp)
    jordan = {}
    max_unit = 0
    for label, p, mult in factors:
        sizes = jordan_sizes(a, p, mult)
        jordan[label] = sizes
        if label != "t":
            max_unit = max(max_unit, max(sizes))
    # Kronecker: a monic integer factor with nonzero constant term and no
    # cyclotomic part has a root outside the unit circle
    res_int = [int(x) for x in residual]
    radius_one = len(res_int) <= 1 and max_unit > 0
    if len(res_int) > 1:
        growth = "exponential"
    elif max_unit <= 1:
        growth = "bounded"
    else:
        growth = f"polynomial degree {max_unit - 1}"
    return GrowthReport([int(x) for x in cp], factors, res_int, jordan, radius_one, max_unit, growth)


def predicted_degrees(m, n: int) -> Dict[str, List[Tuple[int, int]]]:
    """(Ha, Hb) coefficients of M^k Ha and M^k Hb for k = 0..n."""
    a = m.matrix if isinstance(m, ActionMatrix) else m
    out = {"Ha": [], "Hb": []}
    for name in out:
        v = [Fraction(int(b == name)) for b in BASIS]
        for _ in range(n + 1):
            out[name].append((int(v[0]), int(v[1])))
            v = mat_vec(a, v)
    return out


def fixed_classes(m) -> List[List[Fraction]]:
    a = m.matrix if isinstance(m, ActionMatrix) else m
    return kernel(mat_add(a, identity(len(a)), -1))


def is_fixed(m, v: Sequence[int]) -> bool:
    a = m.matrix if isinstance(m, ActionMatrix) else m
    return mat_vec(a, v) == [Fraction(x) for x in v]


def in_span(basis: List[List[Fraction]], v: Sequence) -> bool:
    if not basis:
        return not any(v)
    return rank(basis + [[Fraction(x) for x in v]]) == rank(basis)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
