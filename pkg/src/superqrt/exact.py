"""Exact arithmetic: sparse multivariate polynomials over Q, univariate
polynomials over Q or Q(h), and reduced univariate rational functions.

Everything here is immutable and uses ``fractions.Fraction`` for rational
coefficients.  Univariate gcds go through a subresultant pseudo-remainder
sequence (over Z for rational coefficients, over the field itself for Q(h)).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]

INFINITE_ORDER = math.inf


class VariableMismatchError(ValueError):
    pass


class DegenerateSubstitutionError(ZeroDivisionError):
    pass


class UndefinedGcdError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficient fields
# ---------------------------------------------------------------------------


class RationalField:
    """The field Q, with elements represented as ``Fraction``."""

    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, FunctionFieldElement):
            raise TypeError("cannot coerce a rational function into Q")
        return Fraction(value)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class FunctionField:
    """The rational function field Q(var) in one transcendental ``var``."""

    def __init__(self, var: str = "h"):
        self.var = var
        self.name = f"Q({var})"

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.var == self.var

    def __hash__(self):
        return hash(("FunctionField", self.var))

    def __repr__(self):
        return f"FunctionField({self.var!r})"

    @property
    def zero(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, UPoly.zero(QQ), UPoly.one(QQ), reduced=True)

    @property
    def one(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, UPoly.one(QQ), UPoly.one(QQ), reduced=True)

    @property
    def gen(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, UPoly.gen(QQ), UPoly.one(QQ), reduced=True)

    def __call__(self, value) -> "FunctionFieldElement":
        if isinstance(value, FunctionFieldElement):
            if value.field != self:
                raise TypeError(f"element of {value.field.name} is not in {self.name}")
            return value
        if isinstance(value, UPoly):
            return FunctionFieldElement(self, value, UPoly.one(QQ))
        return FunctionFieldElement(self, UPoly.const(QQ, value), UPoly.one(QQ), reduced=True)

    def from_poly(self, coeffs: Sequence) -> "FunctionFieldElement":
        """Polynomial in the generator, coefficients listed from degree 0 up."""
        return FunctionFieldElement(self, UPoly(QQ, coeffs), UPoly.one(QQ), reduced=True)


class FunctionFieldElement:
    """Reduced fraction num/den of polynomials over Q, den monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: FunctionField, num: "UPoly", den: "UPoly", reduced: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in function field element")
        if not reduced:
            if num.is_zero():
                den = UPoly.one(QQ)
            else:
                g = uni_gcd(num, den)
                if g.degree() > 0:
                    num = num.exact_quo(g)
                    den = den.exact_quo(g)
            lc = den.lc()
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        self.field = field
        self.num = num
        self.den = den

    def _coerce(self, other):
        if isinstance(other, FunctionFieldElement):
            if other.field != self.field:
                raise TypeError(f"cannot mix {self.field.name} and {other.field.name}")
            return other
        if isinstance(other, (int, Fraction)):
            return FunctionFieldElement(self.field, UPoly.const(QQ, other), UPoly.one(QQ), reduced=True)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.degree() == 0 and self.num.degree() <= 0:
            return hash(self.num.coeff(0))
        return hash((self.num.coeffs, self.den.coeffs))

    def __neg__(self):
        return FunctionFieldElement(self.field, -self.num, self.den, reduced=True)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return FunctionFieldElement(self.field, self.num + o.num, self.den)
        return FunctionFieldElement(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.degree() == 0 and o.den.degree() == 0:
            return FunctionFieldElement(self.field, self.num * o.num, UPoly.one(QQ), reduced=True)
        g1 = uni_gcd(self.num, o.den) if not self.num.is_zero() else o.den
        g2 = uni_gcd(o.num, self.den) if not o.num.is_zero() else self.den
        num = self.num.exact_quo(g1) * o.num.exact_quo(g2)
        den = self.den.exact_quo(g2) * o.den.exact_quo(g1)
        lc = den.lc()
        return FunctionFieldElement(self.field, num.scale(1 / lc), den.scale(1 / lc), reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        lc = self.num.lc()
        return FunctionFieldElement(self.field, self.den.scale(1 / lc), self.num.scale(1 / lc), reduced=True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FunctionFieldElement(self.field, self.num ** e, self.den ** e, reduced=True)

    def __call__(self, value) -> Fraction:
        d = self.den(value)
        if d == 0:
            raise ZeroDivisionError(f"{self} has a pole at {self.field.var}={value}")
        return self.num(value) / d

    def diff(self) -> "FunctionFieldElement":
        return FunctionFieldElement(
            self.field,
            self.num.diff() * self.den - self.num * self.den.diff(),
            self.den * self.den,
        )

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.coeff(0)

    def __str__(self):
        n = self.num.to_str(self.field.var)
        if self.den.degree() == 0:
            return n
        return f"({n})/({self.den.to_str(self.field.var)})"

    def __repr__(self):
        return f"<{self.field.name}: {self}>"


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------


def _trim(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


def _common_den(coeffs) -> int:
    den = 1
    for c in coeffs:
        d = c.denominator
        if d != 1:
            den = den * d // math.gcd(den, d)
    return den


def _qq_kronecker_mul(a: tuple, b: tuple) -> tuple:
    """Product of two rational coefficient tuples via one big-integer product."""
    da, db = _common_den(a), _common_den(b)
    ia = [c.numerator * (da // c.denominator) for c in a]
    ib = [c.numerator * (db // c.denominator) for c in b]
    bound = min(len(ia), len(ib)) * max(abs(x) for x in ia) * max(abs(x) for x in ib)
    k = bound.bit_length() + 2
    va = vb = 0
    for x in reversed(ia):
        va = (va << k) + x
    for x in reversed(ib):
        vb = (vb << k) + x
    v = va * vb
    mask = (1 << k) - 1
    half = 1 << (k - 1)
    out = []
    den = da * db
    for _ in range(len(ia) + len(ib) - 1):
        d = v & mask
        if d >= half:
            d -= 1 << k
        out.append(Fraction(d, den))
        v = (v - d) >> k
    return _trim(out)


class UPoly:
    """Dense univariate polynomial, coefficients listed from degree 0 up.

    ``field`` is ``QQ`` or a ``FunctionField``; coefficients are elements of
    that field.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Iterable = ()):
        self.field = field
        self.coeffs = _trim([field(c) for c in coeffs])

    @classmethod
    def _raw(cls, field, coeffs: tuple) -> "UPoly":
        p = object.__new__(cls)
        p.field = field
        p.coeffs = coeffs
        return p

    @classmethod
    def zero(cls, field) -> "UPoly":
        return cls._raw(field, ())

    @classmethod
    def one(cls, field) -> "UPoly":
        return cls._raw(field, (field.one,))

    @classmethod
    def const(cls, field, c) -> "UPoly":
        c = field(c)
        return cls._raw(field, (c,) if c else ())

    @classmethod
    def gen(cls, field) -> "UPoly":
        return cls._raw(field, (field.zero, field.one))

    @classmethod
    def monomial(cls, field, c, k: int) -> "UPoly":
        c = field(c)
        if not c:
            return cls._raw(field, ())
        return cls._raw(field, (field.zero,) * k + (c,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1]

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def low_degree(self) -> int:
        """Lowest exponent carrying a nonzero coefficient."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise ValueError("zero polynomial has no lowest term")

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim([self.field(other)])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return UPoly.const(self.field, other)

    def __neg__(self):
        return UPoly._raw(self.field, tuple(-c for c in self.coeffs))

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly._raw(self.field, _trim(out))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            c = self.field(other)
            if not c:
                return UPoly._raw(self.field, ())
            return UPoly._raw(self.field, tuple(x * c for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly._raw(self.field, ())
        if self.field is QQ and min(len(a), len(b)) > 4:
            return UPoly._raw(QQ, _qq_kronecker_mul(a, b))
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return UPoly._raw(self.field, _trim(out))

    __rmul__ = __mul__

    def scale(self, c) -> "UPoly":
        return self * c

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = UPoly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> "UPoly":
        """Multiply by gen**k."""
        if not self.coeffs or k == 0:
            return self
        return UPoly._raw(self.field, (self.field.zero,) * k + self.coeffs)

    def divmod(self, other: "UPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree()
        inv_lc = 1 / other.lc()
        if len(rem) <= db:
            return UPoly.zero(self.field), self
        quo = [self.field.zero] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * inv_lc
            quo[k - db] = q
            off = k - db
            for j in range(db + 1):
                rem[off + j] = rem[off + j] - q * bc[j]
        return UPoly._raw(self.field, _trim(quo)), UPoly._raw(self.field, _trim(rem[:db]))

    def exact_quo(self, other: "UPoly") -> "UPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def monic(self) -> "UPoly":
        if not self.coeffs:
            return self
        lc = self.lc()
        if lc == 1:
            return self
        return self * (1 / lc)

    def diff(self) -> "UPoly":
        return UPoly._raw(self.field, _trim([c * k for k, c in enumerate(self.coeffs)][1:]))

    def __call__(self, x):
        acc = self.field.zero if isinstance(x, (int, Fraction)) else x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, fn, field) -> "UPoly":
        return UPoly(field, [fn(c) for c in self.coeffs])

    def to_str(self, var: str = "e") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if isinstance(c, Fraction):
                cs = str(c)
            else:
                cs = str(c)
                if not c.is_constant():
                    cs = f"({cs})"
            if mono:
                if c == 1:
                    term = mono
                elif c == -1:
                    term = f"-{mono}"
                else:
                    term = f"{cs}*{mono}"
            else:
                term = cs
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"UPoly({self.field!r}, {self.to_str()})"


# -- gcd --------------------------------------------------------------------


def _int_content(c: Sequence[int]) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _int_prem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        k = len(a) - 1 - db
        a = [x * lb for x in a]
        for j in range(db + 1):
            a[k + j] -= la * b[j]
        a.pop()
        while a and a[-1] == 0:
            a.pop()
        e -= 1
    if e > 0:
        f = lb ** e
        a = [x * f for x in a]
    return a


def _int_subresultant_gcd(a: list, b: list) -> list:
    """Primitive gcd of two nonzero integer polynomials (low-to-high lists)."""
    if len(a) < len(b):
        a, b = b, a
    ca, cb = _int_content(a), _int_content(b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    g = 1
    hh = 1
    while b:
        delta = len(a) - len(b)
        r = _int_prem(a, b)
        if not r:
            a = b
            break
        div = g * hh ** delta
        a, b = b, [x // div for x in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            hh = g
        else:
            hh = g ** delta // hh ** (delta - 1)
    c = _int_content(a)
    a = [x // c for x in a]
    if a[-1] < 0:
        a = [-x for x in a]
    return a


def _int_eval(c: Sequence[int], x: int) -> int:
    v = 0
    for a in reversed(c):
        v = v * x + a
    return v


def _int_interpolate(v: int, x: int) -> list:
    """Inverse of _int_eval using balanced digits in base x."""
    out = []
    half = x // 2
    while v:
        d = v % x
        if d > half:
            d -= x
        out.append(d)
        v = (v - d) // x
    return out


def _int_divides(b: list, a: list) -> bool:
    """True iff b divides a in Z[x] (b primitive)."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db:
        q, r = divmod(a[-1], lb)
        if r:
            return False
        k = len(a) - 1 - db
        if q:
            for j in range(db + 1):
                a[k + j] -= q * b[j]
        a.pop()
    return not any(a)


def _int_heuristic_gcd(a: list, b: list):
    """Heuristic gcd by evaluation at a large integer; None on failure."""
    na = max(abs(x) for x in a)
    nb = max(abs(x) for x in b)
    bound = 2 * min(na, nb) + 29
    x = max(min(bound, 99 * math.isqrt(bound)), 2 * min(na // abs(a[-1]), nb // abs(b[-1])) + 2)
    for _ in range(6):
        g = math.gcd(_int_eval(a, x), _int_eval(b, x))
        cand = _int_interpolate(g, x)
        if cand:
            c = _int_content(cand)
            cand = [y // c for y in cand]
            if cand[-1] < 0:
                cand = [-y for y in cand]
            if _int_divides(cand, a) and _int_divides(cand, b):
                return cand
        x = 73794 * x * math.isqrt(math.isqrt(x)) // 27011
    return None


def _int_gcd(a: list, b: list) -> list:
    ca, cb = _int_content(a), _int_content(b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    g = _int_heuristic_gcd(a, b)
    if g is None:
        g = _int_subresultant_gcd(a, b)
    return g


def _field_subresultant_gcd(a: UPoly, b: UPoly) -> UPoly:
    if a.degree() < b.degree():
        a, b = b, a
    field = a.field
    g = field.one
    hh = field.one
    while not b.is_zero():
        delta = a.degree() - b.degree()
        r = (a * (b.lc() ** (delta + 1))) % b
        if r.is_zero():
            a = b
            break
        a, b = b, r * (1 / (g * hh ** delta))
        g = a.lc()
        hh = (g ** delta) / (hh ** (delta - 1)) if delta != 1 else g
    return a.monic()


def _hpoly_lcm_den(p: UPoly) -> UPoly:
    den = UPoly.one(QQ)
    for c in p.coeffs:
        if c.den.degree() > 0:
            den = den * c.den.exact_quo(uni_gcd(den, c.den))
    return den


def _to_hpoly_list(p: UPoly) -> list:
    """Coefficients of ``p`` (over Q(h)) times a common denominator, as
    polynomials in h."""
    den = _hpoly_lcm_den(p)
    return [c.num * den.exact_quo(c.den) for c in p.coeffs]


def _hpoly_content(c: list) -> UPoly:
    g = UPoly.zero(QQ)
    for x in c:
        if not x.is_zero():
            g = uni_gcd(g, x) if not g.is_zero() else x.monic()
            if g.degree() == 0:
                return UPoly.one(QQ)
    return g


def _hpoly_primitive(c: list) -> list:
    g = _hpoly_content(c)
    if g.degree() == 0:
        return c
    return [x.exact_quo(g) for x in c]


def _hpoly_prem(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        k = len(a) - 1 - db
        a = [x * lb for x in a]
        for j in range(db + 1):
            a[k + j] = a[k + j] - la * b[j]
        a.pop()
        while a and a[-1].is_zero():
            a.pop()
        e -= 1
    if e > 0:
        f = lb ** e
        a = [x * f for x in a]
    return a


def _hpoly_subresultant_gcd(a: list, b: list) -> list:
    """Primitive gcd in Q[h][e] of two nonzero coefficient lists."""
    if len(a) < len(b):
        a, b = b, a
    a, b = _hpoly_primitive(a), _hpoly_primitive(b)
    one = UPoly.one(QQ)
    g = hh = one
    while b:
        if len(b) == 1:
            return [one]
        delta = len(a) - len(b)
        r = _hpoly_prem(a, b)
        if not r:
            a = b
            break
        div = g * hh ** delta
        a, b = b, [x.exact_quo(div) for x in r]
        g = a[-1]
        if delta == 1:
            hh = g
        elif delta > 1:
            hh = (g ** delta).exact_quo(hh ** (delta - 1))
    return _hpoly_primitive(a)


def _specialize(p: UPoly, value: Fraction):
    return UPoly(QQ, [c(value) for c in p.coeffs])


def _interpolate(xs: list, ys: list) -> UPoly:
    """Newton interpolation over Q."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = UPoly(QQ, [coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * UPoly(QQ, [-xs[i], Fraction(1)]) + UPoly(QQ, [coef[i]])
    return out


def _evaluation_gcd(a: list, b: list):
    """Primitive gcd in Q[h][e] by specializing h, interpolating the monic
    gcds scaled by gcd(lc a, lc b), and checking by pseudo-division.
    Returns None when no consistent candidate is found."""
    lc = uni_gcd(a[-1], b[-1])
    bound = lc.degree() + min(max(c.degree() for c in a), max(c.degree() for c in b))
    xs, images, deg = [], [], None
    k = 0
    while len(xs) <= bound and k < 4 * bound + 40:
        k += 1
        x = Fraction(2 * k + 1, 3 * k + 7) if k % 2 else Fraction(-(5 * k + 2), k + 3)
        lcx = lc(x)
        if lcx == 0 or a[-1](x) == 0 or b[-1](x) == 0:
            continue
        g = uni_gcd(UPoly(QQ, [c(x) for c in a]), UPoly(QQ, [c(x) for c in b]))
        d = g.degree()
        if deg is None or d < deg:
            deg, xs, images = d, [], []
        if d > deg:
            continue
        xs.append(x)
        images.append([lcx * c for c in g.coeffs])
    if deg is None or len(xs) <= bound:
        return None
    if deg == 0:
        return [UPoly.one(QQ)]
    cand = _hpoly_primitive([_interpolate(xs, [im[i] for im in images]) for i in range(deg + 1)])
    if _hpoly_prem(a, cand) or _hpoly_prem(b, cand):
        return None
    return cand


def _function_field_gcd(p: UPoly, q: UPoly) -> UPoly:
    field = p.field
    # a gcd of degree 0 after specializing h proves coprimality
    for value in (Fraction(7919, 104729), Fraction(-3571, 7727)):
        try:
            ps, qs = _specialize(p, value), _specialize(q, value)
        except ZeroDivisionError:
            continue
        if ps.degree() == p.degree() and qs.degree() == q.degree():
            if uni_gcd(ps, qs).degree() == 0:
                return UPoly.one(field)
            break
    a, b = _to_hpoly_list(p), _to_hpoly_list(q)
    g = _evaluation_gcd(a, b)
    if g is None:
        g = _hpoly_subresultant_gcd(a, b)
    return UPoly(field, [field(c) for c in g]).monic()


def _to_int_poly(p: UPoly) -> list:
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in p.coeffs]


def uni_gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd of two univariate polynomials over Q or Q(h)."""
    if p.is_zero() and q.is_zero():
        raise UndefinedGcdError("gcd(0, 0) is undefined")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.degree() == 0 or q.degree() == 0:
        return UPoly.one(p.field)
    if p.field is QQ:
        g = _int_gcd(_to_int_poly(p), _to_int_poly(q))
        return UPoly(QQ, g).monic()
    return _function_field_gcd(p, q)


# ---------------------------------------------------------------------------
# univariate rational functions
# ---------------------------------------------------------------------------


class UniRatFunc:
    """Reduced num/den of univariate polynomials (in the germ parameter),
    den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: UPoly, den: UPoly | None = None, reduced: bool = False):
        if den is None:
            den = UPoly.one(num.field)
        if den.is_zero():
            raise DegenerateSubstitutionError("identically zero denominator")
        if not reduced:
            if num.is_zero():
                den = UPoly.one(num.field)
            else:
                g = uni_gcd(num, den)
                if g.degree() > 0:
                    num = num.exact_quo(g)
                    den = den.exact_quo(g)
            lc = den.lc()
            if lc != 1:
                inv = 1 / lc
                num = num * inv
                den = den * inv
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def const(cls, field, c) -> "UniRatFunc":
        return cls(UPoly.const(field, c), UPoly.one(field), reduced=True)

    @classmethod
    def gen(cls, field) -> "UniRatFunc":
        return cls(UPoly.gen(field), UPoly.one(field), reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, UniRatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, FunctionFieldElement)):
            return self.den.degree() == 0 and self.num == UPoly.const(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def _lift(self, other) -> "UniRatFunc":
        if isinstance(other, UniRatFunc):
            return other
        return UniRatFunc.const(self.field, other)

    def __neg__(self):
        return UniRatFunc(-self.num, self.den, reduced=True)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return UniRatFunc(self.num + o.num, self.den)
        g = uni_gcd(self.den, o.den)
        if g.degree() == 0:
            return UniRatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        sd, od = self.den.exact_quo(g), o.den.exact_quo(g)
        return UniRatFunc(self.num * od + o.num * sd, self.den * od)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if self.is_zero() or o.is_zero():
            return UniRatFunc(UPoly.zero(self.field), reduced=False)
        g1 = uni_gcd(self.num, o.den)
        g2 = uni_gcd(o.num, self.den)
        num = self.num.exact_quo(g1) * o.num.exact_quo(g2)
        den = self.den.exact_quo(g2) * o.den.exact_quo(g1)
        return UniRatFunc(num, den, reduced=False) if den.lc() != 1 else UniRatFunc(num, den, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "UniRatFunc":
        if self.is_zero():
            raise DegenerateSubstitutionError("inverse of identically zero germ coordinate")
        return UniRatFunc(self.den, self.num, reduced=False)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return UniRatFunc(self.num ** e, self.den ** e, reduced=True)

    def degree(self) -> int:
        """max(deg num, deg den) of the reduced fraction."""
        return max(self.num.degree(), self.den.degree(), 0)

    def order(self):
        return ord_epsilon(self)

    def leading_coefficient(self):
        """Coefficient of e**order in the Laurent expansion at e = 0."""
        if self.is_zero():
            raise ValueError("zero has no leading coefficient")
        return self.num.coeff(self.num.low_degree()) / self.den.coeff(self.den.low_degree())

    def value_at_zero(self):
        """Value at e = 0; raises if there is a pole."""
        o = ord_epsilon(self)
        if o < 0:
            raise ZeroDivisionError("pole at e = 0")
        if o > 0:
            return self.field.zero
        return self.leading_coefficient()

    def map_coeffs(self, fn, field) -> "UniRatFunc":
        return UniRatFunc(self.num.map_coeffs(fn, field), self.den.map_coeffs(fn, field))

    def __str__(self):
        if self.den.degree() == 0:
            return self.num.to_str("e")
        return f"({self.num.to_str('e')})/({self.den.to_str('e')})"

    def __repr__(self):
        return f"UniRatFunc({self})"


def ord_epsilon(f: UniRatFunc):
    """Valuation at e = 0: negative for a pole, ``INFINITE_ORDER`` for zero."""
    if f.is_zero():
        return INFINITE_ORDER
    return f.num.low_degree() - f.den.low_degree()


# ---------------------------------------------------------------------------
# sparse multivariate polynomials
# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse polynomial over Q in an ordered tuple of named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.vars = tuple(variables)
        n = len(self.vars)
        clean: Dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            c = Fraction(c)
            if c:
                clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p.vars = variables
        p.terms = terms
        return p

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "MultiPoly":
        variables = tuple(variables)
        c = Fraction(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise VariableMismatchError(f"{name!r} not among {variables}")
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls._raw(variables, {tuple(e): Fraction(1)})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> Tuple["MultiPoly", ...]:
        return tuple(cls.var(variables, v) for v in variables)

    # -- basic protocol ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise VariableMismatchError(f"{self.vars} != {other.vars}")
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(self.vars, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "MultiPoly"):
        if other.vars != self.vars:
            raise VariableMismatchError(f"variable lists differ: {self.vars} vs {other.vars}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.vars, other)
        return NotImplemented

    # -- arithmetic ------------------------------------------------------------

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return RationalFunction(self, other)

    def __rtruediv__(self, other):
        return RationalFunction(MultiPoly.const(self.vars, other), self)

    # -- structure -------------------------------------------------------------

    def degree(self, which: str | Iterable[str] | None = None) -> int:
        """Total degree in the given variable(s); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if which is None:
            idx = range(len(self.vars))
        elif isinstance(which, str):
            idx = [self.vars.index(which)]
        else:
            idx = [self.vars.index(v) for v in which]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def min_degree(self, var: str):
        """Lowest exponent of ``var``: the valuation along {var = 0}."""
        if not self.terms:
            return INFINITE_ORDER
        i = self.vars.index(var)
        return min(e[i] for e in self.terms)

    def used_vars(self) -> Tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def align(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over another variable list (must contain every used var)."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        used = self.used_vars()
        missing = [v for v in used if v not in variables]
        if missing:
            raise VariableMismatchError(f"cannot drop used variables {missing}")
        pos = [self.vars.index(v) if v in self.vars else None for v in variables]
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[p] if p is not None else 0 for p in pos)] = c
        return MultiPoly._raw(variables, out)

    def collect(self, which: Sequence[str]) -> Dict[Exponent, "MultiPoly"]:
        """Split into {exponents of ``which``: coefficient poly in the other vars}."""
        idx = [self.vars.index(v) for v in which]
        rest = [i for i in range(len(self.vars)) if i not in idx]
        rest_vars = tuple(self.vars[i] for i in rest)
        out: Dict[Exponent, Dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            out.setdefault(key, {})[tuple(e[i] for i in rest)] = c
        return {k: MultiPoly._raw(rest_vars, v) for k, v in out.items()}

    def coefficient(self, mono: Mapping[str, int]) -> "MultiPoly":
        """Coefficient of a monomial in some of the variables."""
        which = tuple(mono)
        key = tuple(mono[v] for v in which)
        parts = self.collect(which)
        if key in parts:
            return parts[key]
        rest = tuple(v for v in self.vars if v not in which)
        return MultiPoly._raw(rest, {})

    def partial(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute rational numbers for some variables, keep the rest."""
        idx = {self.vars.index(v): Fraction(x) for v, x in values.items() if v in self.vars}
        out: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            for i, x in idx.items():
                if e[i]:
                    c = c * x ** e[i]
            if not c:
                continue
            k = tuple(0 if i in idx else a for i, a in enumerate(e))
            s = out.get(k)
            out[k] = c if s is None else s + c
        return MultiPoly._raw(self.vars, {e: c for e, c in out.items() if c})

    def __call__(self, **values):
        return self.evaluate(values)

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at ring elements (numbers, UPoly, UniRatFunc, ...)."""
        missing = [v for v in self.used_vars() if v not in values]
        if missing:
            raise KeyError(f"no value for {missing}")
        vals = [values.get(v) for v in self.vars]
        acc = None
        powers: Dict[Tuple[int, int], object] = {}
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = vals[i] ** k
                    term = powers[key] * term
            acc = term if acc is None else acc + term
        if acc is None:
            return Fraction(0)
        return acc

    def derivative(self, var: str) -> "MultiPoly":
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly._raw(self.vars, out)

    def to_upoly(self, var: str, field=QQ) -> UPoly:
        """View a polynomial in ``var`` only (others absent) as a UPoly."""
        other = [v for v in self.used_vars() if v != var]
        if other:
            raise VariableMismatchError(f"{other} present in univariate view")
        i = self.vars.index(var) if var in self.vars else None
        out = {}
        for e, c in self.terms.items():
            out[e[i] if i is not None else 0] = c
        n = max(out) + 1 if out else 0
        return UPoly(field, [out.get(k, 0) for k in range(n)])

    # -- printing ----------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({list(self.vars)}, {self})"


def poly_op(kind: str, p: MultiPoly, q: MultiPoly | None = None) -> MultiPoly:
    """add / mul / neg on polynomials over a shared variable list."""
    if kind == "neg":
        return -p
    if q is None:
        raise ValueError(f"{kind} needs two operands")
    p._check(q)
    if kind == "add":
        return p + q
    if kind == "mul":
        return p * q
    raise ValueError(f"unknown polynomial operation {kind!r}")


# ---------------------------------------------------------------------------
# multivariate rational functions (unreduced)
# ---------------------------------------------------------------------------


class RationalFunction:
    """num/den pair of MultiPoly values, not reduced (no multivariate gcd).

    Equality is decided by cross multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RationalFunction) and den is None:
            num, den = num.num, num.den
        if den is None:
            den = MultiPoly.const(num.vars, 1)
        if isinstance(den, (int, Fraction)):
            den = MultiPoly.const(num.vars, den)
        if isinstance(num, (int, Fraction)):
            num = MultiPoly.const(den.vars, num)
        if isinstance(den, RationalFunction) or isinstance(num, RationalFunction):
            r = _as_rf(num) / _as_rf(den)
            num, den = r.num, r.den
        num._check(den)
        if den.is_zero():
            raise DegenerateSubstitutionError("identically zero denominator")
        # keep a unit leading coefficient on constant denominators
        if len(den.terms) == 1:
            (e, c), = den.terms.items()
            if c != 1:
                num = num * (1 / c)
                den = den * (1 / c)
        self.num = num
        self.den = den

    @property
    def vars(self):
        return self.num.vars

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other, MultiPoly.const(other.vars, 1))
        if isinstance(other, (int, Fraction)):
            return RationalFunction(MultiPoly.const(self.vars, other), MultiPoly.const(self.vars, 1))
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    __hash__ = None

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o.num.is_zero():
            raise DegenerateSubstitutionError("division by an identically zero function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunction(self.den ** (-e), self.num ** (-e))
        return RationalFunction(self.num ** e, self.den ** e)

    def align(self, variables) -> "RationalFunction":
        return RationalFunction(self.num.align(variables), self.den.align(variables))

    def valuation(self, var: str):
        """Order of vanishing along {var = 0}."""
        if self.num.is_zero():
            return INFINITE_ORDER
        return self.num.min_degree(var) - self.den.min_degree(var)

    def derivative(self, var: str) -> "RationalFunction":
        n, d = self.num, self.den
        dd = d.derivative(var)
        if dd.is_zero():
            return RationalFunction(n.derivative(var), d)
        return RationalFunction(n.derivative(var) * d - n * dd, d * d)

    def evaluate(self, values: Mapping[str, object]):
        d = self.den.evaluate(values)
        if (isinstance(d, (int, Fraction)) and d == 0) or (hasattr(d, "is_zero") and d.is_zero()):
            raise ZeroDivisionError("denominator vanishes at the given point")
        return self.num.evaluate(values) / d

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction(x)


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def substitute(
    p: MultiPoly,
    bindings: Mapping[str, object],
    target_vars: Sequence[str] | None = None,
    clear_degrees: Mapping[str, int] | None = None,
):
    """Substitute rational expressions into ``p``.

    ``bindings`` maps variable names to RationalFunction (or MultiPoly)
    values over ``target_vars``; unbound variables are carried through.
    Returns ``(numerator, denominator)`` with
    ``p(bindings) == numerator / denominator``.  The denominator is the
    product of binding denominators raised to ``clear_degrees`` (default:
    degree of ``p`` in that variable), so callers substituting several
    polynomials with the same ``clear_degrees`` get a shared denominator.
    """
    if target_vars is None:
        for b in bindings.values():
            if isinstance(b, (MultiPoly, RationalFunction)):
                target_vars = b.vars
                break
        else:
            target_vars = p.vars
    target_vars = tuple(target_vars)
    one = MultiPoly.const(target_vars, 1)
    nums, dens = {}, {}
    for v in p.vars:
        if v in bindings:
            b = bindings[v]
            if isinstance(b, (int, Fraction)):
                b = RationalFunction(MultiPoly.const(target_vars, b), one)
            b = _as_rf(b)
            if b.vars != target_vars:
                b = b.align(target_vars)
            nums[v], dens[v] = b.num, b.den
        else:
            if v not in target_vars:
                raise VariableMismatchError(f"unbound variable {v!r} missing from target")
            nums[v], dens[v] = MultiPoly.var(target_vars, v), one
    return _clear_and_sum(p, nums, dens, one, clear_degrees)


def _clear_and_sum(p, nums, dens, one, clear_degrees=None):
    degs = {}
    for i, v in enumerate(p.vars):
        d = max((e[i] for e in p.terms), default=0)
        if clear_degrees is not None and v in clear_degrees:
            if clear_degrees[v] < d:
                raise ValueError(f"clear degree for {v} below its degree {d}")
            d = clear_degrees[v]
        degs[v] = d
    npow: Dict[Tuple[str, int], object] = {}
    dpow: Dict[Tuple[str, int], object] = {}

    def power(cache, table, v, k):
        key = (v, k)
        if key not in cache:
            cache[key] = table[v] ** k if k else one
        return cache[key]

    const_den = {v: _is_one(dens[v]) for v in p.vars}
    acc = None
    for e, c in p.terms.items():
        term = one * c
        for v, k in zip(p.vars, e):
            if k:
                term = term * power(npow, nums, v, k)
            if not const_den[v] and degs[v] - k:
                term = term * power(dpow, dens, v, degs[v] - k)
        acc = term if acc is None else acc + term
    if acc is None:
        acc = one * 0
    den = one
    for v in p.vars:
        if not const_den[v] and degs[v]:
            den = den * power(dpow, dens, v, degs[v])
    return acc, den


def _is_one(x) -> bool:
    try:
        return x == 1
    except Exception:
        return False


def evaluate_fraction(p: MultiPoly, values: Mapping[str, Tuple[object, object]], one, clear_degrees=None):
    """Evaluate ``p`` at values given as (num, den) ring-element pairs.

    Returns unreduced ``(N, D)`` in the ring of ``one`` (UPoly, MultiPoly, ...).
    """
    missing = [v for v in p.used_vars() if v not in values]
    if missing:
        raise KeyError(f"no value for {missing}")
    nums = {v: values[v][0] if v in values else one for v in p.vars}
    dens = {v: values[v][1] if v in values else one for v in p.vars}
    return _clear_and_sum(p, nums, dens, one, clear_degrees)


def upoly_from_ints(coeffs: Sequence[int], field=QQ) -> UPoly:
    return UPoly(field, coeffs)


def rf_on_germs(rf: RationalFunction, values: Mapping[str, UniRatFunc]) -> UniRatFunc:
    """Evaluate a rational function at univariate rational-function values
    (every variable of ``rf`` that occurs must have a value)."""
    one = UPoly.one(next(iter(values.values())).field)
    pairs = {v: (f.num, f.den) for v, f in values.items()}
    clear = {v: max(rf.num.degree(v), rf.den.degree(v), 0) for v in rf.vars}
    n, _ = evaluate_fraction(rf.num, pairs, one, clear)
    d, _ = evaluate_fraction(rf.den, pairs, one, clear)
    if d.is_zero():
        raise DegenerateSubstitutionError("denominator vanishes identically on the germ")
    return UniRatFunc(n, d)


def cancel_monomial(rf: RationalFunction) -> RationalFunction:
    """Remove the largest monomial dividing both numerator and denominator."""
    if rf.num.is_zero():
        return RationalFunction(rf.num, MultiPoly.const(rf.vars, 1))
    n = len(rf.vars)
    common = [min(min(e[i] for e in rf.num.terms), min(e[i] for e in rf.den.terms)) for i in range(n)]
    if not any(common):
        return rf

    def shift(p):
        return MultiPoly._raw(p.vars, {tuple(a - b for a, b in zip(e, common)): c for e, c in p.terms.items()})

    return RationalFunction(shift(rf.num), shift(rf.den))


def divide_exact(p: MultiPoly, q: MultiPoly) -> MultiPoly | None:
    """p / q if q divides p exactly in Q[vars], else None (lex division)."""
    p._check(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lead_q = max(q.terms)
    cq = q.terms[lead_q]
    rem = dict(p.terms)
    quo: Dict[Exponent, Fraction] = {}
    while rem:
        lead = max(rem)
        if any(a < b for a, b in zip(lead, lead_q)):
            return None
        mono = tuple(a - b for a, b in zip(lead, lead_q))
        c = rem[lead] / cq
        quo[mono] = c
        for e, d in q.terms.items():
            k = tuple(a + b for a, b in zip(e, mono))
            v = rem.get(k, 0) - c * d
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return MultiPoly._raw(p.vars, quo)
