"""Parser for the canonical text form of polynomials and rational functions.

Grammar: sums/differences of products/quotients of powers of atoms, where an
atom is an integer, a name from the variable list, or a parenthesised
expression.  ``^`` and ``**`` both denote integer powers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .exact import MultiPoly, RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, variables):
        self.toks = tokens
        self.i = 0
        self.vars = tuple(variables)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            f = self.factor()
            acc = acc * f if op == "*" else acc / f
        return acc

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            k = self.take("num")[1]
            return base ** (-k if neg else k)
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return RationalFunction(MultiPoly.const(self.vars, val))
        if kind == "name":
            self.take()
            if val not in self.vars:
                raise ParseError(f"unknown variable {val!r}; expected one of {self.vars}")
            return RationalFunction(MultiPoly.var(self.vars, val))
        if (kind, val) == ("op", "("):
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.factor()
        raise ParseError(f"unexpected token {val!r}")


def parse_rational(text: str, variables: Sequence[str]) -> RationalFunction:
    p = _Parser(_tokenize(text), variables)
    out = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input after position {p.i}")
    return out


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    r = parse_rational(text, variables)
    if r.den.degree() > 0:
        raise ParseError(f"{text!r} is not a polynomial")
    (_, c), = r.den.terms.items()
    return r.num * (1 / c)


def parse_fraction(text: str) -> Fraction:
    """Exact number in "p/q", "p" or decimal form."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not an exact rational: {text!r}") from exc
