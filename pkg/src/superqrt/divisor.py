"""Divisor classes on the 17-fold blow-up of P^2 x P^2.

Basis order is fixed: (Ha, Hb, E1, ..., E17).  Ha, Hb are the classes of
the total transforms of hyperplanes in the two factors, E_i the total
transform of the i-th exceptional divisor.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, Sequence, Tuple

N_BLOWUPS = 17
BASIS: Tuple[str, ...] = ("Ha", "Hb") + tuple(f"E{i}" for i in range(1, N_BLOWUPS + 1))
RANK = len(BASIS)
INDEX: Dict[str, int] = {b: k for k, b in enumerate(BASIS)}


class DivisorClass(tuple):
    """Immutable integer vector over BASIS with lattice arithmetic."""

    def __new__(cls, coeffs: Iterable[int] = ()):
        vals = tuple(int(c) for c in coeffs)
        if not vals:
            vals = (0,) * RANK
        if len(vals) != RANK:
            raise ValueError(f"a divisor class has {RANK} coefficients, got {len(vals)}")
        return super().__new__(cls, vals)

    @classmethod
    def basis(cls, name: str) -> "DivisorClass":
        v = [0] * RANK
        v[INDEX[name]] = 1
        return cls(v)

    @classmethod
    def E(cls, i: int) -> "DivisorClass":
        return cls.basis(f"E{i}")

    @classmethod
    def parse(cls, text: str) -> "DivisorClass":
        return parse_class(text)

    def __add__(self, other):
        return DivisorClass(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return DivisorClass(a - b for a, b in zip(self, other))

    def __neg__(self):
        return DivisorClass(-a for a in self)

    def __mul__(self, k: int):
        return DivisorClass(a * k for a in self)

    __rmul__ = __mul__

    def coefficient(self, name: str) -> int:
        return self[INDEX[name]]

    @property
    def h_part(self) -> Tuple[int, int]:
        return self[0], self[1]

    @property
    def e_part(self) -> Tuple[int, ...]:
        return tuple(self[2:])

    def __str__(self):
        return format_class(self)

    def __repr__(self):
        return f"DivisorClass({format_class(self)!r})"


ZERO = DivisorClass()


def format_class(v: Sequence[int]) -> str:
    parts = []
    for name, c in zip(BASIS, v):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign}{mag}{name}")
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*(Ha|Hb|E_?\{[\d,\s]+\}|E_?\d+)")


def parse_class(text: str) -> DivisorClass:
    """Parse forms like ``Hb-E1-E6-E11``, ``2Ha-E{2,4,7}`` or ``Ha+3Hb-E_{6,7}``."""
    v = [0] * RANK
    pos = 0
    text = text.strip()
    if text == "0":
        return DivisorClass(v)
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse divisor class near {text[pos:]!r}")
        sign, mag, name = m.groups()
        c = (-1 if sign == "-" else 1) * (int(mag) if mag else 1)
        if name in ("Ha", "Hb"):
            v[INDEX[name]] += c
        else:
            body = name.lstrip("E_").strip("{}")
            for idx in body.split(","):
                i = int(idx)
                if not 1 <= i <= N_BLOWUPS:
                    raise ValueError(f"exceptional index {i} out of range")
                v[INDEX[f"E{i}"]] += c
        pos = m.end()
    return DivisorClass(v)
