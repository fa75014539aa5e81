"""Gaussian-rational scalars."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``; decimals and exponents are rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"not an exact rational string: {text!r}")
    return Fraction(text.strip())


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class Coefficient:
    """Complex number ``re + i*im`` with exact rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value) -> "Coefficient":
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value), Fraction(0))
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, tuple) and len(value) == 2:
            return cls(Fraction(value[0]), Fraction(value[1]))
        raise TypeError(f"cannot make a coefficient from {value!r}")

    # arithmetic
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Coefficient(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(-self.re, -self.im)

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Coefficient(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Coefficient(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero coefficient")
        num = self * o.conjugate()
        return Coefficient(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def conjugate(self) -> "Coefficient":
        return Coefficient(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @classmethod
    def from_json(cls, data) -> "Coefficient":
        if isinstance(data, dict):
            return cls(parse_rational(str(data.get("re", "0"))), parse_rational(str(data.get("im", "0"))))
        if isinstance(data, int) and not isinstance(data, bool):
            return cls(data)
        if isinstance(data, str):
            return cls(parse_rational(data))
        raise ValueError(f"bad coefficient encoding: {data!r}")

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    __str__ = __repr__


def _coerce(x):
    if isinstance(x, Coefficient):
        return x
    if isinstance(x, (int, Rational)):
        return Coefficient(Fraction(x))
    if isinstance(x, complex):
        return Coefficient(Fraction(x.real), Fraction(x.imag))
    return NotImplemented


ZERO = Coefficient(0)
ONE = Coefficient(1)
I_UNIT = Coefficient(0, 1)
