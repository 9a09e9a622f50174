"""Exact complex numbers with rational real and imaginary parts.

Components are held as ``int`` whenever they are integral and as
:class:`fractions.Fraction` otherwise; integer arithmetic is two orders of
magnitude faster than ``Fraction`` arithmetic and most coefficients met in
practice are Gaussian integers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

Real = Union[int, Fraction]

__all__ = ["Scalar", "ZERO", "ONE", "I", "as_scalar", "parse_rational", "format_rational"]


def _norm(x: Real) -> Real:
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _coerce_real(x: object) -> Real:
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar component")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _norm(x)
    if isinstance(x, Rational):
        return _norm(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar component")


class Scalar:
    """An element of Q(i), immutable and hashable."""

    __slots__ = ("re", "im")

    def __init__(self, re: object = 0, im: object = 0) -> None:
        object.__setattr__(self, "re", _coerce_real(re))
        object.__setattr__(self, "im", _coerce_real(im))

    @classmethod
    def _make(cls, re: Real, im: Real) -> "Scalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", _norm(re))
        object.__setattr__(obj, "im", _norm(im))
        return obj

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Scalar is immutable")

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other: object) -> "Scalar":
        o = as_scalar(other)
        return Scalar._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: object) -> "Scalar":
        o = as_scalar(other)
        return Scalar._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: object) -> "Scalar":
        return as_scalar(other) - self

    def __neg__(self) -> "Scalar":
        return Scalar._make(-self.re, -self.im)

    def __mul__(self, other: object) -> "Scalar":
        o = as_scalar(other)
        a, b, c, d = self.re, self.im, o.re, o.im
        if d == 0 and c == 1:
            return self
        if b == 0 and a == 1:
            return o
        if b == 0 and d == 0:
            return Scalar._make(a * c, 0)
        return Scalar._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Scalar":
        o = as_scalar(other)
        den = o.abs_sq()
        if den == 0:
            raise ZeroDivisionError("division by zero scalar")
        num = self * o.conjugate()
        return Scalar._make(Fraction(num.re) / den, Fraction(num.im) / den)

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.re, -self.im)

    def abs_sq(self) -> Real:
        """``|z|^2`` as an exact rational."""
        return _norm(self.re * self.re + self.im * self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"Scalar({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self) -> str:
        return self.format()

    def format(self) -> str:
        """``"re+im i"`` text, e.g. ``"1/2-3 i"``; exact round trip via :meth:`parse`."""
        sign = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)}{sign}{format_rational(abs(self.im))} i"

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        match = _SCALAR_RE.match(text.strip().replace("−", "-"))
        if not match:
            raise ValueError(f"malformed scalar: {text!r}")
        re_part, sign, im_part = match.groups()
        im = parse_rational(im_part)
        return cls(parse_rational(re_part), -im if sign == "-" else im)


_SCALAR_RE = re.compile(r"^([+-]?\d+(?:/\d+)?)\s*([+-])\s*(\d+(?:/\d+)?)\s*i$")
_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Real:
    """Parse ``"-3/2"`` or ``"4"`` exactly. Decimals are rejected on purpose."""
    cleaned = text.strip().replace("−", "-")
    if not _RATIONAL_RE.match(cleaned):
        raise ValueError(f"malformed rational: {text!r}")
    return _norm(Fraction(cleaned))


def format_rational(x: Real) -> str:
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


def as_scalar(x: object) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, complex):
        raise TypeError("floating complex values are not exact scalars")
    return Scalar(x)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
