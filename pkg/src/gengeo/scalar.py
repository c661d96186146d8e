"""Exact Gaussian rationals a + b*i with a, b in Q.

Stored as three integers (re, im, den) with den > 0 and
gcd(re, im, den) == 1, so equality and hashing are structural.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

__all__ = ["Scalar", "ZERO", "ONE", "I", "as_scalar"]

Number = Union[int, Fraction, "Scalar"]


class Scalar:
    __slots__ = ("_re", "_im", "_den")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        r = Fraction(re)
        q = Fraction(im)
        den = r.denominator * q.denominator // gcd(r.denominator, q.denominator)
        self._set(r.numerator * (den // r.denominator), q.numerator * (den // q.denominator), den)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._re = a
        self._im = b
        self._den = d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "Scalar":
        s = object.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        s._set(a, b, d)
        return s

    # -- accessors -------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._re, self._den)

    @property
    def im(self) -> Fraction:
        return Fraction(self._im, self._den)

    def conj(self) -> "Scalar":
        s = object.__new__(Scalar)
        s._re, s._im, s._den = self._re, -self._im, self._den
        return s

    def abs2(self) -> Fraction:
        """|s|^2 = re^2 + im^2, exact."""
        return Fraction(self._re * self._re + self._im * self._im, self._den * self._den)

    def is_zero(self) -> bool:
        return self._re == 0 and self._im == 0

    def is_real(self) -> bool:
        return self._im == 0

    def is_imaginary(self) -> bool:
        return self._re == 0

    def __bool__(self) -> bool:
        return not (self._re == 0 and self._im == 0)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other: Number) -> "Scalar":
        o = as_scalar(other)
        if self._den == o._den:
            return Scalar._raw(self._re + o._re, self._im + o._im, self._den)
        return Scalar._raw(
            self._re * o._den + o._re * self._den,
            self._im * o._den + o._im * self._den,
            self._den * o._den,
        )

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        s = object.__new__(Scalar)
        s._re, s._im, s._den = -self._re, -self._im, self._den
        return s

    def __sub__(self, other: Number) -> "Scalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other: Number) -> "Scalar":
        return as_scalar(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        if isinstance(other, int):
            return Scalar._raw(self._re * other, self._im * other, self._den)
        o = as_scalar(other)
        a, b, c, d = self._re, self._im, o._re, o._im
        if b == 0 and d == 0:
            return Scalar._raw(a * c, 0, self._den * o._den)
        return Scalar._raw(a * c - b * d, a * d + b * c, self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self._re * self._re + self._im * self._im
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        # (a+bi)/d inverted = d(a-bi)/(a^2+b^2)
        return Scalar._raw(self._den * self._re, -self._den * self._im, n)

    def __truediv__(self, other: Number) -> "Scalar":
        return self * as_scalar(other).inverse()

    def __rtruediv__(self, other: Number) -> "Scalar":
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self._re == other._re and self._im == other._im and self._den == other._den
        if isinstance(other, (int, Rational)):
            return self == as_scalar(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._im == 0:
            return hash(Fraction(self._re, self._den))
        return hash((self._re, self._im, self._den))

    # -- printing --------------------------------------------------------
    def __str__(self) -> str:
        re, im = self.re, self.im
        if im == 0:
            return _frac_str(re)
        if re == 0:
            return _imag_str(im)
        sign = "-" if im < 0 else "+"
        return f"{_frac_str(re)}{sign}{_imag_str(abs(im))}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _imag_str(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{_frac_str(q)}*i"


def as_scalar(x: Number) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        s = object.__new__(Scalar)
        s._re, s._im, s._den = x, 0, 1
        return s
    if isinstance(x, Rational):
        return Scalar(Fraction(x))
    if isinstance(x, complex):
        raise TypeError("floating complex numbers are not exact; build a Scalar from rationals")
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
