"""Exact Gaussian rationals, the coefficient field of every object in the package.

A value is stored as ``(a + b*i) / d`` with integers ``a, b`` and ``d > 0``
and ``gcd(a, b, d) == 1``, which keeps arithmetic on machine integers
instead of pairs of ``Fraction`` objects.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = ["GaussianRational", "as_gaussian", "I", "ZERO", "ONE"]


def _reduce(a: int, b: int, d: int) -> tuple[int, int, int]:
    if d == 0:
        raise ZeroDivisionError("GaussianRational division by zero")
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(a, b, d)
    if g > 1:
        a, b, d = a // g, b // g, d // g
    return a, b, d


class GaussianRational:
    """An element of Q(i) with exact arithmetic.

    Construct from real and imaginary parts, each an ``int``, ``Fraction``
    or decimal-free string such as ``"3/4"``::

        >>> GaussianRational(1, Fraction(-1, 2))
        GaussianRational('1-1/2*i')
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._a, self._b, self._d = _reduce(a, b, d)

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = object.__new__(cls)
        obj._a, obj._b, obj._d = _reduce(a, b, d)
        return obj

    # ----- accessors
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def is_integer(self) -> bool:
        return self._b == 0 and self._d == 1

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """Squared modulus ``re^2 + im^2``."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # ----- arithmetic
    def __add__(self, other):
        o = as_gaussian(other, strict=False)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussianRational._raw(
            self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = as_gaussian(other, strict=False)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = as_gaussian(other, strict=False)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = as_gaussian(other, strict=False)
        if o is None:
            return NotImplemented
        a, b, d = self._a, self._b, self._d
        c, e, f = o._a, o._b, o._d
        return GaussianRational._raw(a * c - b * e, a * e + b * c, d * f)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b, d = self._a, self._b, self._d
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        # d / (a + b i) = d (a - b i) / n
        return GaussianRational._raw(d * a, -d * b, n)

    def __truediv__(self, other):
        o = as_gaussian(other, strict=False)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = as_gaussian(other, strict=False)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ----- comparison and hashing
    def __eq__(self, other):
        o = as_gaussian(other, strict=False)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def sort_key(self) -> tuple[Fraction, Fraction]:
        """Lexicographic (re, im) key used for deterministic orderings."""
        return (self.re, self.im)

    # ----- rendering
    def __str__(self):
        re_, im_ = self.re, self.im
        if im_ == 0:
            return _frac_str(re_)
        im_part = "i" if abs(im_) == 1 else f"{_frac_str(abs(im_))}*i"
        if re_ == 0:
            return ("-" if im_ < 0 else "") + im_part
        return f"{_frac_str(re_)}{'-' if im_ < 0 else '+'}{im_part}"

    def __repr__(self):
        return f"GaussianRational('{self}')"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse the canonical rendering, e.g. ``'1/2-3*i'``, ``'-i'``, ``'5'``."""
        s = text.replace(" ", "")
        m = _PARSE_RE.fullmatch(s)
        if not m or not s:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        re_s, im_sign, im_s, i_only = m.group("re"), m.group("isign"), m.group("im"), m.group("i")
        re_v = Fraction(re_s) if re_s else Fraction(0)
        if i_only is None:
            return cls(re_v, 0)
        im_v = Fraction(im_s) if im_s else Fraction(1)
        if im_sign == "-":
            im_v = -im_v
        return cls(re_v, im_v)


_PARSE_RE = re.compile(
    r"(?P<re>[+-]?\d+(?:/\d+)?(?=$|[+-]))?"
    r"(?:(?P<isign>[+-])?(?:(?P<im>\d+(?:/\d+)?)\*)?(?P<i>i))?"
)


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def as_gaussian(x, strict: bool = True) -> GaussianRational | None:
    """Coerce ``int``/``Fraction``/``GaussianRational`` into a GaussianRational.

    Floats and complex numbers are refused: nothing in the exact pipeline
    may silently round.
    """
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        return GaussianRational._raw(x, 0, 1)
    if isinstance(x, Rational):
        return GaussianRational._raw(x.numerator, 0, x.denominator)
    if strict:
        raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
