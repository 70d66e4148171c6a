"""Darboux expressions: products of complex powers of polynomials times exp(R)."""

from __future__ import annotations

import re
from typing import Iterable

from .numbers import ONE, GaussianRational, as_gaussian
from .poly import RPoly, RRational, RVariable, as_rational

__all__ = ["DarbouxExpr"]


_BARE = re.compile(r"~?[zw][0-9]+")


class DarbouxExpr:
    """``prod(base_i ** h_i) * exp(exp_part)``.

    Factors with equal bases are merged and zero exponents dropped.  Nothing
    is ever expanded: all calculus happens on the logarithmic derivative.
    """

    __slots__ = ("factors", "exp_part")

    def __init__(self, factors: Iterable = (), exp_part=0):
        merged: dict[RPoly, GaussianRational] = {}
        order: list[RPoly] = []
        for base, e in factors:
            base = _poly(base)
            e = as_gaussian(e)
            if not base:
                raise ValueError("Darboux factor with zero base")
            if base.is_one() or not e:
                continue
            if base in merged:
                merged[base] = merged[base] + e
            else:
                merged[base] = e
                order.append(base)
        facs = [(b, merged[b]) for b in order if merged[b]]
        facs.sort(key=lambda t: (t[0].degree(), str(t[0])))
        self.factors: tuple[tuple[RPoly, GaussianRational], ...] = tuple(facs)
        self.exp_part: RRational = as_rational(exp_part)

    # ----- constructors
    @classmethod
    def from_poly(cls, p, exponent=1) -> "DarbouxExpr":
        return cls([(p, exponent)])

    @classmethod
    def from_rational(cls, r) -> "DarbouxExpr":
        r = as_rational(r)
        return cls([(r.num, 1), (r.den, -1)])

    @classmethod
    def exp(cls, r) -> "DarbouxExpr":
        return cls((), r)

    @classmethod
    def one(cls) -> "DarbouxExpr":
        return cls()

    # ----- algebra
    def __mul__(self, other):
        o = _as_darboux(other)
        if o is None:
            return NotImplemented
        return DarbouxExpr(self.factors + o.factors, self.exp_part + o.exp_part)

    __rmul__ = __mul__

    def __pow__(self, c):
        c = as_gaussian(c)
        return DarbouxExpr([(b, e * c) for b, e in self.factors], self.exp_part * c)

    def inverse(self) -> "DarbouxExpr":
        return self ** -1

    def __truediv__(self, other):
        o = _as_darboux(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_darboux(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conjugate(self) -> "DarbouxExpr":
        return DarbouxExpr(
            [(b.conjugate(), e.conjugate()) for b, e in self.factors], self.exp_part.conjugate()
        )

    # ----- inspection
    def variables(self) -> list[RVariable]:
        vs = set(self.exp_part.variables())
        for b, _ in self.factors:
            vs.update(b.variables())
        return sorted(vs)

    def has_integer_exponents(self) -> bool:
        return all(e.is_integer() for _, e in self.factors)

    def is_rational(self) -> bool:
        return self.has_integer_exponents() and self.exp_part.is_constant()

    def to_rational(self) -> RRational:
        """Expand into a rational function; only for integer powers and no exp part."""
        if not self.has_integer_exponents():
            raise ValueError("non-integer exponent; not a rational function")
        if not self.exp_part.is_zero():
            raise ValueError("nonzero exponential part; not a rational function")
        num = RPoly(1)
        den = RPoly(1)
        for b, e in self.factors:
            k = int(e.re)
            if k > 0:
                num = num * b**k
            else:
                den = den * b ** (-k)
        return RRational(num, den, hints=[b for b, _ in self.factors])

    def single_factor(self) -> RPoly | None:
        """The base if the expression is exactly ``base ** 1``."""
        if len(self.factors) == 1 and self.factors[0][1] == ONE and self.exp_part.is_zero():
            return self.factors[0][0]
        if not self.factors and self.exp_part.is_zero():
            return RPoly(1)
        return None

    def log_gradient(self, variables: Iterable[RVariable]) -> dict[RVariable, RRational]:
        """Partials of ``log(self)`` with respect to each variable."""
        out = {}
        for v in variables:
            acc = self.exp_part.diff(v)
            for b, e in self.factors:
                db = b.diff(v)
                if db:
                    acc = acc + RRational(db, b) * e
            out[v] = acc
        return out

    def equivalent_up_to_scalar(self, other: "DarbouxExpr") -> bool:
        """True when ``self / other`` is a nonzero constant."""
        q = self / _as_darboux(other)
        grads = q.log_gradient(q.variables())
        return all(g.is_zero() for g in grads.values())

    def __eq__(self, other):
        o = _as_darboux(other)
        if o is None:
            return NotImplemented
        return self.factors == o.factors and self.exp_part == o.exp_part

    __hash__ = None

    def __str__(self):
        if len(self.factors) == 1 and self.factors[0][1] == ONE and self.exp_part.is_zero():
            return str(self.factors[0][0])
        parts = []
        for b, e in self.factors:
            s = str(b)
            if not _BARE.fullmatch(s):
                s = f"({s})"
            if e != ONE:
                es = str(e)
                s += f"^{es}" if e.is_integer() and e.re > 0 else f"^({es})"
            parts.append(s)
        if not self.exp_part.is_zero():
            parts.append(f"exp({self.exp_part})")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"DarbouxExpr('{self}')"


def _poly(p) -> RPoly:
    if isinstance(p, RPoly):
        return p
    if isinstance(p, RRational):
        return p.to_poly()
    return RPoly(as_gaussian(p))


def _as_darboux(x) -> DarbouxExpr | None:
    if isinstance(x, DarbouxExpr):
        return x
    if isinstance(x, RPoly):
        return DarbouxExpr.from_poly(x)
    if isinstance(x, RRational):
        return DarbouxExpr.from_rational(x)
    c = as_gaussian(x, strict=False)
    if c is None:
        return None
    if not c:
        raise ValueError("zero is not a Darboux expression")
    return DarbouxExpr([(RPoly(c), 1)])

