"""First-order linear differential operators on the doubled variable set."""

from __future__ import annotations

from typing import Iterable, Mapping

from .darboux import DarbouxExpr
from .numbers import as_gaussian
from .poly import RPoly, RRational, RVariable, as_rational, var

__all__ = ["DiffOperator", "lie_derivative", "lie_log", "poisson_bracket", "divergence"]


def _coef(c):
    if isinstance(c, RPoly):
        return c
    if isinstance(c, RRational):
        return c.num if c.is_polynomial() else c
    return RPoly(as_gaussian(c))


class DiffOperator:
    """``sum(coefficient_v * d/dv)``; at most one term per variable.

    Coefficients are RPolys, or RRationals where a system needs them.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        d: dict = {}
        for v, c in items:
            v = var(v)
            c = _coef(c)
            d[v] = _coef(d[v] + c) if v in d else c
        self._terms = {v: c for v, c in sorted(d.items()) if c}

    @property
    def terms(self) -> list[tuple[RVariable, RPoly | RRational]]:
        return list(self._terms.items())

    def coefficient(self, v) -> RPoly | RRational:
        return self._terms.get(var(v), RPoly())

    def variables(self) -> list[RVariable]:
        return list(self._terms)

    def has_rational_coefficients(self) -> bool:
        return any(isinstance(c, RRational) for c in self._terms.values())

    def is_null(self) -> bool:
        return not self._terms

    def __call__(self, f):
        return lie_derivative(self, f)

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        return DiffOperator(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self):
        return DiffOperator({v: -c for v, c in self._terms.items()})

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-other)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator({v: k * c for v, k in self._terms.items()})

    def conjugate(self) -> "DiffOperator":
        return DiffOperator({v.partner: c.conjugate() for v, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        if set(self._terms) != set(other._terms):
            return False
        return all(self._terms[v] == other._terms[v] for v in self._terms)

    __hash__ = None

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for v, c in self._terms.items():
            cs = str(c)
            if isinstance(c, RRational) or len(c.terms) > 1:
                cs = f"({cs})"
            if out:
                out += " - " + cs[1:] if cs.startswith("-") else " + " + cs
            else:
                out = cs
            out += f" * d/d({v})"
        return out

    def __repr__(self):
        return f"DiffOperator('{self}')"


def lie_derivative(op: DiffOperator, f):
    """Apply ``op`` to a polynomial or rational function."""
    if isinstance(f, RRational):
        if f.is_polynomial():
            return as_rational(lie_derivative(op, f.num))
        ln = lie_derivative(op, f.num)
        ld = lie_derivative(op, f.den)
        if not ld:
            return as_rational(ln) / f.den
        return RRational(ln * f.den - f.num * ld, f.den * f.den, hints=(f.den,))
    if not isinstance(f, RPoly):
        f = RPoly(as_gaussian(f))
    acc = RPoly()
    for v, c in op._terms.items():
        df = f.diff(v)
        if df:
            acc = acc + c * df
    return acc


def lie_log(op: DiffOperator, d: DarbouxExpr) -> RRational:
    """Logarithmic Lie derivative ``op(d) / d``, computed without expanding powers."""
    acc = as_rational(lie_derivative(op, d.exp_part))
    for base, e in d.factors:
        lb = lie_derivative(op, base)
        if lb:
            acc = acc + as_rational(lb) / base * e
    return acc


def poisson_bracket(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """Commutator ``a∘b - b∘a``; second-order parts cancel."""
    vs = sorted(set(a._terms) | set(b._terms))
    return DiffOperator(
        {v: lie_derivative(a, b.coefficient(v)) - lie_derivative(b, a.coefficient(v)) for v in vs}
    )


def divergence(op: DiffOperator):
    acc = RPoly()
    for v, c in op._terms.items():
        acc = acc + c.diff(v)
    return _coef(acc)
